//! Represented values of positive-definite forms up to a bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::arith::{floor_rat, to_i128, Rat};
use crate::enumerate::ShortVectors;
use crate::error::{Error, Result};
use crate::forms::{FormPair, IntForm, RatForm};

/// Dense set of small non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    /// Holds values 0..len.
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v >> 6] |= 1 << (v & 63);
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.len && self.words[v >> 6] >> (v & 63) & 1 == 1
    }

    pub fn union_with(&mut self, o: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    i * 64 + b
                })
            })
        })
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Smallest value in exactly one of the two sets, compared over the common range.
    pub fn first_difference(&self, o: &BitSet) -> Option<usize> {
        self.words
            .iter()
            .zip(&o.words)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(i, (a, b))| i * 64 + (a ^ b).trailing_zeros() as usize)
            .filter(|&v| v < self.len.min(o.len))
    }

    /// The set restricted to 0..len.
    pub fn truncated(&self, len: usize) -> BitSet {
        let mut out = BitSet::new(len.min(self.len));
        let nw = out.words.len();
        out.words.copy_from_slice(&self.words[..nw]);
        if let Some(last) = out.words.last_mut() {
            let extra = nw * 64 - out.len;
            if extra > 0 {
                *last &= u64::MAX >> extra;
            }
        }
        out
    }
}

/// The values f(x) ≤ bound over nonzero integer vectors x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSet {
    bound: u64,
    bits: BitSet,
    witnesses: Option<BTreeMap<u64, Vec<i64>>>,
}

impl RepSet {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn contains(&self, v: u64) -> bool {
        v <= self.bound && self.bits.contains(v as usize)
    }

    /// Strictly increasing.
    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().map(|v| v as u64)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.values().collect()
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    /// The lexicographically smallest vector x, with last nonzero coordinate
    /// positive, such that f(x) = v. Present only when witnesses were requested.
    pub fn witness(&self, v: u64) -> Option<&[i64]> {
        self.witnesses.as_ref()?.get(&v).map(Vec::as_slice)
    }

    /// The values ≤ `bound`.
    pub fn truncated(&self, bound: u64) -> RepSet {
        let bound = bound.min(self.bound);
        let witnesses = self.witnesses.as_ref().map(|w| w.range(..=bound).map(|(k, v)| (*k, v.clone())).collect());
        RepSet { bound, bits: self.bits.truncated(bound as usize + 1), witnesses }
    }
}

fn check_bound(bound: u64) -> Result<usize> {
    // Bitsets are dense; anything beyond this is a misuse rather than a workload.
    const MAX_BOUND: u64 = 1 << 36;
    if bound > MAX_BOUND {
        return Err(Error::InvalidArgument(format!("bound {bound} exceeds {MAX_BOUND}")));
    }
    Ok(bound as usize + 1)
}

/// Every f(x) with 0 ≠ x ∈ ℤⁿ and f(x) ≤ bound.
pub fn representations_up_to(f: &IntForm, bound: u64) -> Result<RepSet> {
    let len = check_bound(bound)?;
    let sv = ShortVectors::from_bound_u64(f, bound, true)?;
    let Some((lo, hi)) = sv.top_range() else {
        return Ok(RepSet { bound, bits: BitSet::new(len), witnesses: None });
    };
    let bits = (lo..=hi)
        .into_par_iter()
        .fold(
            || BitSet::new(len),
            |mut acc, t| {
                sv.for_each_with_top(t, &mut |_, v| acc.insert(v as usize));
                acc
            },
        )
        .reduce(
            || BitSet::new(len),
            |mut a, b| {
                a.union_with(&b);
                a
            },
        );
    Ok(RepSet { bound, bits, witnesses: None })
}

/// As [`representations_up_to`], keeping one witness vector per value.
pub fn representations_with_witnesses(f: &IntForm, bound: u64) -> Result<RepSet> {
    let len = check_bound(bound)?;
    let sv = ShortVectors::from_bound_u64(f, bound, true)?;
    let mut bits = BitSet::new(len);
    let mut wit: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    sv.for_each(|x, v| {
        let v = v as u64;
        bits.insert(v as usize);
        match wit.get_mut(&v) {
            Some(w) if x < w.as_slice() => {
                w.clear();
                w.extend_from_slice(x);
            }
            Some(_) => {}
            None => {
                wit.insert(v, x.to_vec());
            }
        }
    });
    Ok(RepSet { bound, bits, witnesses: Some(wit) })
}

/// All nonzero vectors x with f(x) = value, with the sign normalized so the
/// last nonzero coordinate is positive. Sorted lexicographically.
pub fn vectors_of_value(f: &IntForm, value: u64) -> Result<Vec<Vec<i64>>> {
    let sv = ShortVectors::from_bound_u64(f, value, true)?;
    let mut out = Vec::new();
    let target = value as i128;
    sv.for_each(|x, v| {
        if v == target {
            out.push(x.to_vec());
        }
    });
    out.sort();
    Ok(out)
}

/// Which of two forms misses a value the other represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Missing {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepComparison {
    pub bound: u64,
    /// The smallest value represented by exactly one form, and which form misses it.
    pub discrepancy: Option<(u64, Missing)>,
}

impl RepComparison {
    pub fn equal(&self) -> bool {
        self.discrepancy.is_none()
    }
}

pub fn compare_rep_sets(r: &RepSet, s: &RepSet) -> RepComparison {
    let bound = r.bound.min(s.bound);
    let (r, s) = (r.truncated(bound), s.truncated(bound));
    let discrepancy = r.bits.first_difference(&s.bits).map(|v| {
        let which = if r.bits.contains(v) { Missing::Second } else { Missing::First };
        (v as u64, which)
    });
    RepComparison { bound, discrepancy }
}

/// q_ℤ(f) ∩ [0, M] = q_ℤ(g) ∩ [0, M].
pub fn rep_equal_up_to(f: &IntForm, g: &IntForm, bound: u64) -> Result<RepComparison> {
    let (r, s) = rayon::join(|| representations_up_to(f, bound), || representations_up_to(g, bound));
    Ok(compare_rep_sets(&r?, &s?))
}

/// Sorted simultaneous values (A(x), B(x)), each with the lexicographically
/// smallest witness x (last nonzero coordinate positive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimRepSet {
    pub entries: BTreeMap<(Rat, Rat), Vec<i64>>,
}

impl SimRepSet {
    pub fn pairs(&self) -> Vec<(Rat, Rat)> {
        self.entries.keys().cloned().collect()
    }
}

/// (A(x), B(x)) over 0 ≠ x ∈ ℤ³ with (c·A + d·B)(x) ≤ M.
pub fn simultaneous_reps(p: &FormPair, c: &Rat, d: &Rat, bound: &Rat) -> Result<SimRepSet> {
    let comb: RatForm = p.a.scale(c).add(&p.b.scale(d))?;
    if !comb.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let (l, int_comb) = comb.integral_multiple();
    let scaled: BigInt = floor_rat(&(bound * Rat::from_integer(l)));
    if scaled.is_negative() {
        return Ok(SimRepSet { entries: BTreeMap::new() });
    }
    let sv = ShortVectors::new(&int_comb, to_i128(&scaled)?, true)?;
    let mut entries: BTreeMap<(Rat, Rat), Vec<i64>> = BTreeMap::new();
    let mut err = None;
    sv.for_each(|x, _| {
        let xr: Vec<Rat> = x.iter().map(|&t| Rat::from_integer(t.into())).collect();
        let key = match (p.a.evaluate(&xr), p.b.evaluate(&xr)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                return;
            }
        };
        let e = entries.entry(key).or_insert_with(|| x.to_vec());
        if x < e.as_slice() {
            *e = x.to_vec();
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(SimRepSet { entries }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;

    #[test]
    fn sum_of_three_squares() {
        let f = IntForm::diagonal(&[1, 1, 1]).unwrap();
        assert_eq!(representations_up_to(&f, 10).unwrap().to_vec(), vec![1, 2, 3, 4, 5, 6, 8, 9, 10]);
    }

    #[test]
    fn hexagonal_binary() {
        let f = IntForm::binary(1, 1, -1);
        assert_eq!(representations_up_to(&f, 7).unwrap().to_vec(), vec![1, 3, 4, 7]);
    }

    #[test]
    fn witnesses_evaluate_correctly() {
        let f = IntForm::ternary([2, 3, 5, -2, 0, 0]);
        let r = representations_with_witnesses(&f, 60).unwrap();
        for v in r.values() {
            let w = r.witness(v).unwrap();
            assert_eq!(f.evaluate_i64(w).unwrap(), v.into());
        }
        assert_eq!(r.to_vec(), representations_up_to(&f, 60).unwrap().to_vec());
    }

    #[test]
    fn watson_example_and_discrepancy() {
        let a = IntForm::binary(1, 1, -1).direct_sum(&IntForm::diagonal(&[5]).unwrap()).unwrap();
        let b = IntForm::binary(1, 3, 0).direct_sum(&IntForm::diagonal(&[5]).unwrap()).unwrap();
        assert!(rep_equal_up_to(&a, &b, 10_000).unwrap().equal());
        let c = rep_equal_up_to(
            &IntForm::diagonal(&[1, 1, 1]).unwrap(),
            &IntForm::diagonal(&[1, 1, 2]).unwrap(),
            10,
        )
        .unwrap();
        assert_eq!(c.discrepancy, Some((7, Missing::First)));
    }

    #[test]
    fn simultaneous_small_box() {
        let p = FormPair::from_int(&IntForm::ternary([1, 1, 0, -1, 0, 0]), &IntForm::ternary([0, 0, 1, 0, 0, 0])).unwrap();
        let s = simultaneous_reps(&p, &rat_int(1), &rat_int(1), &rat_int(2)).unwrap();
        let expected: Vec<(Rat, Rat)> = [(0, 1), (1, 0), (1, 1)].iter().map(|&(a, b)| (rat_int(a), rat_int(b))).collect();
        assert_eq!(s.pairs(), expected);
        assert_eq!(s.entries[&(rat_int(0), rat_int(1))], vec![0, 0, 1]);
    }
}
