//! Equivalence of forms over ℤ and over ℚ.

use std::collections::BTreeMap;

use crate::arith::rational_square;
use crate::error::{Error, Result};
use crate::forms::{IntForm, IntMatrix, MAX_DIM};
use crate::reduce::{bilinear, doubled_gram, minkowski_reduce};
use crate::enumerate::ShortVectors;

type Vec4 = [i128; MAX_DIM];

/// Vectors of f with value ≤ bound, both signs, grouped by value. Each list
/// is sorted lexicographically.
fn vectors_by_value(f: &IntForm, bound: i128) -> Result<BTreeMap<i128, Vec<Vec4>>> {
    let sv = ShortVectors::new(f, bound, true)?;
    let mut out: BTreeMap<i128, Vec<Vec4>> = BTreeMap::new();
    sv.for_each(|x, v| {
        let mut r = [0i128; MAX_DIM];
        for (t, &c) in x.iter().enumerate() {
            r[t] = c as i128;
        }
        let e = out.entry(v).or_default();
        e.push(r);
        e.push(r.map(|c| -c));
    });
    for l in out.values_mut() {
        l.sort();
    }
    Ok(out)
}

/// A unimodular w with f(x·w) = g(x), or None when f and g are not
/// equivalent over ℤ.
pub fn equivalent_over_z(f: &IntForm, g: &IntForm) -> Result<Option<IntMatrix>> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    if !f.is_positive_definite() || !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    if f.gram_determinant() != g.gram_determinant() {
        return Ok(None);
    }
    let n = f.dim();
    let (fr, gr) = (minkowski_reduce(f)?, minkowski_reduce(g)?);
    if (0..n).any(|i| fr.form.coeff(i, i) != gr.form.coeff(i, i)) {
        return Ok(None);
    }
    let hf = doubled_gram(&fr.form)?;
    let hg = doubled_gram(&gr.form)?;
    let top = hg[n - 1][n - 1] / 2;
    let vf = vectors_by_value(&fr.form, top)?;
    let vg = vectors_by_value(&gr.form, top)?;
    let counts = |m: &BTreeMap<i128, Vec<Vec4>>| m.iter().map(|(k, v)| (*k, v.len())).collect::<Vec<_>>();
    if counts(&vf) != counts(&vg) {
        return Ok(None);
    }
    let empty = Vec::new();
    let cands: Vec<&Vec<Vec4>> = (0..n).map(|j| vf.get(&(hg[j][j] / 2)).unwrap_or(&empty)).collect();
    let mut rows: Vec<Vec4> = Vec::with_capacity(n);
    if !extend(&hf, &hg, n, &cands, &mut rows) {
        return Ok(None);
    }
    // f_red(x·w'') = g_red(x) ⇒ f(x · T_g⁻¹ · w'' · T_f) = g(x).
    let rows64: Vec<Vec<i64>> = rows.iter().map(|r| r[..n].iter().map(|&v| v as i64).collect()).collect();
    let inner = IntMatrix::from_rows_i64(&rows64)?;
    let w = gr.transform.inverse()?.mul(&inner).mul(&fr.transform);
    debug_assert_eq!(f.transform(&w)?, *g);
    Ok(Some(w))
}

fn extend(hf: &[[i128; MAX_DIM]; MAX_DIM], hg: &[[i128; MAX_DIM]; MAX_DIM], n: usize, cands: &[&Vec<Vec4>], rows: &mut Vec<Vec4>) -> bool {
    let j = rows.len();
    if j == n {
        return true;
    }
    for v in cands[j].iter() {
        if (0..j).all(|i| bilinear(hf, n, &rows[i], v) == hg[i][j]) {
            rows.push(*v);
            if extend(hf, hg, n, cands, rows) {
                return true;
            }
            rows.pop();
        }
    }
    false
}

/// For ternary forms with the same representations, equivalence over ℚ
/// holds iff det f / det g is a rational square.
pub fn rationally_equivalent_by_det(f: &IntForm, g: &IntForm) -> Result<bool> {
    let (df, dg) = (f.gram_determinant(), g.gram_determinant());
    if num_traits::Zero::is_zero(&dg) {
        return Err(Error::Singular("zero determinant".into()));
    }
    rational_square(&(df / dg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_permutation_witnesses() {
        let f = IntForm::diagonal(&[1, 2, 3]).unwrap();
        let w = equivalent_over_z(&f, &f).unwrap().unwrap();
        assert_eq!(f.transform(&w).unwrap(), f);
        let g = IntForm::diagonal(&[2, 1, 3]).unwrap();
        let w = equivalent_over_z(&f, &g).unwrap().unwrap();
        assert_eq!(f.transform(&w).unwrap(), g);
    }

    #[test]
    fn distinct_classes_with_equal_determinant() {
        let a = IntForm::ternary([2, 3, 5, -2, 0, 0]);
        let b = IntForm::ternary([2, 2, 7, -1, -1, -1]);
        assert_eq!(a.gram_determinant(), b.gram_determinant());
        assert_eq!(equivalent_over_z(&a, &b).unwrap(), None);
    }

    #[test]
    fn determinant_ratio_criterion() {
        let one = IntForm::diagonal(&[1, 1, 1]).unwrap();
        assert!(rationally_equivalent_by_det(&one, &IntForm::diagonal(&[1, 2, 2]).unwrap()).unwrap());
        let a = IntForm::ternary([11, 32, 44, -8, -4, -16]);
        let b = IntForm::ternary([11, 32, 59, 8, 10, 8]);
        assert!(!rationally_equivalent_by_det(&a, &b).unwrap());
        assert!(rationally_equivalent_by_det(&a, &a).unwrap());
    }
}
