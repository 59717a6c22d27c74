//! Enumeration of all Minkowski-reduced forms with a prescribed list of
//! small values, and the driver that searches ternary forms for
//! inequivalent classes with identical representation sets.
//!
//! The recursion fixes the Gram entries column by column. For column j it
//! picks s_jj from Λ, then s_{j−1,j}, …, s_{1,j} through the values
//! S(e_k + e_j) ∈ Λ, each restricted to the interval cut out by the
//! Minkowski inequalities on the entries fixed so far. Entries here are
//! polynomial coefficients, so S(e_k + e_j) = s_kk + s_jj + s_kj.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::is_single_family_set;
use crate::forms::{ternary_digits, IntForm, MAX_DIM};
use crate::reduce::eisenstein_canonical;
use crate::equiv::equivalent_over_z;
use crate::reps::{representations_up_to, BitSet};

/// A strictly increasing list ⟨q_1, …, q_t⟩ of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lambda {
    values: Vec<u64>,
    members: BitSet,
}

impl Lambda {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() || values[0] == 0 || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("Λ must be a nonempty strictly increasing list of positive integers".into()));
        }
        let mut members = BitSet::new(*values.last().expect("nonempty") as usize + 1);
        for &q in &values {
            members.insert(q as usize);
        }
        Ok(Lambda { values, members })
    }

    pub fn contains(&self, q: u64) -> bool {
        q <= self.last() && self.members.contains(q as usize)
    }

    /// q_ℤ(f) ∩ [1, bound].
    pub fn of_form(f: &IntForm, bound: u64) -> Result<Self> {
        Self::new(representations_up_to(f, bound)?.to_vec())
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// q_t.
    pub fn last(&self) -> u64 {
        *self.values.last().expect("nonempty")
    }

    fn within(&self, lo: i64, hi: i64) -> &[u64] {
        if hi < lo || hi < 1 {
            return &[];
        }
        let lo = lo.max(1) as u64;
        let hi = hi as u64;
        let a = self.values.partition_point(|&q| q < lo);
        let b = self.values.partition_point(|&q| q <= hi);
        &self.values[a..b.max(a)]
    }
}

/// Whether the run certifies that Λ was long enough.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Markers {
    /// Every sub-form missed some value of Λ before q_t (t2 < t).
    pub guard_below_end: bool,
    /// Every off-diagonal interval ended at or below q_t.
    pub interval_within_lambda: bool,
}

impl Markers {
    pub const CERTIFIED: Markers = Markers { guard_below_end: true, interval_within_lambda: true };

    pub fn complete(&self) -> bool {
        self.guard_below_end && self.interval_within_lambda
    }

    pub fn merge(&mut self, o: Markers) {
        self.guard_below_end &= o.guard_below_end;
        self.interval_within_lambda &= o.interval_within_lambda;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidates {
    /// Minkowski-reduced forms with s_NN ≤ q_t, Λ ∩ [0, s_NN] ⊆ q_ℤ(S) and
    /// every s_nn and S(e_m + e_n) in Λ, in discovery order.
    pub forms: Vec<IntForm>,
    pub markers: Markers,
}

/// The 1-based index t2 = max { i ≤ t : q_1, …, q_{i−1} ∈ q_ℤ(T) }, so q_{t2}
/// is the first value of Λ that T misses, or t2 = t if it misses none.
pub fn first_missing_index(t: &IntForm, lambda: &Lambda) -> Result<usize> {
    let q = lambda.values();
    let qt = lambda.last();
    let mut bound = qt.min((q[0] * 4).max(64));
    loop {
        let reps = representations_up_to(t, bound)?;
        if let Some(i) = q.iter().take_while(|&&x| x <= bound).position(|&x| !reps.contains(x)) {
            return Ok(i + 1);
        }
        if bound >= qt {
            return Ok(q.len());
        }
        bound = (bound * 2).min(qt);
    }
}

struct Walk<'a> {
    lambda: &'a Lambda,
    n: usize,
    s: [[i64; MAX_DIM]; MAX_DIM],
    out: Vec<IntForm>,
    markers: Markers,
    /// Skip branches whose fixed entries already represent a value of
    /// [1, q_t] outside Λ. Such forms fail the exact-Λ filter anyway.
    prune: bool,
}

impl Walk<'_> {
    fn leading(&self, k: usize) -> Result<IntForm> {
        let mut c: Vec<i64> = (0..k).map(|i| self.s[i][i]).collect();
        for i in 0..k {
            for j in i + 1..k {
                c.push(self.s[i][j]);
            }
        }
        IntForm::from_i64(k, &c)
    }

    /// Bounds on S(e_k + e_j) from s_jj ≤ S(v) over v with v_i = 0 (i < k),
    /// v_k = ±1, v_i ∈ {−1, 0, 1} (k < i < j), v_j = 1, and from s_{j−1,j} ≤ 0.
    fn interval(&self, k: usize, j: usize) -> (i64, i64) {
        let s = &self.s;
        let (mut lo, mut hi) = (i64::MIN, i64::MAX);
        let free = j - k - 1;
        for code in 0..3usize.pow(free as u32) {
            let digits = ternary_digits(code, free);
            let mut v = [0i64; MAX_DIM];
            v[j] = 1;
            for (t, d) in digits.iter().take(free).enumerate() {
                v[k + 1 + t] = *d;
            }
            for vk in [1, -1] {
                v[k] = vk;
                // S(v) without its v_k v_j s_kj term.
                let mut rest = 0i64;
                for a in k..=j {
                    if v[a] == 0 {
                        continue;
                    }
                    rest += s[a][a];
                    for b in a + 1..=j {
                        if (a, b) != (k, j) {
                            rest += v[a] * v[b] * s[a][b];
                        }
                    }
                }
                if vk == 1 {
                    lo = lo.max(s[j][j] - rest);
                } else {
                    hi = hi.min(rest - s[j][j]);
                }
            }
        }
        if k + 1 == j {
            hi = hi.min(0);
        }
        let base = s[k][k] + s[j][j];
        (base + lo, base + hi)
    }

    /// S(v) ∉ Λ for some v ≤ q_t in the box [−2, 2] supported on r..=j with
    /// v_j ∈ {1, 2}; only entries fixed so far are read.
    fn leaves_lambda(&self, r: usize, j: usize) -> bool {
        let s = &self.s;
        let qt = self.lambda.last() as i64;
        let free = j - r;
        for code in 0..5usize.pow(free as u32) {
            let mut v = [0i64; MAX_DIM];
            let mut c = code;
            for t in r..j {
                v[t] = (c % 5) as i64 - 2;
                c /= 5;
            }
            for vj in 1..=2 {
                v[j] = vj;
                let mut val = 0i64;
                for a in r..=j {
                    val += v[a] * v[a] * s[a][a];
                    for b in a + 1..=j {
                        val += v[a] * v[b] * s[a][b];
                    }
                }
                if val <= qt && (val <= 0 || !self.lambda.contains(val as u64)) {
                    return true;
                }
            }
        }
        false
    }

    /// Fixes entry (r, j) to each admissible value of Λ in [lo, hi] in turn.
    fn step(&mut self, r: usize, j: usize, lo: i64, hi: i64) -> Result<()> {
        let lambda = self.lambda;
        for &q in lambda.within(lo, hi) {
            let q = q as i64;
            if r == j {
                self.s[j][j] = q;
            } else {
                self.s[r][j] = q - self.s[r][r] - self.s[j][j];
            }
            if self.prune && self.leaves_lambda(r, j) {
                continue;
            }
            if r > 0 {
                let (plo, phi) = self.interval(r - 1, j);
                if phi > lambda.last() as i64 {
                    self.markers.interval_within_lambda = false;
                }
                self.step(r - 1, j, plo, phi)?;
            } else if j + 1 >= self.n {
                let f = self.leading(self.n)?;
                if f.is_positive_definite() {
                    debug_assert!(f.is_minkowski_reduced());
                    self.out.push(f);
                }
            } else {
                let t2 = first_missing_index(&self.leading(j + 1)?, lambda)?;
                if t2 >= lambda.len() {
                    self.markers.guard_below_end = false;
                }
                let cap = lambda.values()[t2 - 1] as i64;
                self.step(j + 1, j + 1, self.s[j][j], cap)?;
            }
        }
        Ok(())
    }
}

/// Every Minkowski-reduced N-ary form S with s_NN ≤ q_t whose diagonal
/// entries and values S(e_m + e_n) lie in Λ and which represents every
/// q ∈ Λ up to s_NN. Forms with Λ = q_ℤ(S) ∩ [0, q_t] are among them, and
/// all of them when both markers hold.
pub fn candidate_forms(lambda: &Lambda, n: usize) -> Result<Candidates> {
    walk(lambda, n, false)
}

fn walk(lambda: &Lambda, n: usize, prune: bool) -> Result<Candidates> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let mut walk =
        Walk { lambda, n, s: [[0; MAX_DIM]; MAX_DIM], out: Vec::new(), markers: Markers::CERTIFIED, prune };
    let q1 = lambda.values()[0] as i64;
    walk.step(0, 0, q1, q1)?;
    Ok(Candidates { forms: walk.out, markers: walk.markers })
}

/// Λ = q_ℤ(S) ∩ [0, q_t].
pub fn matches_lambda_exactly(s: &IntForm, lambda: &Lambda) -> Result<bool> {
    let reps = representations_up_to(s, lambda.last())?;
    Ok(reps.len() == lambda.len() && reps.values().eq(lambda.values().iter().copied()))
}

/// One representative per GL_N(ℤ) class, sorted. Ternary representatives
/// are Eisenstein-reduced; otherwise the smallest input of each class is kept.
pub fn dedup_classes(forms: &[IntForm]) -> Result<Vec<IntForm>> {
    if forms.iter().all(|f| f.dim() == 3) {
        let set = forms
            .iter()
            .map(|f| eisenstein_canonical(f).map(|r| r.form))
            .collect::<Result<BTreeSet<_>>>()?;
        return Ok(set.into_iter().collect());
    }
    let mut sorted: Vec<IntForm> = forms.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut reps: Vec<IntForm> = Vec::new();
    for f in sorted {
        let mut seen = false;
        for g in &reps {
            if g.dim() == f.dim() && equivalent_over_z(g, &f)?.is_some() {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(f);
        }
    }
    Ok(reps)
}

/// Candidates for Λ passing the exact-Λ filter, reduced to class
/// representatives. The walk prunes branches that the filter would reject.
pub fn classes_with_lambda(lambda: &Lambda, n: usize) -> Result<(Vec<IntForm>, Markers)> {
    let c = walk(lambda, n, true)?;
    let mut kept = Vec::new();
    for f in c.forms {
        if matches_lambda_exactly(&f, lambda)? {
            kept.push(f);
        }
    }
    Ok((dedup_classes(&kept)?, c.markers))
}

/// Eisenstein-reduced primitive ternary forms with s33 ≤ bound, sorted.
pub fn eisenstein_forms(s33_max: u64) -> Result<Vec<IntForm>> {
    let b = i64::try_from(s33_max).map_err(|_| Error::Overflow)?;
    let per_c = (1..=b)
        .into_par_iter()
        .map(|c| {
            let mut out = Vec::new();
            for a in 1..=c {
                for bb in a..=c {
                    for p12 in -a..=a {
                        for p13 in -a..=a {
                            for p23 in -bb..=bb {
                                let pos = p12 > 0 && p13 > 0 && p23 > 0;
                                let nonpos = p12 <= 0 && p13 <= 0 && p23 <= 0;
                                if !pos && !nonpos {
                                    continue;
                                }
                                let f = IntForm::ternary([a, bb, c, p12, p13, p23]);
                                if f.is_primitive() && f.is_eisenstein_reduced()? {
                                    out.push(f);
                                }
                            }
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut all: Vec<IntForm> = per_c.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub s33_max: u64,
    /// Initial length of Λ handed to the recursion; doubled while a
    /// completeness marker fails, up to `lambda_bound`.
    pub screen_bound: u64,
    /// Bound at which candidate sets are first re-split.
    pub lambda_bound: u64,
    /// Bound at which surviving sets are confirmed.
    pub verify_bound: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { s33_max: 12, screen_bound: 256, lambda_bound: 3000, verify_bound: 3000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundSet {
    /// Eisenstein-reduced, sorted.
    pub forms: Vec<IntForm>,
    pub verified_to: u64,
    /// Both markers held for the Λ that produced the set.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub sets: Vec<FoundSet>,
    pub forms_scanned: usize,
    pub lambda_runs: usize,
    pub family_sets_dropped: usize,
    /// Sets with a member whose s33 exceeds the region bound; not part of `sets`.
    pub beyond_region: Vec<FoundSet>,
    /// Markers over every recursion run.
    pub markers: Markers,
}

/// Runs the recursion on q_ℤ(f) ∩ [0, M], doubling M while a marker fails.
fn classes_for_form(f: &IntForm, screen: u64, cap: u64) -> Result<(Vec<IntForm>, Markers)> {
    let mut bound = screen.min(cap);
    loop {
        let lambda = Lambda::of_form(f, bound)?;
        let (classes, markers) = classes_with_lambda(&lambda, f.dim())?;
        if markers.complete() || bound >= cap {
            return Ok((classes, markers));
        }
        bound = (bound * 2).min(cap);
    }
}

/// Partitions forms by q_ℤ ∩ [0, bound], keeping parts of size at least two.
fn split_by_reps(forms: &[IntForm], bound: u64) -> Result<Vec<Vec<IntForm>>> {
    let reps = forms.par_iter().map(|f| representations_up_to(f, bound)).collect::<Result<Vec<_>>>()?;
    let mut parts: HashMap<&BitSet, Vec<IntForm>> = HashMap::new();
    for (f, r) in forms.iter().zip(&reps) {
        parts.entry(r.bits()).or_default().push(f.clone());
    }
    let mut out: Vec<Vec<IntForm>> = parts.into_values().filter(|p| p.len() >= 2).collect();
    for p in &mut out {
        p.sort();
    }
    out.sort();
    Ok(out)
}

/// Searches Eisenstein-reduced primitive ternary forms with s33 ≤ `s33_max`
/// for sets of two or more inequivalent forms with identical representation
/// sets, dropping sets that lie in a single hexagonal or rhombohedral
/// family instance. Sets are reported only when every member lies in the
/// region; the rest go to `beyond_region`. Output is sorted and independent
/// of thread count.
pub fn search_region(config: &SearchConfig) -> Result<SearchReport> {
    if config.s33_max == 0 || config.screen_bound == 0 {
        return Err(Error::InvalidArgument("bounds must be positive".into()));
    }
    let region = eisenstein_forms(config.s33_max)?;
    let screens = region
        .par_iter()
        .map(|f| representations_up_to(f, config.screen_bound).map(|r| r.bits().clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut by_lambda: HashMap<BitSet, &IntForm> = HashMap::new();
    for (f, bits) in region.iter().zip(screens) {
        by_lambda.entry(bits).or_insert(f);
    }
    let mut seeds: Vec<&IntForm> = by_lambda.into_values().collect();
    seeds.sort();
    let runs = seeds
        .par_iter()
        .map(|f| classes_for_form(f, config.screen_bound, config.lambda_bound.max(config.screen_bound)))
        .collect::<Result<Vec<_>>>()?;
    let mut markers = Markers::CERTIFIED;
    let mut candidates: BTreeSet<(Vec<IntForm>, bool)> = BTreeSet::new();
    for (classes, m) in runs {
        markers.merge(m);
        if classes.len() >= 2 {
            candidates.insert((classes, m.complete()));
        }
    }
    let verified_to = config.verify_bound.max(config.lambda_bound);
    let mut found: BTreeSet<(Vec<IntForm>, bool)> = BTreeSet::new();
    for (set, complete) in candidates {
        for part in split_by_reps(&set, config.lambda_bound)? {
            for confirmed in split_by_reps(&part, verified_to)? {
                found.insert((confirmed, complete));
            }
        }
    }
    let mut sets = Vec::new();
    let mut beyond_region = Vec::new();
    let mut family_sets_dropped = 0;
    let s33_max = num_bigint::BigInt::from(config.s33_max);
    let mut last: Option<Vec<IntForm>> = None;
    for (forms, complete) in found {
        // The same set reached from two Λ runs keeps a single entry.
        if last.as_ref() == Some(&forms) {
            continue;
        }
        last = Some(forms.clone());
        if is_single_family_set(&forms)? {
            family_sets_dropped += 1;
            continue;
        }
        let inside = forms.iter().all(|f| *f.coeff(2, 2) <= s33_max);
        let set = FoundSet { forms, verified_to, complete };
        if inside {
            sets.push(set);
        } else {
            beyond_region.push(set);
        }
    }
    Ok(SearchReport {
        sets,
        forms_scanned: region.len(),
        lambda_runs: seeds.len(),
        family_sets_dropped,
        beyond_region,
        markers,
    })
}
