//! Independent reference computations used by the integration tests. Nothing
//! here calls the enumeration, reduction or equivalence code under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use qform::search::{candidate_forms, classes_with_lambda, dedup_classes, matches_lambda_exactly, Lambda};
use qform::{IntForm, IntMatrix};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn coeffs_i64(f: &IntForm) -> Vec<i64> {
    f.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
}

/// Σ s_ii x_i² + Σ_{i<j} s_ij x_i x_j straight from the coefficient list.
pub fn poly_value(f: &IntForm, x: &[i64]) -> i128 {
    let n = f.dim();
    let c = coeffs_i64(f);
    let mut v = 0i128;
    for i in 0..n {
        v += c[i] as i128 * (x[i] as i128) * (x[i] as i128);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            v += c[k] as i128 * x[i] as i128 * x[j] as i128;
            k += 1;
        }
    }
    v
}

/// Gram matrix with halved off-diagonal coefficients.
pub fn gram(f: &IntForm) -> Vec<Vec<Q>> {
    let n = f.dim();
    let c = coeffs_i64(f);
    let mut g = vec![vec![q(0); n]; n];
    let mut k = n;
    for i in 0..n {
        g[i][i] = q(c[i]);
    }
    for i in 0..n {
        for j in i + 1..n {
            g[i][j] = Q::new(c[k].into(), 2.into());
            g[j][i] = g[i][j].clone();
            k += 1;
        }
    }
    g
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut d = q(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return q(0);
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        let piv = a[col][col].clone();
        d *= &piv;
        for r in col + 1..n {
            let f = &a[r][col] / &piv;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    d
}

/// All leading principal minors positive.
pub fn positive_definite(m: &[Vec<Q>]) -> bool {
    (1..=m.len()).all(|k| {
        let sub: Vec<Vec<Q>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        det(&sub).is_positive()
    })
}

/// A rational t > 0 with t ≤ λ_min(G), found by bisection on the exact
/// test "G − t·I is positive-definite".
pub fn eigen_lower_bound(f: &IntForm) -> Q {
    let g = gram(f);
    let n = g.len();
    let shifted = |t: &Q| -> Vec<Vec<Q>> {
        let mut m = g.clone();
        for (i, row) in m.iter_mut().enumerate().take(n) {
            row[i] -= t;
        }
        m
    };
    let mut lo = q(0);
    let mut hi = g.iter().enumerate().map(|(i, r)| r[i].clone()).min().unwrap();
    for _ in 0..40 {
        let mid = (&lo + &hi) / q(2);
        if positive_definite(&shifted(&mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!(lo.is_positive(), "form is not positive-definite");
    lo
}

/// Every nonzero x in the box |x_i| ≤ √(M/λ) together with f(x), for f(x) ≤ M.
pub fn naive_vectors(f: &IntForm, bound: u64) -> Vec<(Vec<i64>, i128)> {
    let lam = eigen_lower_bound(f);
    let m = q(bound as i64);
    let mut r = 0i64;
    while q((r + 1) * (r + 1)) * &lam <= m {
        r += 1;
    }
    let n = f.dim();
    let side = (2 * r + 1) as usize;
    let mut out = Vec::new();
    for code in 0..side.pow(n as u32) {
        let mut c = code;
        let x: Vec<i64> = (0..n)
            .map(|_| {
                let d = (c % side) as i64 - r;
                c /= side;
                d
            })
            .collect();
        if x.iter().all(|&t| t == 0) {
            continue;
        }
        let v = poly_value(f, &x);
        if v <= bound as i128 {
            out.push((x, v));
        }
    }
    out
}

pub fn naive_reps(f: &IntForm, bound: u64) -> BTreeSet<u64> {
    naive_vectors(f, bound).into_iter().map(|(_, v)| v as u64).collect()
}

/// Values λ_1 ≤ … ≤ λ_n of a greedy choice of linearly independent short vectors.
pub fn successive_minima(f: &IntForm) -> Vec<i128> {
    let n = f.dim();
    let bound = (0..n).map(|i| f.coeff(i, i).to_u64().unwrap()).max().unwrap();
    let mut vs = naive_vectors(f, bound);
    vs.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    let mut minima = Vec::new();
    for (x, v) in vs {
        if minima.len() == n {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(x.iter().map(|&t| q(t)).collect());
        if rank(&trial) == trial.len() {
            chosen = trial;
            minima.push(v);
        }
    }
    minima
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let (m, n) = (a.len(), a.first().map_or(0, Vec::len));
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(p, r);
        for i in 0..m {
            if i != r && !a[i][col].is_zero() {
                let f = &a[i][col] / &a[r][col];
                for c in col..n {
                    let t = &f * &a[r][c];
                    a[i][c] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// A random product of elementary integer matrices (determinant ±1).
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IntMatrix {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..steps {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        match rng.gen_range(0..3) {
            0 if i != j => {
                let k = rng.gen_range(-2..=2);
                for c in 0..n {
                    m[i][c] += k * m[j][c];
                }
            }
            1 => m.swap(i, j),
            _ => m[i].iter_mut().for_each(|v| *v = -*v),
        }
    }
    IntMatrix::from_rows_i64(&m).unwrap()
}

/// Random positive-definite form of dimension n with small coefficients.
pub fn random_form(rng: &mut impl Rng, n: usize, max: i64) -> IntForm {
    loop {
        let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max)).collect();
        for _ in 0..n * (n - 1) / 2 {
            c.push(rng.gen_range(-max..=max));
        }
        let f = IntForm::from_i64(n, &c).unwrap();
        if positive_definite(&gram(&f)) {
            return f;
        }
    }
}

fn reduced_binaries(max: i64) -> Vec<IntForm> {
    let mut out = Vec::new();
    for a in 1..=max {
        for c in a..=max {
            for b in -a..=0 {
                out.push(IntForm::binary(a, c, b));
            }
        }
    }
    out
}

/// For every Λ = q_ℤ(f) ∩ [0, 40] with f a reduced binary form with s22 ≤ 6,
/// the filtered recursion output equals the reduced binary forms with
/// coefficients bounded by 40 and Λ = q_ℤ(S) ∩ [0, q_t], found by box
/// enumeration. Returns the first mismatch.
pub fn binary_oracle_check() -> Result<usize, String> {
    let pool: Vec<(IntForm, BTreeSet<u64>)> = reduced_binaries(40)
        .into_iter()
        .map(|f| {
            let r = naive_reps(&f, 40);
            (f, r)
        })
        .collect();
    let lambdas: BTreeSet<Vec<u64>> = reduced_binaries(6).iter().map(|f| naive_reps(f, 40).into_iter().collect()).collect();
    for values in &lambdas {
        let lambda = Lambda::new(values.clone()).map_err(|e| e.to_string())?;
        let qt = lambda.last();
        let want: BTreeSet<u64> = values.iter().copied().collect();
        let mut expected: Vec<IntForm> = pool
            .iter()
            .filter(|(_, r)| r.range(..=qt).copied().collect::<BTreeSet<u64>>() == want)
            .map(|(f, _)| f.clone())
            .collect();
        expected.sort();
        let mut raw: Vec<IntForm> = candidate_forms(&lambda, 2)
            .map_err(|e| e.to_string())?
            .forms
            .into_iter()
            .filter(|f| matches_lambda_exactly(f, &lambda).unwrap())
            .collect();
        raw.sort();
        if raw != expected {
            return Err(format!("Λ = {values:?}: recursion gave {raw:?}, brute force {expected:?}"));
        }
        let (classes, _) = classes_with_lambda(&lambda, 2).map_err(|e| e.to_string())?;
        if classes != dedup_classes(&expected).map_err(|e| e.to_string())? {
            return Err(format!("Λ = {values:?}: class representatives differ"));
        }
    }
    Ok(lambdas.len())
}
