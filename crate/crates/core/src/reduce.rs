//! Reduction of positive-definite forms: Minkowski-reduced bases by greedy
//! choice of successive minima, and the Eisenstein-reduced representative of
//! a ternary class.

use num_integer::Integer;

use crate::enumerate::ShortVectors;
use crate::error::{Error, Result};
use crate::forms::{IntForm, IntMatrix, MAX_DIM};

/// A form together with the change of basis that produced it:
/// `form = original.transform(&transform)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub form: IntForm,
    pub transform: IntMatrix,
}

type Vec4 = [i128; MAX_DIM];

/// Doubled Gram matrix: H_ii = 2 s_ii, H_ij = s_ij, so f(x) = x H xᵀ / 2.
pub(crate) fn doubled_gram(f: &IntForm) -> Result<[[i128; MAX_DIM]; MAX_DIM]> {
    let s = f.upper_i128()?;
    let n = f.dim();
    let mut h = [[0i128; MAX_DIM]; MAX_DIM];
    for i in 0..n {
        h[i][i] = 2 * s[i][i];
        for j in i + 1..n {
            h[i][j] = s[i][j];
            h[j][i] = s[i][j];
        }
    }
    Ok(h)
}

pub(crate) fn bilinear(h: &[[i128; MAX_DIM]; MAX_DIM], n: usize, u: &Vec4, v: &Vec4) -> i128 {
    let mut acc = 0i128;
    for i in 0..n {
        if u[i] == 0 {
            continue;
        }
        let mut r = 0i128;
        for j in 0..n {
            r += h[i][j] * v[j];
        }
        acc += u[i] * r;
    }
    acc
}

/// Determinant of the leading k×k block.
pub(crate) fn det_small(m: &[Vec4], k: usize) -> i128 {
    match k {
        0 => 1,
        1 => m[0][0],
        _ => {
            let mut total = 0i128;
            for c in 0..k {
                if m[0][c] == 0 {
                    continue;
                }
                let minor: Vec<Vec4> = m[1..k]
                    .iter()
                    .map(|row| {
                        let mut r = [0i128; MAX_DIM];
                        let mut t = 0;
                        for (j, &v) in row.iter().enumerate().take(k) {
                            if j != c {
                                r[t] = v;
                                t += 1;
                            }
                        }
                        r
                    })
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                total += sign * m[0][c] * det_small(&minor, k - 1);
            }
            total
        }
    }
}

/// Rows form a primitive system: the gcd of their maximal minors is 1.
pub(crate) fn is_primitive_system(rows: &[Vec4], n: usize) -> bool {
    let k = rows.len();
    let mut g = 0i128;
    for cols in 0u32..(1 << n) {
        if cols.count_ones() as usize != k {
            continue;
        }
        let sub: Vec<Vec4> = rows
            .iter()
            .map(|r| {
                let mut out = [0i128; MAX_DIM];
                let mut t = 0;
                for (j, &v) in r.iter().enumerate().take(n) {
                    if cols >> j & 1 == 1 {
                        out[t] = v;
                        t += 1;
                    }
                }
                out
            })
            .collect();
        g = g.gcd(&det_small(&sub, k));
        if g == 1 {
            return true;
        }
    }
    g == 1
}

fn to_matrix(rows: &[Vec4], n: usize) -> Result<IntMatrix> {
    let rows: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r[..n].iter().map(|&v| i64::try_from(v).map_err(|_| Error::Overflow)).collect())
        .collect::<Result<_>>()?;
    IntMatrix::from_rows_i64(&rows)
}

fn mat_mul(a: &[Vec4], b: &[Vec4], n: usize) -> Vec<Vec4> {
    a.iter()
        .map(|r| {
            let mut out = [0i128; MAX_DIM];
            for (k, &rk) in r.iter().enumerate().take(n) {
                for j in 0..n {
                    out[j] += rk * b[k][j];
                }
            }
            out
        })
        .collect()
}

/// Pairwise size reduction until no basis vector can be shortened by
/// subtracting a multiple of another. Returns the basis rows.
fn size_reduce(h: &[[i128; MAX_DIM]; MAX_DIM], n: usize) -> Vec<Vec4> {
    let mut basis: Vec<Vec4> = (0..n)
        .map(|i| {
            let mut e = [0i128; MAX_DIM];
            e[i] = 1;
            e
        })
        .collect();
    loop {
        let mut changed = false;
        for j in 0..n {
            for i in 0..n {
                if i == j {
                    continue;
                }
                let nii = bilinear(h, n, &basis[i], &basis[i]);
                let bij = bilinear(h, n, &basis[i], &basis[j]);
                // Nearest integer to bij / nii.
                let q = Integer::div_floor(&(2 * bij + nii), &(2 * nii));
                if q == 0 {
                    continue;
                }
                // 2f(b_j − q b_i) − 2f(b_j) = q² nii − 2q bij
                if q * q * nii - 2 * q * bij < 0 {
                    let bi = basis[i];
                    for (t, v) in basis[j].iter_mut().enumerate() {
                        *v -= q * bi[t];
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            return basis;
        }
    }
}

/// Vectors (last nonzero coordinate positive) with f(v) ≤ bound, ordered by
/// value and then lexicographically.
fn short_vectors_sorted(f: &IntForm, bound: i128) -> Result<Vec<(i128, Vec4)>> {
    let sv = ShortVectors::new(f, bound, true)?;
    let mut out = Vec::new();
    sv.for_each(|x, v| {
        let mut r = [0i128; MAX_DIM];
        for (t, &c) in x.iter().enumerate() {
            r[t] = c as i128;
        }
        out.push((v, r));
    });
    out.sort();
    Ok(out)
}

/// A Minkowski-reduced form in the GL_n(ℤ)-class of f.
pub fn minkowski_reduce(f: &IntForm) -> Result<Reduced> {
    if !f.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let n = f.dim();
    let h = doubled_gram(f)?;
    let pre = size_reduce(&h, n);
    let pre_m = to_matrix(&pre, n)?;
    let f1 = f.transform(&pre_m)?;
    let h1 = doubled_gram(&f1)?;
    let mut bound = (0..n).map(|i| h1[i][i] / 2).max().unwrap_or(1);
    let chosen = loop {
        let cands = short_vectors_sorted(&f1, bound)?;
        let mut chosen: Vec<Vec4> = Vec::with_capacity(n);
        for _ in 0..n {
            let next = cands.iter().find(|(_, v)| {
                let mut trial = chosen.clone();
                trial.push(*v);
                is_primitive_system(&trial, n)
            });
            match next {
                Some((_, v)) => chosen.push(*v),
                None => break,
            }
        }
        if chosen.len() == n {
            break chosen;
        }
        bound = bound.checked_mul(2).ok_or(Error::Overflow)?;
    };
    let mut w = chosen;
    // s_{i,i+1} ≤ 0 by flipping the sign of b_{i+1}.
    for i in 0..n.saturating_sub(1) {
        if bilinear(&h1, n, &w[i], &w[i + 1]) > 0 {
            for v in w[i + 1].iter_mut() {
                *v = -*v;
            }
        }
    }
    let total = mat_mul(&w, &pre, n);
    let transform = to_matrix(&total, n)?;
    let form = f.transform(&transform)?;
    debug_assert!(form.is_minkowski_reduced(), "{form}");
    Ok(Reduced { form, transform })
}

/// The unique Eisenstein-reduced form equivalent to a positive-definite
/// ternary form f.
pub fn eisenstein_canonical(f: &IntForm) -> Result<Reduced> {
    if f.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: f.dim() });
    }
    let m = minkowski_reduce(f)?;
    let g = &m.form;
    let h = doubled_gram(g)?;
    let d: Vec<i128> = (0..3).map(|i| h[i][i] / 2).collect();
    let all = short_vectors_sorted(g, d[2])?;
    let with_value = |t: i128| -> Vec<Vec4> {
        all.iter()
            .filter(|(v, _)| *v == t)
            .flat_map(|(_, x)| [*x, x.map(|c| -c)])
            .collect()
    };
    let (c1, c2, c3) = (with_value(d[0]), with_value(d[1]), with_value(d[2]));
    let mut best: Option<([i128; 6], [Vec4; 3])> = None;
    for v1 in &c1 {
        for v2 in &c2 {
            let p12 = bilinear(&h, 3, v1, v2);
            for v3 in &c3 {
                let rows = [*v1, *v2, *v3];
                if det_small(&rows, 3).abs() != 1 {
                    continue;
                }
                let key = [d[0], d[1], d[2], p12, bilinear(&h, 3, v1, v3), bilinear(&h, 3, v2, v3)];
                if best.as_ref().is_some_and(|(k, _)| *k <= key) {
                    continue;
                }
                let cand = IntForm::from_i64(3, &key.map(|v| v as i64)).expect("six coefficients");
                if cand.is_eisenstein_reduced()? {
                    best = Some((key, rows));
                }
            }
        }
    }
    let (_, rows) = best.ok_or_else(|| Error::Inconsistent(format!("no Eisenstein-reduced basis found for {f}")))?;
    let w = to_matrix(&rows, 3)?;
    let transform = w.mul(&m.transform);
    let form = f.transform(&transform)?;
    Ok(Reduced { form, transform })
}
