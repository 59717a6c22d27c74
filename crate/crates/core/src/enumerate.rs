//! Short-vector enumeration on exact machine integers.
//!
//! Variables are eliminated one at a time by completing the square:
//! 4a·F(x_k, x') = (2a·x_k + B(x'))² + g·F'(x'), where F' is again a
//! primitive integral positive-definite form. The bound propagates as
//! M' = ⌊4a·M / g⌋, and each coordinate range is an exact integer interval
//! obtained from an integer square root, so nothing is rounded.

use num_integer::Integer;

use crate::arith::{isqrt_i128, to_i128};
use crate::error::{Error, Result};
use crate::forms::{IntForm, MAX_DIM};

/// Bounds on intermediate products stay well inside i128.
const LIMIT: i128 = 1 << 100;

#[derive(Clone, Debug)]
struct Level {
    /// Coefficients of F_k over variables k..n (upper triangle, global indices).
    s: [[i128; MAX_DIM]; MAX_DIM],
    /// Bound on F_k.
    bound: i128,
    /// Content removed from the projected form of the next level.
    g_next: i128,
}

/// Enumerates the nonzero integer vectors x with f(x) ≤ M.
#[derive(Clone, Debug)]
pub struct ShortVectors {
    n: usize,
    levels: Vec<Level>,
    half: bool,
}

impl ShortVectors {
    /// `half` restricts the output to one vector of each pair ±x: the one
    /// whose last nonzero coordinate is positive.
    pub fn new(f: &IntForm, bound: i128, half: bool) -> Result<Self> {
        if !f.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let n = f.dim();
        let mut s = f.upper_i128()?;
        let mut bound = bound.max(-1);
        let mut levels = Vec::with_capacity(n);
        for k in 0..n {
            let a = s[k][k];
            let mut next = [[0i128; MAX_DIM]; MAX_DIM];
            let mut g = 0i128;
            if k + 1 < n {
                let four_a = a.checked_mul(4).ok_or(Error::Overflow)?;
                for j in k + 1..n {
                    for l in j..n {
                        let cross = if j == l {
                            s[k][j].checked_mul(s[k][j])
                        } else {
                            s[k][j].checked_mul(s[k][l]).and_then(|v| v.checked_mul(2))
                        };
                        let v = four_a
                            .checked_mul(s[j][l])
                            .zip(cross)
                            .and_then(|(p, c)| p.checked_sub(c))
                            .ok_or(Error::Overflow)?;
                        next[j][l] = v;
                        g = g.gcd(&v);
                    }
                }
                for row in next.iter_mut().skip(k + 1) {
                    for v in row.iter_mut() {
                        *v /= g;
                    }
                }
            }
            let check = |v: i128| if v.abs() < LIMIT { Ok(v) } else { Err(Error::Overflow) };
            check(bound.checked_mul(4 * a).ok_or(Error::Overflow)?)?;
            levels.push(Level { s, bound, g_next: g });
            if k + 1 < n {
                bound = if bound < 0 { -1 } else { check(4 * a * bound)? / g };
                s = next;
            }
        }
        Ok(ShortVectors { n, levels, half })
    }

    pub fn from_bound_u64(f: &IntForm, bound: u64, half: bool) -> Result<Self> {
        Self::new(f, to_i128(&bound.into())?, half)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Admissible range of x_k given the tail x_{k+1..} and F_{k+1}(tail).
    #[inline]
    fn range(&self, k: usize, x: &[i64; MAX_DIM], tail_val: i128, tail_zero: bool) -> Option<(i64, i64, i128)> {
        let lv = &self.levels[k];
        let a = lv.s[k][k];
        let mut b = 0i128;
        for j in k + 1..self.n {
            b += lv.s[k][j] * x[j] as i128;
        }
        let d = 4 * a * lv.bound - lv.g_next * tail_val;
        if d < 0 {
            return None;
        }
        let r = isqrt_i128(d);
        let mut lo = Integer::div_ceil(&(-b - r), &(2 * a));
        let hi = Integer::div_floor(&(-b + r), &(2 * a));
        if self.half && tail_zero {
            lo = lo.max(0);
        }
        (lo <= hi).then(|| (lo as i64, hi as i64, b))
    }

    /// F_k(x_k, tail) from the completed square.
    #[inline]
    fn value(&self, k: usize, xk: i64, b: i128, tail_val: i128) -> i128 {
        let lv = &self.levels[k];
        let a = lv.s[k][k];
        let t = 2 * a * xk as i128 + b;
        (t * t + lv.g_next * tail_val) / (4 * a)
    }

    /// Range of the last coordinate; the natural unit for splitting work.
    pub fn top_range(&self) -> Option<(i64, i64)> {
        let x = [0i64; MAX_DIM];
        self.range(self.n - 1, &x, 0, true).map(|(lo, hi, _)| (lo, hi))
    }

    /// Calls `visit(x, f(x))` for every vector in the set.
    pub fn for_each(&self, mut visit: impl FnMut(&[i64], i128)) {
        if let Some((lo, hi)) = self.top_range() {
            for t in lo..=hi {
                self.for_each_with_top(t, &mut visit);
            }
        }
    }

    /// The vectors whose last coordinate equals `t`.
    pub fn for_each_with_top(&self, t: i64, visit: &mut impl FnMut(&[i64], i128)) {
        let k = self.n - 1;
        let mut x = [0i64; MAX_DIM];
        let Some((lo, hi, b)) = self.range(k, &x, 0, true) else { return };
        if t < lo || t > hi {
            return;
        }
        x[k] = t;
        let v = self.value(k, t, b, 0);
        if k == 0 {
            if t != 0 {
                visit(&x[..1], v);
            }
        } else {
            self.descend(k - 1, &mut x, v, t == 0, visit);
        }
    }

    fn descend(&self, k: usize, x: &mut [i64; MAX_DIM], tail_val: i128, tail_zero: bool, visit: &mut impl FnMut(&[i64], i128)) {
        let Some((lo, hi, b)) = self.range(k, x, tail_val, tail_zero) else { return };
        if k > 0 {
            for xk in lo..=hi {
                x[k] = xk;
                let v = self.value(k, xk, b, tail_val);
                self.descend(k - 1, x, v, tail_zero && xk == 0, visit);
            }
            x[k] = 0;
            return;
        }
        // Innermost coordinate: step the value by finite differences.
        let a = self.levels[0].s[0][0];
        let mut v = self.value(0, lo, b, tail_val);
        for x0 in lo..=hi {
            if !(tail_zero && x0 == 0) {
                x[0] = x0;
                visit(&x[..self.n], v);
            }
            v += a * (2 * x0 as i128 + 1) + b;
        }
        x[0] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(f: &IntForm, m: i128, half: bool) -> Vec<(Vec<i64>, i128)> {
        let mut out = Vec::new();
        ShortVectors::new(f, m, half).unwrap().for_each(|x, v| out.push((x.to_vec(), v)));
        out.sort();
        out
    }

    fn naive(f: &IntForm, m: i128, r: i64, half: bool) -> Vec<(Vec<i64>, i128)> {
        let n = f.dim();
        let mut out = Vec::new();
        let side = (2 * r + 1) as usize;
        for code in 0..side.pow(n as u32) {
            let mut c = code;
            let x: Vec<i64> = (0..n)
                .map(|_| {
                    let d = (c % side) as i64 - r;
                    c /= side;
                    d
                })
                .collect();
            let Some(last) = x.iter().rev().find(|&&t| t != 0) else { continue };
            if half && *last < 0 {
                continue;
            }
            let v: i128 = f.evaluate_i64(&x).unwrap().try_into().unwrap();
            if v <= m {
                out.push((x, v));
            }
        }
        out.sort();
        out
    }

    #[test]
    fn matches_box_for_small_forms() {
        let forms = [
            IntForm::ternary([1, 1, 1, 0, 0, 0]),
            IntForm::ternary([2, 3, 5, -2, 0, 0]),
            IntForm::ternary([3, 5, 7, 1, -2, 4]),
            IntForm::binary(1, 1, -1),
            IntForm::diagonal(&[2]).unwrap(),
            IntForm::from_i64(4, &[2, 2, 3, 4, -1, 1, 0, -2, 1, 2]).unwrap(),
        ];
        for f in &forms {
            for half in [false, true] {
                // Box radius 6 covers these bounds: the minimum eigenvalues are ≥ 1/2.
                assert_eq!(collect(f, 12, half), naive(f, 12, 6, half), "{f}");
            }
        }
    }

    #[test]
    fn empty_and_negative_bounds() {
        let f = IntForm::ternary([2, 3, 5, -2, 0, 0]);
        assert!(collect(&f, 1, false).is_empty());
        assert!(collect(&f, -5, false).is_empty());
        assert_eq!(collect(&f, 2, true), vec![(vec![1, 0, 0], 2)]);
    }

    #[test]
    fn rejects_indefinite() {
        let f = IntForm::binary(1, -1, 0);
        assert_eq!(ShortVectors::new(&f, 10, true).unwrap_err(), Error::NotPositiveDefinite);
    }
}
