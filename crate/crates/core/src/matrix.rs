//! Dense exact-rational matrices of the small sizes used here (at most 4×4).

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::arith::{fmt_rat, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rat::from_integer(v.into())).collect())
            .collect();
        Self::from_rows(rows).expect("ragged literal matrix")
    }

    pub fn diagonal(d: &[Rat]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut p = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    p[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(p)
    }

    pub fn add(&self, other: &RatMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(RatMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// `self · m · selfᵀ`, the Gram matrix of `x ↦ m(x·self)` for row vectors x.
    pub fn congruence(&self, m: &RatMatrix) -> Result<Self> {
        self.mul(m)?.mul(&self.transpose())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-producing Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] / &pivot;
                for k in c..n {
                    let v = &f * &a[(c, k)];
                    a[(r, k)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[(r, c)].is_zero())
                .ok_or_else(|| Error::Singular("matrix is not invertible".into()))?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pivot = a[(c, c)].clone();
            for k in 0..n {
                a[(c, k)] /= &pivot;
                inv[(c, k)] /= &pivot;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for k in 0..n {
                    let (x, y) = (&f * &a[(c, k)], &f * &inv[(c, k)]);
                    a[(r, k)] -= x;
                    inv[(r, k)] -= y;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.cols {
                self.data.swap(i * self.cols + k, j * self.cols + k);
            }
        }
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// One solution of self·x = b. Free variables are set to zero; an
    /// inconsistent system is an error.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
            a.swap_rows(p, r);
            rhs.swap(p, r);
            let pv = a[(r, c)].clone();
            for k in c..cols {
                a[(r, k)] /= &pv;
            }
            rhs[r] /= &pv;
            for i in 0..rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for k in c..cols {
                    let v = &f * &a[(r, k)];
                    a[(i, k)] -= v;
                }
                let v = &f * &rhs[r];
                rhs[i] -= v;
            }
            pivots.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        if rhs[r..].iter().any(|v| !v.is_zero()) {
            return Err(Error::Inconsistent("linear system has no solution".into()));
        }
        let mut x = vec![Rat::zero(); cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = rhs[i].clone();
        }
        Ok(x)
    }

    /// Leading principal minors d_1, …, d_n.
    pub fn leading_minors(&self) -> Vec<Rat> {
        (1..=self.rows)
            .map(|k| {
                let rows = (0..k).map(|i| self.row(i)[..k].to_vec()).collect();
                RatMatrix::from_rows(rows).expect("square block").det()
            })
            .collect()
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(fmt_rat).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
