//! Quadratic forms: integral forms in polynomial coefficients, rational Gram
//! matrices, pairs of ternary forms, and the GL3 × GL2 group acting on pairs.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_all, lcm_denominators, to_i128, Rat};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;

pub const MAX_DIM: usize = 4;

/// Σ_{i ≤ j} s_ij x_i x_j with integer s_ij.
///
/// Coefficients are stored diagonal first, then the off-diagonal s_ij in
/// lexicographic (i, j) order, which is also the text format.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntForm {
    n: usize,
    coeffs: Vec<BigInt>,
}

fn coeff_count(n: usize) -> usize {
    n * (n + 1) / 2
}

fn dim_for_count(c: usize) -> Option<usize> {
    (1..=MAX_DIM).find(|&n| coeff_count(n) == c)
}

fn offdiag_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // Pairs (0,1)..(0,n-1), (1,2).., row i starts after Σ_{r<i} (n-1-r) entries.
    n + i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl IntForm {
    pub fn new(n: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if coeffs.len() != coeff_count(n) {
            return Err(Error::DimensionMismatch { expected: coeff_count(n), found: coeffs.len() });
        }
        Ok(IntForm { n, coeffs })
    }

    pub fn from_i64(n: usize, coeffs: &[i64]) -> Result<Self> {
        Self::new(n, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Ternary shorthand in table column order: s11 s22 s33 s12 s13 s23.
    pub fn ternary(s: [i64; 6]) -> Self {
        Self::from_i64(3, &s).expect("six coefficients")
    }

    pub fn binary(s11: i64, s22: i64, s12: i64) -> Self {
        Self::from_i64(2, &[s11, s22, s12]).expect("three coefficients")
    }

    pub fn diagonal(d: &[i64]) -> Result<Self> {
        let n = d.len();
        let mut c = vec![BigInt::zero(); coeff_count(n.max(1))];
        for (i, &v) in d.iter().enumerate() {
            c[i] = v.into();
        }
        Self::new(n, c)
    }

    /// Builds a form from a full upper-triangular coefficient table.
    pub fn from_upper(n: usize, s: &[[BigInt; MAX_DIM]; MAX_DIM]) -> Result<Self> {
        let mut c: Vec<BigInt> = (0..n).map(|i| s[i][i].clone()).collect();
        for i in 0..n {
            for j in i + 1..n {
                c.push(s[i][j].clone());
            }
        }
        Self::new(n, c)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// s_ij (symmetric access, 0-based).
    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        match i.cmp(&j) {
            Ordering::Equal => &self.coeffs[i],
            Ordering::Less => &self.coeffs[offdiag_index(self.n, i, j)],
            Ordering::Greater => &self.coeffs[offdiag_index(self.n, j, i)],
        }
    }

    pub fn upper(&self) -> [[BigInt; MAX_DIM]; MAX_DIM] {
        let mut s: [[BigInt; MAX_DIM]; MAX_DIM] = Default::default();
        for i in 0..self.n {
            for j in i..self.n {
                s[i][j] = self.coeff(i, j).clone();
            }
        }
        s
    }

    /// Upper-triangular coefficients as machine integers for the enumeration kernels.
    pub fn upper_i128(&self) -> Result<[[i128; MAX_DIM]; MAX_DIM]> {
        let mut s = [[0i128; MAX_DIM]; MAX_DIM];
        for i in 0..self.n {
            for j in i..self.n {
                s[i][j] = to_i128(self.coeff(i, j))?;
            }
        }
        Ok(s)
    }

    /// Gram matrix: s_ii on the diagonal, s_ij / 2 off it.
    pub fn gram(&self) -> RatMatrix {
        let mut g = RatMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            g[(i, i)] = Rat::from_integer(self.coeff(i, i).clone());
            for j in i + 1..self.n {
                let h = Rat::new(self.coeff(i, j).clone(), BigInt::from(2));
                g[(i, j)] = h.clone();
                g[(j, i)] = h;
            }
        }
        g
    }

    pub fn to_rat(&self) -> RatForm {
        RatForm { gram: self.gram() }
    }

    pub fn evaluate(&self, x: &[BigInt]) -> Result<BigInt> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        let mut v = BigInt::zero();
        for i in 0..self.n {
            for j in i..self.n {
                v += self.coeff(i, j) * &x[i] * &x[j];
            }
        }
        Ok(v)
    }

    pub fn evaluate_i64(&self, x: &[i64]) -> Result<BigInt> {
        let x: Vec<BigInt> = x.iter().map(|&v| v.into()).collect();
        self.evaluate(&x)
    }

    pub fn gram_determinant(&self) -> Rat {
        self.gram().det()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.gram().leading_minors().iter().all(Signed::is_positive)
    }

    pub fn content(&self) -> BigInt {
        gcd_all(&self.coeffs)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// s_jj ≤ S(v) for every v with v_i ∈ {−1,0,1} (i < j), v_j = 1, v_k = 0 (k > j),
    /// together with 0 < s_11 ≤ … ≤ s_nn.
    pub fn satisfies_minkowski_inequalities(&self) -> bool {
        let n = self.n;
        let s = |i, j| self.coeff(i, j);
        if !s(0, 0).is_positive() || (1..n).any(|i| s(i - 1, i - 1) > s(i, i)) {
            return false;
        }
        for j in 1..n {
            for code in 0..3usize.pow(j as u32) {
                let v = ternary_digits(code, j);
                if v.iter().all(|&t| t == 0) {
                    continue;
                }
                // S(v + e_j) - s_jj = Σ_{i<j} v_i² s_ii + Σ_{i<i'<j} v_i v_i' s_ii' + Σ_{i<j} v_i s_ij
                let mut d = BigInt::zero();
                for i in 0..j {
                    if v[i] == 0 {
                        continue;
                    }
                    d += s(i, i);
                    d += s(i, j) * v[i];
                    for k in i + 1..j {
                        d += s(i, k) * (v[i] * v[k]);
                    }
                }
                if d.is_negative() {
                    return false;
                }
            }
        }
        true
    }

    /// Minkowski reduction for n ≤ 4: the inequalities above plus s_{i,i+1} ≤ 0.
    pub fn is_minkowski_reduced(&self) -> bool {
        self.satisfies_minkowski_inequalities()
            && (1..self.n).all(|i| !self.coeff(i - 1, i).is_positive())
    }

    /// Eisenstein's reduction conditions for ternary forms.
    pub fn is_eisenstein_reduced(&self) -> Result<bool> {
        if self.n != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: self.n });
        }
        if !self.satisfies_minkowski_inequalities() {
            return Ok(false);
        }
        let s = |i: usize, j: usize| self.coeff(i, j).clone();
        let (s11, s22, s33) = (s(0, 0), s(1, 1), s(2, 2));
        let (p12, p13, p23) = (s(0, 1), s(0, 2), s(1, 2));
        let positive = p12.is_positive() && p13.is_positive() && p23.is_positive();
        let nonpositive = !p12.is_positive() && !p13.is_positive() && !p23.is_positive();
        if !positive && !nonpositive {
            return Ok(false);
        }
        if s11 == s22 && p23.abs() > p13.abs() {
            return Ok(false);
        }
        if s22 == s33 && p13.abs() > p12.abs() {
            return Ok(false);
        }
        // Tie rules for s_ii = |s_ij| in polynomial coefficients (2|s_ij| with halved off-diagonals).
        for (i, j, k) in PERMUTATIONS_3 {
            if s(i, i) != s(i, j).abs() {
                continue;
            }
            if positive && s(i, k).abs() > s(j, k).abs() * 2 {
                return Ok(false);
            }
            if nonpositive && !s(i, k).is_zero() {
                return Ok(false);
            }
        }
        if nonpositive && &s11 + &s22 == (&p12 + &p13 + &p23).abs() && &s11 * 2 > (&p12 + &p13 * 2u32).abs()
        {
            return Ok(false);
        }
        Ok(true)
    }

    /// f ⊥ g.
    pub fn direct_sum(&self, g: &IntForm) -> Result<IntForm> {
        let n = self.n + g.n;
        let mut s: [[BigInt; MAX_DIM]; MAX_DIM] = Default::default();
        if n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        for i in 0..self.n {
            for j in i..self.n {
                s[i][j] = self.coeff(i, j).clone();
            }
        }
        for i in 0..g.n {
            for j in i..g.n {
                s[self.n + i][self.n + j] = g.coeff(i, j).clone();
            }
        }
        IntForm::from_upper(n, &s)
    }

    /// The form x ↦ f(x·w) for an integer matrix w (rows are the new basis vectors).
    pub fn transform(&self, w: &IntMatrix) -> Result<IntForm> {
        if w.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: w.n });
        }
        let rows: Vec<Vec<BigInt>> = (0..self.n).map(|i| w.row(i).to_vec()).collect();
        let vals: Vec<BigInt> = rows.iter().map(|r| self.evaluate(r)).collect::<Result<_>>()?;
        let mut s: [[BigInt; MAX_DIM]; MAX_DIM] = Default::default();
        for i in 0..self.n {
            s[i][i] = vals[i].clone();
            for j in i + 1..self.n {
                let sum: Vec<BigInt> = rows[i].iter().zip(&rows[j]).map(|(a, b)| a + b).collect();
                s[i][j] = self.evaluate(&sum)? - &vals[i] - &vals[j];
            }
        }
        IntForm::from_upper(self.n, &s)
    }

    /// Coefficients only, space separated (ternary shorthand for n = 3).
    pub fn coeff_string(&self) -> String {
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

pub(crate) const PERMUTATIONS_3: [(usize, usize, usize); 6] =
    [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)];

/// Base-3 digits of `code` mapped to {−1, 0, 1}, `len` of them.
pub(crate) fn ternary_digits(mut code: usize, len: usize) -> [i64; MAX_DIM] {
    let mut v = [0i64; MAX_DIM];
    for t in v.iter_mut().take(len) {
        *t = (code % 3) as i64 - 1;
        code /= 3;
    }
    v
}

impl fmt::Display for IntForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.n, self.coeff_string())
    }
}

impl FromStr for IntForm {
    type Err = Error;

    /// Accepts `N: s11 … sNN s12 s13 …` or the bare coefficient list, whose
    /// length (1, 3, 6 or 10) determines N. Commas are treated as spaces.
    fn from_str(s: &str) -> Result<Self> {
        let (declared, body) = match s.split_once(':') {
            Some((d, b)) => {
                let d: usize =
                    d.trim().parse().map_err(|_| Error::Parse(format!("bad dimension in {s:?}")))?;
                (Some(d), b)
            }
            None => (None, s),
        };
        let coeffs: Vec<BigInt> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad coefficient {t:?}"))))
            .collect::<Result<_>>()?;
        let n = dim_for_count(coeffs.len())
            .ok_or_else(|| Error::Parse(format!("{} coefficients do not describe a form", coeffs.len())))?;
        if declared.is_some_and(|d| d != n) {
            return Err(Error::Parse(format!("dimension {} does not match {} coefficients", declared.unwrap(), coeffs.len())));
        }
        IntForm::new(n, coeffs)
    }
}

impl PartialOrd for IntForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dimension first, then the coefficient tuple lexicographically.
impl Ord for IntForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

/// Square integer matrix; used for changes of basis x ↦ x·w.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntMatrix { n, data }
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("integer matrix must be square".into()));
        }
        Ok(IntMatrix { n, data: rows.iter().flatten().map(|&v| v.into()).collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    data[i * n + j] += self.get(i, k) * o.get(k, j);
                }
            }
        }
        IntMatrix { n, data }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.n {
            let v = -std::mem::take(&mut self.data[i * self.n + j]);
            self.data[i * self.n + j] = v;
        }
    }

    pub fn to_rat(&self) -> RatMatrix {
        let rows = (0..self.n)
            .map(|i| self.row(i).iter().map(|v| Rat::from_integer(v.clone())).collect())
            .collect();
        RatMatrix::from_rows(rows).expect("square")
    }

    pub fn det(&self) -> BigInt {
        self.to_rat().det().to_integer()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<IntMatrix> {
        if !self.is_unimodular() {
            return Err(Error::Singular("matrix is not unimodular".into()));
        }
        let inv = self.to_rat().inverse()?;
        let data = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| inv[(i, j)].to_integer())
            .collect();
        Ok(IntMatrix { n: self.n, data })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// A quadratic form given by an exact-rational symmetric Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatForm {
    gram: RatMatrix,
}

impl RatForm {
    pub fn from_gram(gram: RatMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::InvalidArgument("Gram matrix must be square and symmetric".into()));
        }
        Ok(RatForm { gram })
    }

    /// From polynomial coefficients in the IntForm order.
    pub fn from_poly_coeffs(n: usize, c: &[Rat]) -> Result<Self> {
        if c.len() != coeff_count(n) {
            return Err(Error::DimensionMismatch { expected: coeff_count(n), found: c.len() });
        }
        let mut g = RatMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = c[i].clone();
            for j in i + 1..n {
                let h = &c[offdiag_index(n, i, j)] / Rat::from_integer(2.into());
                g[(i, j)] = h.clone();
                g[(j, i)] = h;
            }
        }
        Ok(RatForm { gram: g })
    }

    pub fn zero(n: usize) -> Self {
        RatForm { gram: RatMatrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// Polynomial coefficient of x_i x_j (i ≤ j).
    pub fn poly_coeff(&self, i: usize, j: usize) -> Rat {
        if i == j {
            self.gram[(i, i)].clone()
        } else {
            &self.gram[(i, j)] * Rat::from_integer(2.into())
        }
    }

    /// Polynomial coefficients in the IntForm order.
    pub fn poly_coeffs(&self) -> Vec<Rat> {
        let n = self.dim();
        let mut c: Vec<Rat> = (0..n).map(|i| self.poly_coeff(i, i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                c.push(self.poly_coeff(i, j));
            }
        }
        c
    }

    pub fn evaluate(&self, x: &[Rat]) -> Result<Rat> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        let mut v = Rat::zero();
        for i in 0..n {
            for j in 0..n {
                v += &x[i] * &self.gram[(i, j)] * &x[j];
            }
        }
        Ok(v)
    }

    pub fn determinant(&self) -> Rat {
        self.gram.det()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.gram.leading_minors().iter().all(Signed::is_positive)
    }

    pub fn add(&self, o: &RatForm) -> Result<RatForm> {
        Ok(RatForm { gram: self.gram.add(&o.gram)? })
    }

    pub fn scale(&self, s: &Rat) -> RatForm {
        RatForm { gram: self.gram.scale(s) }
    }

    /// x ↦ f(x·w): Gram matrix w·G·wᵀ.
    pub fn transform(&self, w: &RatMatrix) -> Result<RatForm> {
        Ok(RatForm { gram: w.congruence(&self.gram)? })
    }

    /// The integral form with the same polynomial coefficients, if they are integers.
    pub fn to_int(&self) -> Option<IntForm> {
        let c = self.poly_coeffs();
        c.iter().all(Rat::is_integer).then(|| {
            IntForm::new(self.dim(), c.into_iter().map(|v| v.to_integer()).collect())
                .expect("dimension already validated")
        })
    }

    /// (L, L·f) with L the least positive integer making L·f integral.
    pub fn integral_multiple(&self) -> (BigInt, IntForm) {
        let l = lcm_denominators(&self.poly_coeffs());
        let f = self.scale(&Rat::from_integer(l.clone())).to_int().expect("cleared denominators");
        (l, f)
    }
}

/// An ordered pair (A, B) of rational ternary forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormPair {
    pub a: RatForm,
    pub b: RatForm,
}

impl FormPair {
    pub fn new(a: RatForm, b: RatForm) -> Result<Self> {
        for f in [&a, &b] {
            if f.dim() != 3 {
                return Err(Error::DimensionMismatch { expected: 3, found: f.dim() });
            }
        }
        Ok(FormPair { a, b })
    }

    pub fn from_int(a: &IntForm, b: &IntForm) -> Result<Self> {
        Self::new(a.to_rat(), b.to_rat())
    }

    /// A and B are linearly independent over ℚ.
    pub fn linearly_independent(&self) -> bool {
        let (a, b) = (self.a.poly_coeffs(), self.b.poly_coeffs());
        (0..a.len()).any(|i| (i + 1..a.len()).any(|j| &a[i] * &b[j] != &a[j] * &b[i]))
    }

    /// Parses two lines, each a ternary form in polynomial coefficients with
    /// rational entries (`s11 s22 s33 s12 s13 s23`).
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if lines.len() != 2 {
            return Err(Error::Parse(format!("expected two forms, found {} lines", lines.len())));
        }
        let parse_line = |l: &str| -> Result<RatForm> {
            let body = l.split_once(':').map_or(l, |(_, b)| b);
            let c: Vec<Rat> = body
                .split(|ch: char| ch.is_whitespace() || ch == ',')
                .filter(|t| !t.is_empty())
                .map(crate::arith::parse_rat)
                .collect::<Result<_>>()?;
            RatForm::from_poly_coeffs(3, &c)
        };
        Self::new(parse_line(lines[0])?, parse_line(lines[1])?)
    }
}

/// (w, v) ∈ GL3(ℚ) × GL2(ℚ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub w: RatMatrix,
    pub v: RatMatrix,
}

impl GroupElement {
    pub fn new(w: RatMatrix, v: RatMatrix) -> Result<Self> {
        if (w.rows(), w.cols(), v.rows(), v.cols()) != (3, 3, 2, 2) {
            return Err(Error::InvalidArgument("group element needs a 3×3 and a 2×2 matrix".into()));
        }
        if w.det().is_zero() || v.det().is_zero() {
            return Err(Error::Singular("group element must be invertible".into()));
        }
        Ok(GroupElement { w, v })
    }

    pub fn identity() -> Self {
        GroupElement { w: RatMatrix::identity(3), v: RatMatrix::identity(2) }
    }

    /// Product g·h, so that act(g·h, p) = act(g, act(h, p)).
    pub fn compose(&self, h: &GroupElement) -> GroupElement {
        GroupElement { w: self.w.mul(&h.w).expect("3×3"), v: self.v.mul(&h.v).expect("2×2") }
    }

    /// (w, [[r, s], [t, u]])·(A, B) = (r A(xw) + s B(xw), t A(xw) + u B(xw)).
    pub fn act(&self, p: &FormPair) -> FormPair {
        let a = p.a.transform(&self.w).expect("3×3");
        let b = p.b.transform(&self.w).expect("3×3");
        let mix = |r: &Rat, s: &Rat| a.scale(r).add(&b.scale(s)).expect("same size");
        FormPair { a: mix(&self.v[(0, 0)], &self.v[(0, 1)]), b: mix(&self.v[(1, 0)], &self.v[(1, 1)]) }
    }
}
