//! The quartic ring attached to a pair of ternary forms, characteristic and
//! resolvent polynomials of its elements, and the canonical pair of a quartic
//! polynomial together with the matrices moving a pair onto it.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{fmt_rat, Rat};
use crate::error::{Error, Result};
use crate::forms::{FormPair, GroupElement, RatForm, PERMUTATIONS_3};
use crate::matrix::RatMatrix;
use crate::pair::cubic::det_binary_cubic;
use crate::poly::Poly;

fn k(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

/// Sign of a permutation of (0, 1, 2).
fn perm_sign(p: (usize, usize, usize)) -> i64 {
    match p {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        _ => -1,
    }
}

/// Multiplication table of ⟨1, ξ1, ξ2, ξ3⟩:
/// ξ_i ξ_j = c⁰_ij + Σ_k c^k_ij ξ_k (indices 0-based, c^0 the constant part).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticStructure {
    /// c[i][j][t]: t = 0 is the constant term, t = k + 1 the ξ_k coefficient.
    c: [[[Rat; 4]; 3]; 3],
}

impl QuarticStructure {
    /// Constant c^t_ij (t = 0 constant, t = 1..3 for ξ1..ξ3; i, j 0-based).
    pub fn constant(&self, t: usize, i: usize, j: usize) -> &Rat {
        &self.c[i][j][t]
    }

    /// Product of two ring elements in coordinates (1, ξ1, ξ2, ξ3).
    pub fn mul(&self, u: &[Rat; 4], v: &[Rat; 4]) -> [Rat; 4] {
        let mut r: [Rat; 4] = Default::default();
        r[0] = &u[0] * &v[0];
        for i in 0..3 {
            r[i + 1] = &u[0] * &v[i + 1] + &v[0] * &u[i + 1];
        }
        for i in 0..3 {
            if u[i + 1].is_zero() {
                continue;
            }
            for j in 0..3 {
                let w = &u[i + 1] * &v[j + 1];
                if w.is_zero() {
                    continue;
                }
                for t in 0..4 {
                    r[t] += &w * &self.c[i][j][t];
                }
            }
        }
        r
    }

    pub fn basis(i: usize) -> [Rat; 4] {
        let mut e: [Rat; 4] = Default::default();
        e[i] = Rat::one();
        e
    }

    /// (ξ_i ξ_j) ξ_l = ξ_i (ξ_j ξ_l) for all 27 triples.
    pub fn is_associative(&self) -> bool {
        (1..4).all(|i| {
            (1..4).all(|j| {
                (1..4).all(|l| {
                    let (a, b, c) = (Self::basis(i), Self::basis(j), Self::basis(l));
                    self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
                })
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.c[i][j] == self.c[j][i]))
    }

    /// Matrix of multiplication by α: column t holds the coordinates of α·e_t.
    pub fn multiplication_matrix(&self, alpha: &[Rat; 4]) -> RatMatrix {
        let mut m = RatMatrix::zeros(4, 4);
        for t in 0..4 {
            let img = self.mul(alpha, &Self::basis(t));
            for (s, v) in img.into_iter().enumerate() {
                m[(s, t)] = v;
            }
        }
        m
    }
}

/// λ^{ij}_{kl} = a_ij b_kl − b_ij a_kl in polynomial coefficients.
fn lambda(a: &RatForm, b: &RatForm, (i, j): (usize, usize), (k, l): (usize, usize)) -> Rat {
    let (i, j) = (i.min(j), i.max(j));
    let (k, l) = (k.min(l), k.max(l));
    a.poly_coeff(i, j) * b.poly_coeff(k, l) - b.poly_coeff(i, j) * a.poly_coeff(k, l)
}

/// Structure constants of the quartic ring of a pair.
///
/// Orientation: det[x | y | c(x, y)] = A(x)B(y) − B(x)A(y), where c(x, y) is
/// the ξ-part of (Σx_iξ_i)(Σy_jξ_j). With c¹₁₂ = c²₁₂ = c¹₁₃ = 0 this gives,
/// for every permutation (i, j, k) of sign ε,
///   c^j_ii = −ε λ^{ii}_{ik},  c^k_ij = −ε λ^{jj}_{ii},
///   c^j_ij − c^k_ik = ε λ^{jk}_{ii},  c^i_ii − c^j_ij − c^k_ik = ε λ^{ij}_{ik}.
/// The constant terms c⁰ are solved from associativity.
pub fn quartic_structure(p: &FormPair) -> Result<QuarticStructure> {
    let (a, b) = (&p.a, &p.b);
    let lam = |x, y| lambda(a, b, x, y);
    let mut c: [[[Rat; 4]; 3]; 3] = Default::default();
    let set = |c: &mut [[[Rat; 4]; 3]; 3], t: usize, i: usize, j: usize, v: Rat| {
        c[i][j][t + 1] = v.clone();
        c[j][i][t + 1] = v;
    };
    for &(i, j, kk) in &PERMUTATIONS_3 {
        let e = k(perm_sign((i, j, kk)));
        set(&mut c, j, i, i, -&e * lam((i, i), (i, kk)));
        set(&mut c, kk, i, j, -&e * lam((j, j), (i, i)));
    }
    // c¹₁₂ = c²₁₂ = c¹₁₃ = 0 stay at their default.
    set(&mut c, 2, 0, 2, -lam((1, 2), (0, 0)));
    set(&mut c, 2, 1, 2, lam((0, 2), (1, 1)));
    set(&mut c, 1, 1, 2, -lam((0, 1), (2, 2)));
    for &(i, j, kk) in &[(0usize, 1usize, 2usize), (1, 0, 2), (2, 0, 1)] {
        let e = k(perm_sign((i, j, kk)));
        let v = &c[i][j][j + 1] + &c[i][kk][kk + 1] + e * lam((i, j), (i, kk));
        set(&mut c, i, i, i, v);
    }
    for &(i, j, kk) in &PERMUTATIONS_3 {
        let e = k(perm_sign((i, j, kk)));
        let ok3 = &c[i][j][j + 1] - &c[i][kk][kk + 1] == &e * lam((j, kk), (i, i));
        let ok4 = &c[i][i][i + 1] - &c[i][j][j + 1] - &c[i][kk][kk + 1] == &e * lam((i, j), (i, kk));
        if !(ok3 && ok4) {
            return Err(Error::Inconsistent(format!("structure constant relations fail at {:?}", (i, j, kk))));
        }
    }
    solve_constant_terms(&mut c)?;
    let s = QuarticStructure { c };
    if !s.is_associative() {
        return Err(Error::Inconsistent("quartic multiplication is not associative".into()));
    }
    Ok(s)
}

const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn sym_index(i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    SYM_PAIRS.iter().position(|&p| p == (i, j)).expect("valid pair")
}

/// ξ-coefficients of (ξ_i ξ_j) ξ_l − ξ_i (ξ_j ξ_l) are linear in c⁰:
/// c⁰_ij δ_lm − c⁰_jl δ_im = Σ_k (c^k_jl c^m_ik − c^k_ij c^m_kl).
fn solve_constant_terms(c: &mut [[[Rat; 4]; 3]; 3]) -> Result<()> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                for m in 0..3 {
                    let mut row = vec![Rat::zero(); 6];
                    if l == m {
                        row[sym_index(i, j)] += Rat::one();
                    }
                    if i == m {
                        row[sym_index(j, l)] -= Rat::one();
                    }
                    let mut r = Rat::zero();
                    for kk in 0..3 {
                        r += &c[j][l][kk + 1] * &c[i][kk][m + 1] - &c[i][j][kk + 1] * &c[kk][l][m + 1];
                    }
                    if row.iter().all(Zero::is_zero) {
                        if !r.is_zero() {
                            return Err(Error::Inconsistent("associativity forces a nonzero identity".into()));
                        }
                        continue;
                    }
                    rows.push(row);
                    rhs.push(r);
                }
            }
        }
    }
    let sol = RatMatrix::from_rows(rows)?.solve(&rhs)?;
    for (t, &(i, j)) in SYM_PAIRS.iter().enumerate() {
        c[i][j][0] = sol[t].clone();
        c[j][i][0] = sol[t].clone();
    }
    Ok(())
}

/// x⁴ + a3 x³ + a2 x² + a1 x + a0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuarticPoly {
    pub a3: Rat,
    pub a2: Rat,
    pub a1: Rat,
    pub a0: Rat,
}

impl QuarticPoly {
    pub fn new(a3: Rat, a2: Rat, a1: Rat, a0: Rat) -> Self {
        QuarticPoly { a3, a2, a1, a0 }
    }

    pub fn from_i64(a3: i64, a2: i64, a1: i64, a0: i64) -> Self {
        Self::new(k(a3), k(a2), k(a1), k(a0))
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(vec![self.a0.clone(), self.a1.clone(), self.a2.clone(), self.a3.clone(), Rat::one()])
    }

    /// Monic quartic from a polynomial of degree 4 with leading coefficient 1.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        if p.degree() != Some(4) || !p.coeff(4).is_one() {
            return Err(Error::InvalidArgument(format!("{p} is not a monic quartic")));
        }
        Ok(Self::new(p.coeff(3), p.coeff(2), p.coeff(1), p.coeff(0)))
    }

    /// x³ − a2 x² + (a1 a3 − 4 a0) x + (4 a0 a2 − a1² − a0 a3²).
    pub fn resolvent(&self) -> Poly {
        let (a3, a2, a1, a0) = (&self.a3, &self.a2, &self.a1, &self.a0);
        Poly::new(vec![
            k(4) * a0 * a2 - a1 * a1 - a0 * a3 * a3,
            a1 * a3 - k(4) * a0,
            -a2.clone(),
            Rat::one(),
        ])
    }

    pub fn rational_roots(&self) -> Vec<Rat> {
        self.to_poly().rational_roots()
    }
}

impl fmt::Display for QuarticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Characteristic polynomial of α = h0 + Σ h_j ξ_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub poly: QuarticPoly,
    /// det(B(h)·A − A(h)·B) for the Gram matrices.
    pub det: Rat,
    /// 1, α, α², α³ is a basis, which holds iff `det` ≠ 0.
    pub generates: bool,
}

fn eval_h(f: &RatForm, h: &[Rat; 3]) -> Rat {
    f.evaluate(h).expect("ternary")
}

/// det(B(h)·A − A(h)·B).
pub fn pencil_determinant(p: &FormPair, h: &[Rat; 3]) -> Rat {
    let (qa, qb) = (eval_h(&p.a, h), eval_h(&p.b, h));
    p.a.gram().scale(&qb).add(&p.b.gram().scale(&-qa)).expect("3×3").det()
}

fn alpha(h0: &Rat, h: &[Rat; 3]) -> [Rat; 4] {
    [h0.clone(), h[0].clone(), h[1].clone(), h[2].clone()]
}

/// det(x·I − M_α) by the Faddeev–LeVerrier recursion.
fn characteristic(m: &RatMatrix) -> Poly {
    let n = m.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk = RatMatrix::zeros(n, n);
    for step in 1..=n {
        let shifted = mk.add(&RatMatrix::identity(n).scale(&coeffs[n - step + 1])).expect("square");
        mk = m.mul(&shifted).expect("square");
        coeffs[n - step] = -mk.trace() / k(step as i64);
    }
    Poly::new(coeffs)
}

pub fn char_poly_alpha(p: &FormPair, h0: &Rat, h: &[Rat; 3]) -> Result<CharPoly> {
    let s = quartic_structure(p)?;
    let m = s.multiplication_matrix(&alpha(h0, h));
    let poly = QuarticPoly::from_poly(&characteristic(&m))?;
    let det = pencil_determinant(p, h);
    let generates = !det.is_zero();
    Ok(CharPoly { poly, det, generates })
}

/// Rows ᾱ, ᾱ², ᾱ³: the ξ-coordinates of the powers of α.
pub fn power_matrix(p: &FormPair, h0: &Rat, h: &[Rat; 3]) -> Result<RatMatrix> {
    let s = quartic_structure(p)?;
    let a1 = alpha(h0, h);
    let a2 = s.mul(&a1, &a1);
    let a3 = s.mul(&a2, &a1);
    RatMatrix::from_rows([a1, a2, a3].iter().map(|v| v[1..].to_vec()).collect())
}

/// The pair (Ã, B̃) whose quartic ring is ℚ[x]/(q(x)) with −ξ1 ↦ x (ξ1 has
/// characteristic polynomial q(−x) under the orientation of `quartic_structure`).
pub fn canonical_pair(q: &QuarticPoly) -> FormPair {
    let half = Rat::new(1.into(), 2.into());
    let mut at = RatMatrix::zeros(3, 3);
    at[(0, 2)] = half.clone();
    at[(2, 0)] = half;
    at[(1, 1)] = -Rat::one();
    let (a3, a2, a1, a0) = (&q.a3, &q.a2, &q.a1, &q.a0);
    let b = [
        [Rat::one(), a3 / k(2), a2 / k(6)],
        [a3 / k(2), k(2) * a2 / k(3), a1 / k(2)],
        [a2 / k(6), a1 / k(2), a0.clone()],
    ];
    let bt = RatMatrix::from_rows(b.iter().map(|r| r.iter().map(|v| -v).collect()).collect()).expect("3×3");
    FormPair::new(RatForm::from_gram(at).expect("symmetric"), RatForm::from_gram(bt).expect("symmetric"))
        .expect("ternary")
}

/// The group element (W, V) with (W, V)·(A, B) = (Ã, B̃) for the
/// characteristic polynomial of α = h0 + Σ h_j ξ_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub char_poly: QuarticPoly,
    pub w: RatMatrix,
    pub v: RatMatrix,
}

impl Transition {
    pub fn element(&self) -> GroupElement {
        GroupElement { w: self.w.clone(), v: self.v.clone() }
    }
}

pub fn transition_matrices(p: &FormPair, h0: &Rat, h: &[Rat; 3]) -> Result<Transition> {
    let cp = char_poly_alpha(p, h0, h)?;
    if !cp.generates {
        return Err(Error::Singular("det(B(h)A − A(h)B) vanishes; α does not generate".into()));
    }
    let q = cp.poly;
    let m = power_matrix(p, h0, h)?;
    let l = RatMatrix::from_rows(vec![
        vec![Rat::one(), Rat::zero(), Rat::zero()],
        vec![q.a3.clone(), Rat::one(), Rat::zero()],
        vec![q.a2.clone(), q.a3.clone(), Rat::one()],
    ])?;
    let w = l.mul(&m)?;
    let det_w = w.det();
    let f = det_binary_cubic(p);
    let (qa, qb) = (eval_h(&p.a, h), eval_h(&p.b, h));
    let shear = RatMatrix::from_rows(vec![
        vec![Rat::one(), Rat::zero()],
        vec![(&f.c * &qa - &f.b * &qb) / k(3), Rat::one()],
    ])?;
    let core = RatMatrix::from_rows(vec![
        vec![qb.clone(), -qa.clone()],
        vec![-&f.c * &qa * &qb - &f.d * &qa * &qa, -&f.a * &qb * &qb - &f.b * &qa * &qb],
    ])?;
    let v = shear.mul(&core)?.scale(&(Rat::one() / det_w));
    Ok(Transition { char_poly: q, w, v })
}

/// The resolvent of α's characteristic polynomial written through A(h),
/// B(h) and the determinant cubic (a, b, c, d):
/// (x−z)³ + (cA − bB)(x−z)² + (bd A² + (3ad − bc) AB + ac B²)(x−z)
///   + ad² A³ − (b²d − 2acd) A²B + (ac² − 2abd) AB² − a²d B³,
/// with z = (a2 + cA − bB)/3 and a2 taken from the characteristic polynomial.
pub fn resolvent_of_alpha_closed_form(p: &FormPair, h0: &Rat, h: &[Rat; 3]) -> Result<Poly> {
    let (qa, qb) = (eval_h(&p.a, h), eval_h(&p.b, h));
    if qa.is_zero() && qb.is_zero() {
        return Err(Error::InvalidArgument("A(h) = B(h) = 0: h is a common zero of the pair".into()));
    }
    let cp = char_poly_alpha(p, h0, h)?;
    let f = det_binary_cubic(p);
    let (a, b, c, d) = (&f.a, &f.b, &f.c, &f.d);
    let s1 = c * &qa - b * &qb;
    let s2 = b * d * &qa * &qa + (k(3) * a * d - b * c) * &qa * &qb + a * c * &qb * &qb;
    let s3 = a * d * d * &qa * &qa * &qa - (b * b * d - k(2) * a * c * d) * &qa * &qa * &qb
        + (a * c * c - k(2) * a * b * d) * &qa * &qb * &qb
        - a * a * d * &qb * &qb * &qb;
    let z = (&cp.poly.a2 + &s1) / k(3);
    // Cubic in t = x − z, then shifted back.
    let in_t = Poly::new(vec![s3, s2, s1, Rat::one()]);
    Ok(in_t.shift(&-z))
}

/// True iff the characteristic polynomial of α has no rational root, which
/// for a generating α means the pair has no common rational zero.
pub fn anisotropic_over_q(p: &FormPair, h0: &Rat, h: &[Rat; 3]) -> Result<bool> {
    let cp = char_poly_alpha(p, h0, h)?;
    if !cp.generates {
        return Err(Error::InvalidArgument("α does not generate the quartic ring".into()));
    }
    Ok(cp.poly.rational_roots().is_empty())
}

/// 4·det(Ã x − B̃) as a polynomial in x.
pub fn canonical_cubic(q: &QuarticPoly) -> Poly {
    let f = det_binary_cubic(&canonical_pair(q));
    // f(x, 1) = a x³ + b x² + c x + d
    f.dehomogenize()
}

pub fn fmt_matrix(m: &RatMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", m.row(i).iter().map(fmt_rat).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}
