//! Binary cubic forms and the determinant cubic 4·det(A x − B y) of a pair.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{fmt_rat, lcm_denominators, Rat};
use crate::forms::FormPair;
use crate::matrix::RatMatrix;
use crate::poly::Poly;

/// a x³ + b x² y + c x y² + d y³.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryCubic {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

/// Homogeneous binary polynomial: coefficient k multiplies x^{deg−k} y^k.
fn hmul(p: &[Rat], q: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

impl BinaryCubic {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        BinaryCubic { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |v: i64| Rat::from_integer(v.into());
        Self::new(r(a), r(b), r(c), r(d))
    }

    pub fn coeffs(&self) -> [Rat; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        &self.a * x * x * x + &self.b * x * x * y + &self.c * x * y * y + &self.d * y * y * y
    }

    /// ∂f/∂x at (x, y).
    pub fn dx(&self, x: &Rat, y: &Rat) -> Rat {
        Rat::from_integer(3.into()) * &self.a * x * x + Rat::from_integer(2.into()) * &self.b * x * y + &self.c * y * y
    }

    /// ∂f/∂y at (x, y).
    pub fn dy(&self, x: &Rat, y: &Rat) -> Rat {
        &self.b * x * x + Rat::from_integer(2.into()) * &self.c * x * y + Rat::from_integer(3.into()) * &self.d * y * y
    }

    /// b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd.
    pub fn discriminant(&self) -> Rat {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let k = |v: i64| Rat::from_integer(v.into());
        b * b * c * c - k(4) * a * c * c * c - k(4) * b * b * b * d - k(27) * a * a * d * d + k(18) * a * b * c * d
    }

    /// f(x, 1) as a univariate polynomial.
    pub fn dehomogenize(&self) -> Poly {
        Poly::new(vec![self.d.clone(), self.c.clone(), self.b.clone(), self.a.clone()])
    }

    /// The cubic (x, y) ↦ f((x, y)·v) for a 2×2 matrix v.
    pub fn substitute(&self, v: &RatMatrix) -> BinaryCubic {
        // (x, y)·v = (v00 x + v10 y, v01 x + v11 y)
        let l1 = [v[(0, 0)].clone(), v[(1, 0)].clone()];
        let l2 = [v[(0, 1)].clone(), v[(1, 1)].clone()];
        let mut out = vec![Rat::zero(); 4];
        for (k, coef) in self.coeffs().iter().enumerate() {
            let mut term = vec![coef.clone()];
            for _ in 0..3 - k {
                term = hmul(&term, &l1);
            }
            for _ in 0..k {
                term = hmul(&term, &l2);
            }
            for (o, t) in out.iter_mut().zip(term) {
                *o += t;
            }
        }
        let [a, b, c, d]: [Rat; 4] = out.try_into().expect("four coefficients");
        BinaryCubic { a, b, c, d }
    }

    pub fn scale(&self, s: &Rat) -> BinaryCubic {
        let [a, b, c, d] = self.coeffs().map(|v| v * s);
        BinaryCubic { a, b, c, d }
    }

    /// Rational projective roots [p : q] with coprime integers, q ≥ 0 and
    /// p > 0 when q = 0. Sorted by p/q with [1 : 0] last.
    pub fn rational_roots(&self) -> Vec<(BigInt, BigInt)> {
        let mut out: Vec<(BigInt, BigInt)> = self
            .dehomogenize()
            .rational_roots()
            .into_iter()
            .map(|r| (r.numer().clone(), r.denom().clone()))
            .collect();
        if self.a.is_zero() && !self.is_zero() {
            out.push((BigInt::one(), BigInt::zero()));
        }
        out
    }

    /// c with self = c·other, if the cubics are proportional (other ≠ 0).
    pub fn ratio_to(&self, other: &BinaryCubic) -> Option<Rat> {
        let (s, o) = (self.coeffs(), other.coeffs());
        let k = o.iter().position(|v| !v.is_zero())?;
        let c = &s[k] / &o[k];
        s.iter().zip(&o).all(|(x, y)| *x == &c * y).then_some(c)
    }

    /// Integer multiple with coprime coefficients and the same sign.
    pub fn primitive_integral(&self) -> [BigInt; 4] {
        let l = lcm_denominators(&self.coeffs());
        let ints = self.coeffs().map(|v| (v * Rat::from_integer(l.clone())).to_integer());
        let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        if g.is_zero() {
            return ints;
        }
        ints.map(|v| v / &g)
    }
}

impl fmt::Display for BinaryCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mons = ["x^3", "x^2*y", "x*y^2", "y^3"];
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .zip(mons)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| {
                if c.is_one() {
                    m.to_string()
                } else if (-c).is_one() {
                    format!("-{m}")
                } else {
                    format!("{}*{m}", fmt_rat(c))
                }
            })
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = terms.join(" + ").replace("+ -", "- ");
        if s.starts_with('+') {
            s.remove(0);
        }
        write!(f, "{s}")
    }
}

/// 4·det(x·A − y·B) for the Gram matrices of a pair.
pub fn det_binary_cubic(p: &FormPair) -> BinaryCubic {
    let (ga, gb) = (p.a.gram(), p.b.gram());
    let at = |x: i64, y: i64| -> Rat {
        let m = ga.scale(&Rat::from_integer(x.into())).add(&gb.scale(&Rat::from_integer((-y).into()))).expect("3×3");
        m.det() * Rat::from_integer(4.into())
    };
    // a = f(1,0), d = f(0,1), f(1,1) = a+b+c+d, f(1,−1) = a−b+c−d.
    let (a, d) = (at(1, 0), at(0, 1));
    let (p1, m1) = (at(1, 1), at(1, -1));
    let two = Rat::from_integer(2.into());
    let b_plus_c = &p1 - &a - &d;
    let c_minus_b = &m1 - &a + &d;
    let c = (&b_plus_c + &c_minus_b) / &two;
    let b = (&b_plus_c - &c_minus_b) / &two;
    BinaryCubic { a, b, c, d }
}

/// Discriminant of the determinant cubic.
pub fn disc_pair(p: &FormPair) -> Rat {
    det_binary_cubic(p).discriminant()
}

/// c with det(A₁x − B₁y) = c·det(A₂x − B₂y), when the cubics are proportional.
pub fn det_cubic_ratio_check(p1: &FormPair, p2: &FormPair) -> Option<Rat> {
    let (f1, f2) = (det_binary_cubic(p1), det_binary_cubic(p2));
    if f2.is_zero() {
        return f1.is_zero().then(Rat::one);
    }
    f1.ratio_to(&f2)
}

/// No repeated projective root.
pub fn is_squarefree(f: &BinaryCubic) -> bool {
    !f.discriminant().is_zero()
}
