//! Small exact-arithmetic helpers shared across modules.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt_big(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

pub fn isqrt_i128(n: i128) -> i128 {
    debug_assert!(n >= 0);
    n.sqrt()
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// True iff `q` is the square of a rational number.
pub fn rational_square(q: &Rat) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::InvalidArgument("rational_square of zero".into()));
    }
    Ok(is_square_int(q.numer()) && is_square_int(q.denom()))
}

/// Square root of a rational square, if it is one (non-negative root).
pub fn rational_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rat::new(rn, rd))
}

/// Floor of a rational as an integer.
pub fn floor_rat(q: &Rat) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil_rat(q: &Rat) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

pub fn lcm_denominators<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()))
}

pub fn to_i128(v: &BigInt) -> Result<i128> {
    v.to_i128().ok_or(Error::Overflow)
}

pub fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or(Error::Overflow)
}

/// Integer division rounding toward negative infinity, for i128.
pub fn div_floor_i128(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

pub fn div_ceil_i128(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

/// Prime factors (with multiplicity collapsed) of |n| by trial division.
/// Adequate for the test- and table-sized inputs this crate handles.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let two = BigInt::from(2);
    if n.is_zero() {
        return out;
    }
    let mut p = two.clone();
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += if p == two { BigInt::one() } else { two.clone() };
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// All positive divisors of |n| (n ≠ 0), ascending.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
