//! Hilbert symbols (a, b)_v over ℚ at a prime or at the real place.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{prime_divisors, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(BigInt),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// a·den(a)², an integer in the same square class.
fn integral_square_class(a: &Rat) -> BigInt {
    a.numer() * a.denom()
}

/// (valuation, unit part).
fn split_p(mut n: BigInt, p: &BigInt) -> (u64, BigInt) {
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Legendre symbol (u / p) for an odd prime p not dividing u.
fn legendre(u: &BigInt, p: &BigInt) -> i32 {
    let e = (p - 1u32) / 2u32;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn mod8(u: &BigInt) -> u32 {
    u.mod_floor(&BigInt::from(8)).to_u32().expect("residue")
}

/// (a, b)_v: 1 if z² = a x² + b y² has a nonzero solution over ℚ_v, else −1.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: &Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidArgument("Hilbert symbol of zero".into()));
    }
    let (a, b) = (integral_square_class(a), integral_square_class(b));
    let p = match v {
        Place::Infinity => return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(p) => p,
    };
    if *p < BigInt::from(2) {
        return Err(Error::InvalidArgument(format!("{p} is not a prime")));
    }
    let (alpha, u) = split_p(a, p);
    let (beta, w) = split_p(b, p);
    let parity = |x: u64| x % 2 == 1;
    if *p == BigInt::from(2) {
        // (−1)^{ε(u)ε(w) + α ω(w) + β ω(u)}
        let eps = |x: &BigInt| (mod8(x) % 4 == 3) as u32;
        let omega = |x: &BigInt| matches!(mod8(x), 3 | 5) as u32;
        let e = eps(&u) * eps(&w) + parity(alpha) as u32 * omega(&w) + parity(beta) as u32 * omega(&u);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    // (−1)^{αβ ε(p)} (u/p)^β (w/p)^α
    let mut s = 1;
    if parity(alpha) && parity(beta) && mod8(p) % 4 == 3 {
        s = -s;
    }
    if parity(beta) {
        s *= legendre(&u, p);
    }
    if parity(alpha) {
        s *= legendre(&w, p);
    }
    Ok(s)
}

/// The places where (a, b)_v can differ from 1: ∞, 2, and the odd primes
/// dividing a numerator or denominator.
pub fn relevant_places(a: &Rat, b: &Rat) -> Vec<Place> {
    let mut primes: Vec<BigInt> = vec![BigInt::from(2)];
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        primes.extend(prime_divisors(n));
    }
    primes.sort();
    primes.dedup();
    std::iter::once(Place::Infinity).chain(primes.into_iter().map(Place::Prime)).collect()
}

/// Π_v (a, b)_v over the relevant places.
pub fn hilbert_product(a: &Rat, b: &Rat) -> Result<i32> {
    relevant_places(a, b).iter().try_fold(1, |acc, v| Ok(acc * hilbert_symbol(a, b, v)?))
}
