//! Automorphisms of binary cubic forms: 2×2 matrices V with
//! (det V)⁻¹ f((x, y)·V) = u·f(x, y) and Vⁿ = uⁿ I for n = 2 or 3, and the
//! check that a pair is fixed by (W, −u⁻¹V).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{rational_sqrt, Rat};
use crate::error::{Error, Result};
use crate::forms::{FormPair, GroupElement};
use crate::matrix::RatMatrix;
use crate::pair::cubic::{is_squarefree, BinaryCubic};

fn k(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

/// The order-2 automorphism attached to a simple rational root [p3 : q3]:
/// V = uC·[[b p3 + c q3, −3a p3 − b q3], [c p3 + 3d q3, −b p3 − c q3]] with
/// C = p3 / f_y(p3, q3), or −q3 / f_x(p3, q3) when f_y vanishes there.
pub fn cubic_automorphism_order2(f: &BinaryCubic, root: (&BigInt, &BigInt), u: &Rat) -> Result<RatMatrix> {
    if !is_squarefree(f) {
        return Err(Error::InvalidArgument(format!("{f} has a repeated root")));
    }
    let (p3, q3) = (Rat::from_integer(root.0.clone()), Rat::from_integer(root.1.clone()));
    if p3.is_zero() && q3.is_zero() {
        return Err(Error::InvalidArgument("[0 : 0] is not a projective point".into()));
    }
    if !f.eval(&p3, &q3).is_zero() {
        return Err(Error::InvalidArgument(format!("[{p3} : {q3}] is not a root of {f}")));
    }
    let fy = f.dy(&p3, &q3);
    let c = if !fy.is_zero() {
        &p3 / fy
    } else {
        let fx = f.dx(&p3, &q3);
        if fx.is_zero() {
            return Err(Error::InvalidArgument("root is not simple".into()));
        }
        -&q3 / fx
    };
    let (a, b, cc, d) = (&f.a, &f.b, &f.c, &f.d);
    let m = RatMatrix::from_rows(vec![
        vec![b * &p3 + cc * &q3, -k(3) * a * &p3 - b * &q3],
        vec![cc * &p3 + k(3) * d * &q3, -b * &p3 - cc * &q3],
    ])?;
    Ok(m.scale(&(u * c)))
}

/// The order-3 automorphism, defined when Disc(f) = Δ² with Δ ∈ ℚ:
/// V = (u/Δ)·[[(9ad − bc − Δ)/2, b² − 3ac], [−c² + 3bd, −(9ad − bc + Δ)/2]],
/// taking Δ > 0.
pub fn cubic_automorphism_order3(f: &BinaryCubic, u: &Rat) -> Result<RatMatrix> {
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(Error::InvalidArgument(format!("{f} has a repeated root")));
    }
    let delta = rational_sqrt(&disc)
        .ok_or_else(|| Error::InvalidArgument(format!("discriminant {disc} of {f} is not a rational square")))?;
    debug_assert!(delta.is_positive());
    let (a, b, c, d) = (&f.a, &f.b, &f.c, &f.d);
    let t = k(9) * a * d - b * c;
    let m = RatMatrix::from_rows(vec![
        vec![(&t - &delta) / k(2), b * b - k(3) * a * c],
        vec![-(c * c) + k(3) * b * d, -(&t + &delta) / k(2)],
    ])?;
    Ok(m.scale(&(u / delta)))
}

/// (det V)⁻¹ f((x, y)·V) = u·f(x, y).
pub fn satisfies_scaling_identity(f: &BinaryCubic, v: &RatMatrix, u: &Rat) -> bool {
    let det = v.det();
    !det.is_zero() && f.substitute(v).scale(&(Rat::one() / det)) == f.scale(u)
}

/// Vⁿ = uⁿ I.
pub fn power_is_scalar(v: &RatMatrix, n: u32, u: &Rat) -> bool {
    let un = (0..n).fold(Rat::one(), |acc, _| acc * u);
    v.pow(n).map(|p| p == RatMatrix::identity(2).scale(&un)).unwrap_or(false)
}

/// (W, −u⁻¹V)·(A, B) = (A, B).
pub fn pair_fixing_witness_check(p: &FormPair, w: &RatMatrix, v: &RatMatrix, u: &Rat) -> bool {
    if u.is_zero() {
        return false;
    }
    let vv = v.scale(&(-Rat::one() / u));
    match GroupElement::new(w.clone(), vv) {
        Ok(g) => g.act(p) == *p,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use crate::forms::{IntForm, RatForm};
    use crate::pair::cubic::det_binary_cubic;

    fn int(v: i64) -> BigInt {
        v.into()
    }

    #[test]
    fn order2_for_x3_minus_xy2() {
        let f = BinaryCubic::from_i64(1, 0, -1, 0);
        let u = rat_int(1);
        let v = cubic_automorphism_order2(&f, (&int(0), &int(1)), &u).unwrap();
        assert_eq!(v, RatMatrix::from_i64(&[&[-1, 0], &[0, 1]]));
        let v = cubic_automorphism_order2(&f, (&int(1), &int(1)), &u).unwrap();
        assert!(satisfies_scaling_identity(&f, &v, &u));
        assert!(power_is_scalar(&v, 2, &u));
        let triple = BinaryCubic::from_i64(1, 0, 0, 0);
        assert!(cubic_automorphism_order2(&triple, (&int(0), &int(1)), &u).is_err());
    }

    #[test]
    fn order3_for_x3_minus_xy2() {
        let f = BinaryCubic::from_i64(1, 0, -1, 0);
        let u = rat_int(1);
        let v = cubic_automorphism_order3(&f, &u).unwrap();
        let expected = RatMatrix::from_i64(&[&[-1, 3], &[-1, -1]]).scale(&Rat::new(1.into(), 2.into()));
        assert_eq!(v, expected);
        assert!(power_is_scalar(&v, 3, &u));
        assert!(satisfies_scaling_identity(&f, &v, &u));
        let u2 = rat_int(2);
        let v2 = cubic_automorphism_order3(&f, &u2).unwrap();
        assert_eq!(v2, v.scale(&u2));
        assert!(satisfies_scaling_identity(&f, &v2, &u2));
        // x³ − 2y³: discriminant −108 is not a square.
        assert!(cubic_automorphism_order3(&BinaryCubic::from_i64(1, 0, 0, -2), &u).is_err());
    }

    #[test]
    fn fixing_checks() {
        let p = FormPair::from_int(&IntForm::ternary([1, 2, 3, 1, 0, -1]), &IntForm::ternary([0, 1, -1, 2, 1, 0])).unwrap();
        let one = rat_int(1);
        let i3 = RatMatrix::identity(3);
        assert!(pair_fixing_witness_check(&p, &i3, &RatMatrix::identity(2).scale(&-one.clone()), &one));
        let wrong = RatMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert!(!pair_fixing_witness_check(&p, &wrong, &RatMatrix::identity(2).scale(&-one.clone()), &one));
    }

    #[test]
    fn split_pair_fixed_by_order2_symmetry() {
        // A = diag(1, 1, 1), B = diag(1, −1, 0): swapping x1, x2 sends B to −B.
        let a = RatForm::from_gram(RatMatrix::identity(3)).unwrap();
        let b = RatForm::from_gram(RatMatrix::diagonal(&[rat_int(1), rat_int(-1), rat_int(0)])).unwrap();
        let p = FormPair::new(a, b).unwrap();
        let f = det_binary_cubic(&p);
        // Substituting y ↦ −y moves the eigenvalue roots [α_i : 1] to [α_i : −1].
        let g = f.substitute(&RatMatrix::from_i64(&[&[1, 0], &[0, -1]]));
        let one = rat_int(1);
        let v = cubic_automorphism_order2(&g, (&int(0), &int(-1)), &one).unwrap();
        assert!(satisfies_scaling_identity(&g, &v, &one));
        let w = RatMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert!(pair_fixing_witness_check(&p, &w, &v, &one));
    }
}
