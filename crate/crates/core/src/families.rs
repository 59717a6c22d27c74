//! The two (c, d)-families of inequivalent ternary forms with equal
//! representation sets: hexagonal
//!   f = c(x1² − x1x2 + x2²) + d x3²,             g = c(x1² + 3x2²) + d x3²
//! and rhombohedral
//!   f = c(x1² − x1x2 + x2²) + d(x1 + x2 + 3x3)², g = c(x1² + 3x2²) + d(x1 + 3x3)².

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::arith::{lcm_denominators, Rat};
use crate::equiv::equivalent_over_z;
use crate::error::{Error, Result};
use crate::forms::{FormPair, IntForm, RatForm};
use crate::matrix::RatMatrix;
use crate::reduce::minkowski_reduce;
use crate::reps::{rep_equal_up_to, representations_up_to, RepComparison};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    Hexagonal,
    Rhombohedral,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 2] = [FamilyTag::Hexagonal, FamilyTag::Rhombohedral];
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::Hexagonal => "hex",
            FamilyTag::Rhombohedral => "rhomb",
        })
    }
}

impl FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hex" | "hexagonal" | "i" => Ok(FamilyTag::Hexagonal),
            "rhomb" | "rhombohedral" | "ii" => Ok(FamilyTag::Rhombohedral),
            _ => Err(Error::Parse(format!("unknown family {s:?} (expected hex or rhomb)"))),
        }
    }
}

fn ternary(c: [i64; 6]) -> RatForm {
    IntForm::ternary(c).to_rat()
}

/// (A1, B1, A2, B2): f = cA1 + dB1 and g = cA2 + dB2.
pub fn family_components(tag: FamilyTag) -> [RatForm; 4] {
    match tag {
        FamilyTag::Hexagonal => [
            ternary([1, 1, 0, -1, 0, 0]),
            ternary([0, 0, 1, 0, 0, 0]),
            ternary([1, 3, 0, 0, 0, 0]),
            ternary([0, 0, 1, 0, 0, 0]),
        ],
        // (x1 + x2 + 3x3)² and (x1 + 3x3)²
        FamilyTag::Rhombohedral => [
            ternary([1, 1, 0, -1, 0, 0]),
            ternary([1, 1, 9, 2, 6, 6]),
            ternary([1, 3, 0, 0, 0, 0]),
            ternary([1, 0, 9, 0, 6, 0]),
        ],
    }
}

/// One member (tag, c, d) of a family with its two forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub tag: FamilyTag,
    pub c: Rat,
    pub d: Rat,
    pub f: RatForm,
    pub g: RatForm,
}

pub fn family_pair(tag: FamilyTag, c: &Rat, d: &Rat) -> Result<FamilyMember> {
    if !c.is_positive() || !d.is_positive() {
        return Err(Error::InvalidArgument("family parameters must be positive".into()));
    }
    let [a1, b1, a2, b2] = family_components(tag);
    let f = a1.scale(c).add(&b1.scale(d))?;
    let g = a2.scale(c).add(&b2.scale(d))?;
    Ok(FamilyMember { tag, c: c.clone(), d: d.clone(), f, g })
}

/// (A1, B1) and (A2, B2) as pairs, for the determinant-cubic comparison.
pub fn family_form_pairs(tag: FamilyTag) -> (FormPair, FormPair) {
    let [a1, b1, a2, b2] = family_components(tag);
    (FormPair { a: a1, b: b1 }, FormPair { a: a2, b: b2 })
}

/// Gram determinant of f (first) and g (second) as k·c²·d.
pub fn determinant_factors(tag: FamilyTag) -> [Rat; 2] {
    match tag {
        FamilyTag::Hexagonal => [Rat::new(3.into(), 4.into()), Rat::from_integer(3.into())],
        FamilyTag::Rhombohedral => [Rat::new(27.into(), 4.into()), Rat::from_integer(27.into())],
    }
}

fn matrix(rows: &[&[i64]]) -> RatMatrix {
    RatMatrix::from_i64(rows)
}

/// Linear substitutions (S, P) with (A1, B1)(x·S) = (A2, B2)(x·P).
pub fn substitutions(tag: FamilyTag) -> Vec<(RatMatrix, RatMatrix)> {
    let id = matrix(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    // Row i of S holds the coefficients of x_i in the substituted variables.
    match tag {
        // (x1 + x2, 2x2, x3)
        FamilyTag::Hexagonal => vec![(matrix(&[&[1, 0, 0], &[1, 2, 0], &[0, 0, 1]]), id)],
        FamilyTag::Rhombohedral => vec![
            // (x1 + x2, 2x2, −x2 + x3) ↦ (x1, x2, x3)
            (matrix(&[&[1, 0, 0], &[1, 2, -1], &[0, 0, 1]]), id.clone()),
            // (2x1, x1 + x2, −x1 + x3) ↦ (x2, x1, x3)
            (matrix(&[&[2, 1, -1], &[0, 1, 0], &[0, 0, 1]]), matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])),
            // (x1 + x2, x1 − x2, −x1 − x3) ↦ (x1, x2, x3)
            (matrix(&[&[1, 1, -1], &[1, -1, 0], &[0, 0, -1]]), id),
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    /// Every substitution identity holds for A and B separately and for f, g.
    pub symbolic: bool,
    pub numeric: Option<RepComparison>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.symbolic && self.numeric.as_ref().map_or(true, RepComparison::equal)
    }
}

/// Both forms scaled by the least common denominator of their coefficients.
pub fn integral_forms(m: &FamilyMember) -> Result<(IntForm, IntForm)> {
    let l: BigInt = lcm_denominators(m.f.poly_coeffs().iter().chain(m.g.poly_coeffs().iter()));
    let s = Rat::from_integer(l);
    let f = m.f.scale(&s).to_int().ok_or_else(|| Error::Inconsistent("scaling failed".into()))?;
    let g = m.g.scale(&s).to_int().ok_or_else(|| Error::Inconsistent("scaling failed".into()))?;
    Ok((f, g))
}

/// Checks the substitution identities exactly and, when `bound` is given,
/// compares representation sets of the (integrally scaled) forms up to it.
pub fn verify_family_identity(tag: FamilyTag, c: &Rat, d: &Rat, bound: Option<u64>) -> Result<FamilyReport> {
    let m = family_pair(tag, c, d)?;
    let [a1, b1, a2, b2] = family_components(tag);
    let mut symbolic = true;
    for (s, p) in substitutions(tag) {
        for (x, y) in [(&a1, &a2), (&b1, &b2), (&m.f, &m.g)] {
            symbolic &= x.transform(&s)? == y.transform(&p)?;
        }
    }
    let numeric = match bound {
        Some(b) => {
            let (f, g) = integral_forms(&m)?;
            Some(rep_equal_up_to(&f, &g, b)?)
        }
        None => None,
    };
    Ok(FamilyReport { symbolic, numeric })
}

/// Which form of a family member a given form is equivalent to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    F,
    G,
}

/// Family members (tag, c, d, side) whose form is ℤ-equivalent to h.
///
/// Both family forms represent 3c, and c ≤ λ₂(h) because the quadratic part
/// in (x1, x2) is at least 1 on any vector outside its kernel. So c runs over
/// v/3 for represented v ≤ 3·λ₃(h), and d is fixed by det h = k·c²·d.
pub fn family_memberships(h: &IntForm) -> Result<Vec<(FamilyTag, Rat, Rat, Side)>> {
    if h.dim() != 3 {
        return Ok(Vec::new());
    }
    let red = minkowski_reduce(h)?;
    let lambda3: u64 = red.form.coeff(2, 2).try_into().map_err(|_| Error::Overflow)?;
    let reps = representations_up_to(h, 3 * lambda3)?;
    let det = h.gram_determinant();
    let mut out = Vec::new();
    for v in reps.values() {
        let c = Rat::new(v.into(), 3.into());
        for tag in FamilyTag::ALL {
            for (side, kf) in [Side::F, Side::G].into_iter().zip(determinant_factors(tag)) {
                let d = &det / (&kf * &c * &c);
                let m = family_pair(tag, &c, &d)?;
                let form = match side {
                    Side::F => &m.f,
                    Side::G => &m.g,
                };
                let Some(fi) = form.to_int() else { continue };
                if !fi.is_positive_definite() {
                    continue;
                }
                if equivalent_over_z(&fi, h)?.is_some() {
                    out.push((tag, c.clone(), d, side));
                }
            }
        }
    }
    Ok(out)
}

/// True iff every form is ℤ-equivalent to f or g of one common family member.
pub fn is_single_family_set(forms: &[IntForm]) -> Result<bool> {
    let Some((first, rest)) = forms.split_first() else { return Ok(false) };
    let mut common: Vec<(FamilyTag, Rat, Rat)> =
        family_memberships(first)?.into_iter().map(|(t, c, d, _)| (t, c, d)).collect();
    common.sort();
    common.dedup();
    for h in rest {
        if common.is_empty() {
            return Ok(false);
        }
        let mine: Vec<(FamilyTag, Rat, Rat)> =
            family_memberships(h)?.into_iter().map(|(t, c, d, _)| (t, c, d)).collect();
        common.retain(|m| mine.contains(m));
    }
    Ok(!common.is_empty())
}

/// Helper for callers building integral family members.
pub fn integral_member(tag: FamilyTag, c: i64, d: i64) -> Result<(IntForm, IntForm)> {
    integral_forms(&family_pair(tag, &Rat::from_integer(c.into()), &Rat::from_integer(d.into()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::pair::det_cubic_ratio_check;

    #[test]
    fn hexagonal_unit_member() {
        let m = family_pair(FamilyTag::Hexagonal, &rat_int(1), &rat_int(1)).unwrap();
        assert_eq!(m.f.to_int().unwrap(), IntForm::ternary([1, 1, 1, -1, 0, 0]));
        assert_eq!(m.g.to_int().unwrap(), IntForm::ternary([1, 3, 1, 0, 0, 0]));
        let m2 = family_pair(FamilyTag::Hexagonal, &rat_int(2), &rat_int(3)).unwrap();
        assert_eq!(m2.f.to_int().unwrap(), IntForm::ternary([2, 2, 3, -2, 0, 0]));
    }

    #[test]
    fn rhombohedral_unit_member() {
        let m = family_pair(FamilyTag::Rhombohedral, &rat_int(1), &rat_int(1)).unwrap();
        let g = m.f.gram();
        assert_eq!(g[(0, 0)], rat_int(2));
        assert_eq!(g[(0, 1)], rat(1, 2));
    }

    #[test]
    fn identities_hold() {
        for tag in FamilyTag::ALL {
            let r = verify_family_identity(tag, &rat(2, 3), &rat(5, 7), Some(300)).unwrap();
            assert!(r.passed(), "{tag}");
        }
    }

    #[test]
    fn determinants_and_cubic_ratio() {
        for tag in FamilyTag::ALL {
            let (c, d) = (rat(3, 2), rat(5, 1));
            let m = family_pair(tag, &c, &d).unwrap();
            let [kf, kg] = determinant_factors(tag);
            assert_eq!(m.f.determinant(), &kf * &c * &c * &d);
            assert_eq!(m.g.determinant(), &kg * &c * &c * &d);
            let (p1, p2) = family_form_pairs(tag);
            assert_eq!(det_cubic_ratio_check(&p1, &p2), Some(rat(1, 4)));
        }
    }

    #[test]
    fn memberships_are_recovered() {
        let (f, g) = integral_member(FamilyTag::Rhombohedral, 2, 3).unwrap();
        let transformed = f.transform(&crate::forms::IntMatrix::from_rows_i64(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 1, 1]]).unwrap()).unwrap();
        let found = family_memberships(&transformed).unwrap();
        assert!(found.contains(&(FamilyTag::Rhombohedral, rat_int(2), rat_int(3), Side::F)));
        assert!(is_single_family_set(&[f, g]).unwrap());
        let not = [IntForm::ternary([2, 3, 5, -2, 0, 0]), IntForm::ternary([2, 2, 7, -1, -1, -1])];
        assert!(!is_single_family_set(&not).unwrap());
    }
}
