//! Trunk partition, equidistant parameter, and the thickness rescaling recipe.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::rational::{self, int, Rational};

/// Splits a trunk of thickness `eps0` into `(eps1, eps2)` solving
///
/// ```text
/// eps1 + eps2 = eps0
/// (pC - p) eps0 = (pC - 2p + l') eps2 + (pC - p + l) eps1
/// ```
///
/// where `C` is the previous conductor at the trunk's target and
/// `l = pm + l'` with `0 < l' < p`.
pub fn partition_trunk(c_prev: u64, p: u32, l: u64, l_prime: u64, eps0: &Rational) -> Result<(Rational, Rational)> {
    let p64 = p as u64;
    if l_prime == 0 || l_prime >= p64 || l % p64 != l_prime {
        return Err(Error::PreconditionViolated(format!("l = {l} must be pm + l' with 0 < l' = {l_prime} < p = {p}")));
    }
    if !eps0.is_positive() {
        return Err(Error::NonPositiveSolution(format!("eps0 = {} is not positive", rational::format(eps0))));
    }
    let (p, c, l, lp) = (p as i64, c_prev as i64, l as i64, l_prime as i64);
    let a21 = int(p * c - p + l);
    let a22 = int(p * c - 2 * p + lp);
    let b2 = int(p * c - p) * eps0;
    // Cramer's rule with the first row (1, 1 | eps0)
    let det = &a22 - &a21;
    if det.is_zero() {
        return Err(Error::NonPositiveSolution("singular system".into()));
    }
    let eps1 = (eps0 * &a22 - &b2) / &det;
    let eps2 = (&b2 - &a21 * eps0) / &det;
    if !eps1.is_positive() || !eps2.is_positive() {
        return Err(Error::NonPositiveSolution(format!("({}, {})", rational::format(&eps1), rational::format(&eps2))));
    }
    Ok((eps1, eps2))
}

/// Least `a` (in the field's element order) with `a^{p(m+1)} = e / c^p`.
pub fn solve_equidistant_parameter(field: &Field, e: FieldElement, c: FieldElement, m: u64) -> Result<FieldElement> {
    if e.is_zero() || c.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = field.characteristic() as u64;
    let k = p * (m + 1);
    let rhs = field.div(e, field.pow(c, p))?;
    field.lth_roots(rhs, k).first().copied().ok_or(Error::NoRootInField { required_exponent: k })
}

/// Trunk thickness after moving a radical root of depth `root_depth` to
/// depth zero: `eps + root_depth / (conductor - 1)`.
pub fn rescaled_trunk_thickness(eps: &Rational, root_depth: &Rational, conductor: u64) -> Result<Rational> {
    if conductor < 2 {
        return Err(Error::PreconditionViolated(format!("conductor {conductor} must exceed 1")));
    }
    Ok(eps + root_depth / int(conductor as i64 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::rational::ratio;

    #[test]
    fn golden_partition() {
        assert_eq!(partition_trunk(6, 3, 5, 2, &int(1)), Ok((ratio(1, 6), ratio(5, 6))));
    }

    #[test]
    fn partition_with_m_zero_and_scaling() {
        let (a, b) = partition_trunk(4, 3, 1, 1, &int(1)).unwrap();
        assert!(a.is_positive() && b.is_positive());
        assert_eq!(&a + &b, int(1));
        let (a3, b3) = partition_trunk(4, 3, 1, 1, &int(3)).unwrap();
        assert_eq!((a3, b3), (a * int(3), b * int(3)));
    }

    #[test]
    fn partition_rejects_bad_input() {
        assert!(matches!(partition_trunk(6, 3, 6, 0, &int(1)), Err(Error::PreconditionViolated(_))));
        assert!(matches!(partition_trunk(6, 3, 5, 1, &int(1)), Err(Error::PreconditionViolated(_))));
        assert!(matches!(partition_trunk(6, 3, 5, 2, &int(0)), Err(Error::NonPositiveSolution(_))));
    }

    #[test]
    fn equidistant_parameter_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(solve_equidistant_parameter(&f3, f3.one(), f3.one(), 0), Ok(f3.one()));
        assert_eq!(solve_equidistant_parameter(&f3, f3.from_int(2), f3.one(), 1), Err(Error::NoRootInField { required_exponent: 6 }));
        let f4 = Field::new(FieldSpec::new(2, vec![1, 1, 1])).unwrap();
        let g = f4.t();
        let a = solve_equidistant_parameter(&f4, f4.mul(g, g), f4.one(), 1).unwrap();
        assert_eq!(f4.pow(a, 4), f4.mul(g, g));
        assert_eq!(a, f4.pth_root(f4.pth_root(f4.mul(g, g))));
    }

    #[test]
    fn rescale_recipe() {
        assert_eq!(rescaled_trunk_thickness(&ratio(1, 2), &ratio(1, 3), 4), Ok(ratio(1, 2) + ratio(1, 9)));
        assert!(rescaled_trunk_thickness(&int(1), &int(1), 1).is_err());
    }
}
