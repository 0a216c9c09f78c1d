use num_traits::Signed;

use super::{HurwitzTree, TreeBuilder};
use crate::differential::DifferentialForm;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Polynomial;
use crate::ratfunc::RationalFunction;
use crate::rational::{self, int, Rational};

/// `a dx / (x (x^l - a))`.
pub fn equidistant_form(field: &Field, l: u64, a: FieldElement) -> DifferentialForm {
    let den = Polynomial::x(field).mul(&Polynomial::monomial(field, field.one(), l as usize).sub(&Polynomial::constant(field, a)));
    DifferentialForm::new(RationalFunction::new(Polynomial::constant(field, a), den).expect("nonzero"))
}

/// Leaf points `0` and the roots of `x^l - a`, erroring if `x^l - a` does not split.
pub fn equidistant_points(field: &Field, l: u64, a: FieldElement) -> Result<Vec<FieldElement>> {
    let p = field.characteristic() as u64;
    if l == 0 || l.is_multiple_of(p) {
        return Err(Error::PreconditionViolated(format!("l = {l} must be positive and prime to p")));
    }
    if a.is_zero() {
        return Err(Error::PreconditionViolated("a must be nonzero".into()));
    }
    let roots = field.lth_roots(a, l);
    if roots.len() as u64 != l {
        let g = Polynomial::monomial(field, field.one(), l as usize).sub(&Polynomial::constant(field, a));
        let rest = g.div_exact(&Polynomial::from_roots(field, &roots))?;
        let degree = rest.smallest_factor_degree().unwrap_or(1);
        return Err(Error::IrreducibleFactor { degree });
    }
    let mut pts = vec![field.zero()];
    pts.extend(roots);
    Ok(pts)
}

/// A one-edge tree of index 1 rooted at a place of depth `attach_depth`:
/// the edge has slope `l` and ends at depth `p/(p-1)` with `l + 1` leaves.
/// The root carries `a dx / x^{l+1}`, the form of a compatible attach place.
pub fn make_equidistant(field: &Field, l: u64, a: FieldElement, attach_depth: &Rational, attach_radius: &Rational) -> Result<HurwitzTree> {
    let p = field.characteristic();
    let top = rational::p_over_p_minus_one(p);
    if attach_depth >= &top || attach_depth.is_negative() {
        return Err(Error::DepthTooHigh(rational::format(attach_depth)));
    }
    let points = equidistant_points(field, l, a)?;
    let thickness = (&top - attach_depth) / int(l as i64);
    let root_omega = DifferentialForm::from_poles(field, a, &[(field.zero(), l + 1)]);
    let mut b = TreeBuilder::radical(field, 1, "r", attach_depth.clone(), root_omega).root_radius(attach_radius.clone()).child(
        "r",
        field.zero(),
        "u",
        thickness,
        l,
        top,
        equidistant_form(field, l, a),
        1,
    );
    for (i, &pt) in points.iter().enumerate() {
        b = b.leaf("u", pt, &format!("b{i}"), 1, 1);
    }
    b.build()
}
