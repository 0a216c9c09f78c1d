use num_traits::Signed;

use super::HurwitzTree;
use crate::report::{Clause, ValidationReport};

/// Checks that constant coefficients agree across every edge, and at an
/// étale root where the top reduction-type degree requires it.
pub fn check_compatibility(t: &HurwitzTree) -> ValidationReport {
    let mut report = ValidationReport::new();
    let f = t.field();
    for v in t.preorder() {
        let Some(e) = t.parent_edge(&v.id) else { continue };
        let s = t.vertex(&e.source).expect("known");
        if !s.depth.is_positive() {
            continue;
        }
        match (t.constant_coefficient(&e.target), t.e_part_coefficient(&e.target)) {
            (Ok(ct), Ok(ce)) if ct != ce => report.push(
                Clause::Compatibility,
                &e.target,
                format!(
                    "constant coefficient {} at {} differs from e-part coefficient {} at {}",
                    f.render(ct),
                    e.target,
                    f.render(ce),
                    e.source
                ),
            ),
            (Err(err), _) | (_, Err(err)) => report.push(Clause::Compatibility, &e.target, err.to_string()),
            _ => {}
        }
    }
    if let (Some(rt), Some(trunk)) = (t.reduction_type(), t.trunk()) {
        let p = t.p() as u64;
        let l = rt.entries().last().and_then(|g| g.degree().finite()).unwrap_or(0) as u64;
        let prev = if rt.len() == 1 {
            Ok(1)
        } else {
            rt.truncate(rt.len() - 1).and_then(|lo| lo.conductors()).map(|c| c.last().expect("nonempty").conductor)
        };
        match prev {
            Err(err) => report.push(Clause::Compatibility, t.root_id(), err.to_string()),
            Ok(iota) if l + p >= p * iota => match (rt.root_constant_coefficient(), t.constant_coefficient(&trunk.target)) {
                (Ok(cr), Ok(c1)) if cr != c1 => report.push(
                    Clause::Compatibility,
                    t.root_id(),
                    format!("root constant coefficient {} differs from {} at {}", f.render(cr), f.render(c1), trunk.target),
                ),
                (Err(err), _) | (_, Err(err)) => report.push(Clause::Compatibility, t.root_id(), err.to_string()),
                _ => {}
            },
            Ok(_) => {}
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::TreeBuilder;
    use super::*;
    use crate::field::{Field, FieldSpec};
    use crate::rational::{int, ratio};

    #[test]
    fn minimal_z2_is_compatible() {
        assert!(check_compatibility(&minimal_z2()).is_valid());
    }

    #[test]
    fn mismatched_chain_is_incompatible() {
        let f = Field::new(FieldSpec::new(2, vec![1, 1, 1])).unwrap();
        let g = f.t();
        let one = f.one();
        let w1 = crate::differential::DifferentialForm::from_poles(&f, one, &[(f.zero(), 2), (one, 1)]);
        let w2 = crate::differential::DifferentialForm::from_poles(&f, g, &[(f.zero(), 1), (one, 1)]);
        let t = TreeBuilder::radical(&f, 1, "v0", ratio(1, 2), form(&f, 1, &[(0, 3)]))
            .child("v0", f.zero(), "v1", ratio(1, 4), 2, int(1), w1, 1)
            .child("v1", f.zero(), "v2", int(1), 1, int(2), w2, 1)
            .leaf("v1", one, "b0", 1, 1)
            .leaf("v2", f.zero(), "b1", 1, 1)
            .leaf("v2", one, "b2", 1, 1)
            .build()
            .unwrap();
        let r = check_compatibility(&t);
        assert_eq!(r.clauses(), vec![Clause::Compatibility]);
        assert_eq!(r.violations[0].location, "v2");
    }
}
