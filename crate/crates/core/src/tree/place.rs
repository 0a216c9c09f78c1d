use num_traits::Signed;

use super::{ChartTarget, HurwitzTree};
use crate::differential::DifferentialForm;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::ratfunc::RationalFunction;
use crate::rational::{self, int, Rational};

/// A point on an edge given by its radius coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPlace {
    /// Edge, named by its target vertex.
    pub edge: String,
    pub r: Rational,
}

impl RationalPlace {
    pub fn new(edge: impl Into<String>, r: Rational) -> Self {
        RationalPlace { edge: edge.into(), r }
    }
}

impl HurwitzTree {
    /// Radius interval `[s(e), t(e)]` of an edge.
    pub fn edge_interval(&self, edge: &str) -> Result<(Rational, Rational)> {
        let e = self.edge(edge)?;
        let s = self.radius(&e.source)?;
        let t = &s + &e.thickness;
        Ok((s, t))
    }

    fn check_place(&self, place: &RationalPlace) -> Result<()> {
        let (s, t) = self.edge_interval(&place.edge)?;
        if place.r < s || place.r > t {
            return Err(Error::PlaceOutsideEdge { edge: place.edge.clone(), r: rational::format(&place.r) });
        }
        Ok(())
    }

    /// `delta(s(e)) + d(e) (r - s(e))`.
    pub fn depth_at_place(&self, place: &RationalPlace) -> Result<Rational> {
        self.check_place(place)?;
        let e = self.edge(&place.edge)?;
        let (s, _) = self.edge_interval(&place.edge)?;
        Ok(&self.vertex(&e.source)?.depth + int(e.slope as i64) * (&place.r - s))
    }

    /// `c dx / x^{d(e)+1}` with `c` the constant coefficient at `t(e)`.
    pub fn differential_at_place(&self, place: &RationalPlace) -> Result<DifferentialForm> {
        self.check_place(place)?;
        let e = self.edge(&place.edge)?;
        let c = self.constant_coefficient(&e.target)?;
        Ok(DifferentialForm::from_poles(self.field(), c, &[(FieldElement::ZERO, e.slope + 1)]))
    }

    /// The scalar `c_v` in `omega(v) = c_v dx / prod (x - a_i)^{h_i}`.
    pub fn constant_coefficient(&self, vertex: &str) -> Result<FieldElement> {
        let v = self.vertex(vertex)?;
        let omega = v
            .omega
            .as_ref()
            .filter(|_| v.depth.is_positive())
            .ok_or_else(|| Error::ShapeViolation(format!("vertex {vertex} has no differential")))?;
        let shape = omega.pole_shape().ok_or_else(|| Error::ShapeViolation(omega.render()))?;
        Ok(shape.constant)
    }

    /// The part of `omega(s(e))` with poles at the chart point of `e`.
    pub fn e_part(&self, edge: &str) -> Result<DifferentialForm> {
        let e = self.edge(edge)?;
        self.point_part(&e.source, &ChartTarget::Edge(edge.into()))
    }

    /// Leading coefficient of the `e`-part at `s(e)`.
    pub fn e_part_coefficient(&self, edge: &str) -> Result<FieldElement> {
        let e = self.edge(edge)?;
        self.part_coefficient(&e.source, &ChartTarget::Edge(edge.into()))
    }

    /// Leading coefficient of the part of `omega(vertex)` at a successor's chart point.
    pub fn part_coefficient(&self, vertex: &str, target: &ChartTarget) -> Result<FieldElement> {
        let a = self.chart_point(vertex, target)?;
        let pf = self.point_part(vertex, target)?.coefficient().partial_fractions()?;
        let top = pf
            .terms
            .iter()
            .filter(|t| t.pole == a)
            .max_by_key(|t| t.order)
            .ok_or_else(|| Error::ShapeViolation(format!("no pole at the chart point of {target:?}")))?;
        Ok(top.coefficient)
    }

    fn point_part(&self, vertex: &str, target: &ChartTarget) -> Result<DifferentialForm> {
        let v = self.vertex(vertex)?;
        let a = self.chart_point(vertex, target)?;
        let omega = v
            .omega
            .as_ref()
            .filter(|_| v.depth.is_positive())
            .ok_or_else(|| Error::ShapeViolation(format!("vertex {vertex} has no differential")))?;
        if vertex != self.root_id() && omega.pole_shape().is_none() {
            return Err(Error::ShapeViolation(omega.render()));
        }
        let pf = omega.coefficient().partial_fractions()?;
        let field = self.field();
        let f = pf
            .terms
            .iter()
            .filter(|t| t.pole == a)
            .fold(RationalFunction::zero(field), |acc, t| acc.add(&RationalFunction::pole_term(field, t.coefficient, t.pole, t.order)));
        Ok(DifferentialForm::new(f))
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::TreeBuilder;
    use super::*;
    use crate::field::Field;
    use crate::rational::ratio;

    #[test]
    fn leaf_coefficients() {
        let t = minimal_z2();
        let one = t.field().one();
        for l in ["b1", "b2"] {
            assert_eq!(t.part_coefficient("v1", &ChartTarget::Leaf(l.into())), Ok(one));
        }
    }

    #[test]
    fn depth_interpolates() {
        let t = minimal_z2();
        assert_eq!(t.depth_at_place(&RationalPlace::new("v1", int(1))), Ok(int(1)));
        assert_eq!(t.depth_at_place(&RationalPlace::new("v1", int(0))), Ok(int(0)));
        assert_eq!(t.depth_at_place(&RationalPlace::new("v1", int(2))), Ok(int(2)));
        assert!(matches!(t.depth_at_place(&RationalPlace::new("v1", ratio(5, 2))), Err(Error::PlaceOutsideEdge { .. })));
    }

    #[test]
    fn differential_on_trunk() {
        let t = minimal_z2();
        let f = t.field().clone();
        let w = t.differential_at_place(&RationalPlace::new("v1", int(1))).unwrap();
        assert_eq!(w, form(&f, 1, &[(0, 2)]));
    }

    #[test]
    fn e_part_coefficients() {
        let f = Field::prime(2).unwrap();
        // v1 carries dx/(x^2(x+1)^2) with two child edges
        let t = TreeBuilder::radical(&f, 1, "v0", ratio(1, 4), form(&f, 1, &[(0, 4)]))
            .child("v0", f.zero(), "v1", ratio(1, 12), 3, ratio(1, 2), form(&f, 1, &[(0, 2), (1, 2)]), 1)
            .child("v1", f.zero(), "v2", ratio(3, 2), 1, int(2), form(&f, 1, &[(0, 1), (1, 1)]), 1)
            .child("v1", f.one(), "v3", ratio(3, 2), 1, int(2), form(&f, 1, &[(0, 1), (1, 1)]), 1)
            .build()
            .unwrap();
        assert_eq!(t.e_part_coefficient("v2"), Ok(f.one()));
        // 1/(x^2(x+1)^2) = (1/x + 1/(x+1))^2 = 1/x^2 + 1/(x+1)^2 in characteristic 2
        assert_eq!(t.e_part("v2").unwrap(), form(&f, 1, &[(0, 2)]));
        assert_eq!(t.constant_coefficient("v1"), Ok(f.one()));
        let f3 = Field::prime(3).unwrap();
        let star = TreeBuilder::radical(&f3, 1, "v0", ratio(1, 2), form(&f3, 2, &[(0, 5)])).build().unwrap();
        assert_eq!(star.constant_coefficient("v0"), Ok(f3.from_int(2)));
    }
}
