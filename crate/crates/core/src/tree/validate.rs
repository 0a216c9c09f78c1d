use num_traits::{Signed, Zero};

use super::{ChartTarget, HurwitzTree, Vertex};
use crate::differential::DifferentialForm;
use crate::ratfunc::Point;
use crate::rational::{self, int};
use crate::report::{Clause, ValidationReport};

/// Checks every tree condition and reports each violation separately.
pub fn validate(t: &HurwitzTree) -> ValidationReport {
    let mut report = ValidationReport::new();
    check_root(t, &mut report);
    for v in t.preorder() {
        check_vertex(t, v, &mut report);
        if let Some(e) = t.parent_edge(&v.id) {
            check_edge(t, &e.target, &mut report);
        }
    }
    report
}

fn check_root(t: &HurwitzTree, report: &mut ValidationReport) {
    let root = t.root();
    let id = &root.id;
    let succ = root.chart.len();
    let trunk = t.trunk();
    if succ != 1 || trunk.is_none() {
        report.push(Clause::H7, id, format!("root must have exactly one successor vertex, found {succ} successors"));
    }
    if root.monodromy != t.n() {
        report.push(Clause::H7, id, format!("root monodromy Z/p^{} differs from tree type Z/p^{}", root.monodromy, t.n()));
    }
    if let Some(e) = trunk {
        let v1 = t.vertex(&e.target).expect("known");
        if v1.monodromy != t.n() {
            report.push(Clause::H7, &v1.id, format!("successor of root has monodromy Z/p^{}, expected Z/p^{}", v1.monodromy, t.n()));
        }
    }
    match t.reduction_type() {
        Some(rt) => {
            if !root.depth.is_zero() {
                report.push(Clause::Root, id, "an étale root must have depth 0");
            }
            if root.omega.is_some() {
                report.push(Clause::Root, id, "an étale root carries no differential");
            }
            match rt.breaks() {
                Err(e) => report.push(Clause::Root, id, e.to_string()),
                Ok(breaks) => {
                    let m = *breaks.last().expect("nonempty");
                    if let Some(e) = trunk {
                        if e.slope != m {
                            report.push(
                                Clause::H4,
                                &e.target,
                                format!("trunk slope {} differs from the top break {m} of the reduction type", e.slope),
                            );
                        }
                    }
                }
            }
        }
        None => {
            if !root.depth.is_positive() {
                report.push(Clause::Root, id, "a root without reduction type must have positive depth");
            }
        }
    }
}

fn check_vertex(t: &HurwitzTree, v: &Vertex, report: &mut ValidationReport) {
    let p = t.p();
    let is_root = v.id == t.root_id();
    if !is_root && !v.depth.is_positive() {
        report.push(Clause::H1, &v.id, format!("depth {} must be positive", rational::format(&v.depth)));
    }
    check_monodromy(t, v, report);

    let leaves: Vec<_> = t.leaves_at(&v.id).collect();
    for l in &leaves {
        if l.conductor != 1 {
            report.push(Clause::MixedDepth, &l.id, format!("leaf conductor {} must be 1", l.conductor));
        }
    }
    if let Some(first) = leaves.first() {
        if leaves.iter().any(|l| l.index != first.index) {
            report.push(Clause::MixedDepth, &v.id, "leaves attached to one vertex must share their index");
        }
        let expected = rational::p_over_p_minus_one(p) + int(first.index as i64 - 1);
        if v.depth != expected {
            report.push(
                Clause::MixedDepth,
                &v.id,
                format!(
                    "vertex with index-{} leaves has depth {}, expected {}",
                    first.index,
                    rational::format(&v.depth),
                    rational::format(&expected)
                ),
            );
        }
    }

    if !v.depth.is_positive() {
        if v.omega.is_some() && !is_root {
            report.push(Clause::H2, &v.id, "differential given at depth 0");
        }
        return;
    }
    let Some(omega) = &v.omega else {
        report.push(Clause::H2, &v.id, "positive depth requires a differential");
        return;
    };
    if omega.is_zero() {
        report.push(Clause::H2, &v.id, "differential is zero");
        return;
    }

    // the root is exempt from H2; its pole order at the trunk still fixes the slope
    if is_root {
        check_chart_orders(t, v, omega, report);
        return;
    }

    // H2: constant numerator, poles exactly at the chart points
    let shape = omega.pole_shape();
    match &shape {
        None => {
            if !omega.coefficient().numerator().is_constant() {
                report.push(Clause::H2, &v.id, format!("{omega} has zeros away from infinity"));
            } else {
                report.push(Clause::H2, &v.id, format!("{omega} has poles that are not rational chart points"));
            }
            report.push(Clause::Shape, &v.id, format!("{omega} is not c dx / prod (x - a_i)^m_i"));
        }
        Some(s) => {
            for &(a, _) in &s.poles {
                if !v.chart.iter().any(|c| c.point == a) {
                    report.push(Clause::H2, &v.id, format!("pole at {} is not a chart point", t.field().render(a)));
                }
            }
            for c in &v.chart {
                if !s.poles.iter().any(|&(a, _)| a == c.point) {
                    report.push(Clause::H2, &v.id, format!("no pole at chart point {}", t.field().render(c.point)));
                }
            }
            if !is_root {
                for c in &v.chart {
                    let behind: u64 = match &c.target {
                        ChartTarget::Edge(e) => t.leaves_behind(e).iter().map(|l| l.conductor).sum(),
                        ChartTarget::Leaf(l) => t.leaf(l).map(|l| l.conductor).unwrap_or(0),
                    };
                    let m = s.poles.iter().find(|&&(a, _)| a == c.point).map_or(0, |&(_, m)| m);
                    if m != behind {
                        report.push(
                            Clause::Shape,
                            &v.id,
                            format!("pole order {m} at {} differs from the {behind} leaves behind it", t.field().render(c.point)),
                        );
                    }
                }
            }
        }
    }

    check_chart_orders(t, v, omega, report);

    // logarithmicity where the vertex's monodromy is that of its leaves
    if let Some(first) = leaves.first() {
        if v.monodromy == first.index {
            let twisted = if t.n().abs_diff(first.index) % 2 == 1 { omega.neg() } else { omega.clone() };
            if !twisted.is_logarithmic().unwrap_or(false) {
                report.push(Clause::Logarithmic, &v.id, format!("{omega} is not logarithmic"));
            }
        }
    }
}

/// H4 on the source side of child edges, H6 on leaves.
fn check_chart_orders(t: &HurwitzTree, v: &Vertex, omega: &DifferentialForm, report: &mut ValidationReport) {
    for c in &v.chart {
        let ord = omega.ord(Point::Finite(c.point)).expect("nonzero");
        match &c.target {
            ChartTarget::Edge(target) => {
                let e = t.edge(target).expect("known edge");
                if e.slope as i64 != -ord - 1 {
                    report.push(Clause::H4, target, format!("slope {} but -ord(omega(s), z_e) - 1 = {}", e.slope, -ord - 1));
                }
            }
            ChartTarget::Leaf(l) => {
                let h = t.leaf(l).map(|l| l.conductor).unwrap_or(0);
                if -ord != h as i64 {
                    report.push(Clause::H6, l, format!("pole order {} at the leaf point, conductor {h}", -ord));
                }
            }
        }
    }
}

fn check_monodromy(t: &HurwitzTree, v: &Vertex, report: &mut ValidationReport) {
    let p = t.p() as u64;
    let mut index_sum = 0u64;
    let mut successors = 0usize;
    for e in t.child_edges(&v.id) {
        let w = t.vertex(&e.target).expect("known");
        successors += 1;
        if w.monodromy > v.monodromy {
            report.push(Clause::H7, &w.id, format!("monodromy Z/p^{} exceeds Z/p^{} of its parent", w.monodromy, v.monodromy));
        } else {
            index_sum += p.pow(v.monodromy - w.monodromy);
        }
    }
    for l in t.leaves_at(&v.id) {
        successors += 1;
        if l.index == 0 || l.index > v.monodromy {
            report.push(Clause::H7, &l.id, format!("leaf index {} must lie in 1..={}", l.index, v.monodromy));
        } else {
            index_sum += p.pow(v.monodromy - l.index);
        }
    }
    if v.id == t.root_id() {
        return;
    }
    if successors == 0 {
        report.push(Clause::H7, &v.id, "vertex has no successors");
    } else if index_sum <= 1 {
        report.push(Clause::H7, &v.id, "sum of successor indices [G(v):G(v')] must exceed 1");
    }
    let max_leaf = t.leaves.iter().filter(|l| t.is_ancestor(&v.id, &l.vertex)).map(|l| l.index).max();
    if max_leaf.is_some_and(|m| m != v.monodromy) {
        report.push(
            Clause::H7,
            &v.id,
            format!("monodromy Z/p^{} differs from the largest leaf index Z/p^{} behind it", v.monodromy, max_leaf.unwrap_or(0)),
        );
    }
}

fn check_edge(t: &HurwitzTree, id: &str, report: &mut ValidationReport) {
    let e = t.edge(id).expect("known edge");
    let s = t.vertex(&e.source).expect("known");
    let v = t.vertex(&e.target).expect("known");
    if !e.thickness.is_positive() {
        report.push(Clause::H5, id, "thickness must be positive");
    }
    if e.slope == 0 {
        report.push(Clause::H4, id, "slope must be a positive integer");
    }
    let reached = &s.depth + &e.thickness * int(e.slope as i64);
    if reached != v.depth {
        report.push(
            Clause::H5,
            id,
            format!(
                "depth {} + {} * {} = {} but target depth is {}",
                rational::format(&s.depth),
                rational::format(&e.thickness),
                e.slope,
                rational::format(&reached),
                rational::format(&v.depth)
            ),
        );
    }
    if let Some(omega) = v.omega.as_ref().filter(|w| !w.is_zero()) {
        let target_side = omega.ord(Point::Infinity).expect("nonzero") + 1;
        if e.slope as i64 != target_side {
            report.push(Clause::H4, id, format!("slope {} but ord(omega(t), inf) + 1 = {target_side}", e.slope));
        }
        if let Some(so) = s.omega.as_ref().filter(|w| !w.is_zero() && s.id != t.root_id()) {
            let z = t.edge_point(id).expect("charted");
            let source_side = -so.ord(Point::Finite(z)).expect("nonzero") - 1;
            if source_side != target_side {
                report.push(Clause::H3, id, format!("source side gives {source_side}, target side gives {target_side}"));
            }
        }
    }
    let behind: u64 = t.leaves_behind(id).iter().map(|l| l.conductor).sum();
    if e.slope + 1 != behind {
        report.push(Clause::SlopeConductor, id, format!("slope {} but {behind} leaves behind", e.slope));
    }
}
