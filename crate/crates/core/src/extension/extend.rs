//! Constructive extension of a `Z/p^{n-1}` tree to a `Z/p^n` tree.

use std::collections::BTreeSet;

use super::cartier_problem::{solve_cartier_with, CartierSearch, CartierVariant};
use super::check::{check_extension, Location, PlaceImage, VertexMap};
use super::partition::partition_trunk;
use crate::differential::DifferentialForm;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Polynomial;
use crate::ratfunc::RationalFunction;
use crate::rational::{self, int, ratio, Rational};
use crate::report::ValidationReport;
use crate::tree::{
    check_compatibility, equidistant_form, equidistant_points, validate, ChartEntry, ChartTarget, Edge, HurwitzTree, Leaf, RationalPlace,
    TreeParts, Vertex,
};
use crate::witt::ReductionType;

/// Conductor growth of the extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionMode {
    /// `C_n = p C_{n-1} - p + 1`.
    Minimal,
    /// `C_n = p C_{n-1} - p + l + 1` with `l` prime to `p`.
    General(u64),
}

impl ExtensionMode {
    fn excess(self) -> u64 {
        match self {
            ExtensionMode::Minimal => 0,
            ExtensionMode::General(l) => l,
        }
    }

    fn from_excess(l: u64) -> Self {
        if l == 0 {
            ExtensionMode::Minimal
        } else {
            ExtensionMode::General(l)
        }
    }
}

/// What the new root must carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootGoal {
    /// Étale root with this length-`n` reduction type.
    Etale(ReductionType),
    /// Radical root at `p` times the old depth. In general mode `leading`
    /// is the coefficient of the new top pole (default 1).
    Radical { leading: Option<FieldElement> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionTarget {
    pub mode: ExtensionMode,
    pub root: RootGoal,
}

impl ExtensionTarget {
    pub fn minimal() -> Self {
        ExtensionTarget { mode: ExtensionMode::Minimal, root: RootGoal::Radical { leading: None } }
    }

    pub fn general(l: u64, leading: Option<FieldElement>) -> Self {
        ExtensionTarget { mode: ExtensionMode::General(l), root: RootGoal::Radical { leading } }
    }

    /// Étale target; the mode is read off the breaks.
    pub fn etale(rt: ReductionType) -> Result<Self> {
        let breaks = rt.breaks().map_err(|e| Error::TargetInfeasible(e.to_string()))?;
        if breaks.len() < 2 {
            return Err(Error::TargetInfeasible("an étale target needs at least two levels".into()));
        }
        let p = rt.field().characteristic() as u64;
        let (hi, lo) = (breaks[breaks.len() - 1], breaks[breaks.len() - 2]);
        Ok(ExtensionTarget { mode: ExtensionMode::from_excess(hi - p * lo), root: RootGoal::Etale(rt) })
    }

    /// New-leaf budget `C_n - C_{n-1}` for a tree of conductor `c_prev`.
    pub fn new_leaves(&self, p: u32, c_prev: u64) -> u64 {
        let p = p as u64;
        p * c_prev - p + 1 + self.mode.excess() - c_prev
    }
}

/// An extended tree together with the map from the old tree into it.
#[derive(Debug, Clone)]
pub struct Extension {
    pub tree: HurwitzTree,
    pub map: VertexMap,
}

/// Builds a tree extending `prev` with the requested conductor and root.
pub fn extend_tree(prev: &HurwitzTree, target: &ExtensionTarget) -> Result<Extension> {
    let field = prev.field().clone();
    let p = field.characteristic();
    let cut = ratio(1, p as i64 - 1);

    let report = validate(prev);
    if !report.is_valid() {
        return Err(Error::PreconditionViolated(format!("input tree is invalid: {}", first_line(&report))));
    }
    let report = check_compatibility(prev);
    if !report.is_valid() {
        return Err(Error::PreconditionViolated(format!("input tree is incompatible: {}", first_line(&report))));
    }
    if let Some(v) = prev.vertices().iter().find(|v| v.depth == cut) {
        return Err(Error::PreconditionViolated(format!("vertex {} has depth 1/(p-1)", v.id)));
    }
    let root = prev.root();
    if root.depth > cut {
        return Err(Error::TargetInfeasible(format!(
            "root depth {} exceeds 1/(p-1), so p times it exceeds p/(p-1)",
            rational::format(&root.depth)
        )));
    }
    let trunk = prev.trunk().ok_or_else(|| Error::Malformed("tree has no trunk".into()))?.clone();
    let l = target.mode.excess();
    if l.is_multiple_of(p as u64) && l != 0 {
        return Err(Error::TargetInfeasible(format!("l = {l} is divisible by p")));
    }
    let c_prev = trunk.slope + 1;
    let m_new = p as u64 * c_prev - p as u64 + 1 + l;

    let mut b = Builder::new(prev);
    let (reduction_type, root_omega, kappa) = match (&target.root, prev.reduction_type()) {
        (RootGoal::Etale(rt), Some(rt_prev)) => {
            if !rt_prev.is_prefix_of(rt) {
                return Err(Error::TargetInfeasible(format!("{} does not extend {}", rt.render(), rt_prev.render())));
            }
            let derived = ExtensionTarget::etale(rt.clone())?;
            if derived.mode != target.mode {
                return Err(Error::TargetInfeasible(format!("reduction type gives {:?}, target asks {:?}", derived.mode, target.mode)));
            }
            let kappa = if l == 0 {
                field.pow(prev.constant_coefficient(&trunk.target)?, p as u64)
            } else {
                rt.root_constant_coefficient().map_err(|e| Error::TargetInfeasible(e.to_string()))?
            };
            (Some(rt.clone()), None, kappa)
        }
        (RootGoal::Radical { leading }, None) => {
            let z0 = prev.edge_point(&trunk.target)?;
            let old = root.omega.as_ref().expect("radical root has a form");
            let mut w = frobenius_lift(old, z0);
            if l > 0 {
                let e = leading.unwrap_or_else(|| field.one());
                if e.is_zero() {
                    return Err(Error::TargetInfeasible("leading coefficient must be nonzero".into()));
                }
                w = w.add(&DifferentialForm::from_poles(&field, e, &[(z0, m_new)]));
            }
            let kappa = leading_at(&w, z0)?;
            (None, Some(w), kappa)
        }
        _ => return Err(Error::TargetInfeasible("root goal does not match the root of the input tree".into())),
    };
    let root_depth = int(p as i64) * &root.depth;
    b.push_vertex(Vertex { id: root.id.clone(), depth: root_depth, omega: root_omega, monodromy: root.monodromy + 1, chart: vec![] });
    b.map.vertices.insert(root.id.clone(), root.id.clone());
    let z0 = prev.edge_point(&trunk.target)?;
    b.extend_edge(&trunk, &root.id, z0, l, kappa)?;

    let tree = HurwitzTree::from_parts(TreeParts {
        field,
        n: prev.n() + 1,
        root: root.id.clone(),
        reduction_type,
        root_radius: prev.root_radius().clone(),
        vertices: b.vertices,
        edges: b.edges,
        leaves: b.leaves,
    })?;
    let map = b.map;

    // the general base case is a heuristic; never hand back an unchecked tree
    let mut report = validate(&tree);
    report.extend(check_compatibility(&tree));
    report.extend(check_extension(prev, &tree, &map));
    if !report.is_valid() {
        return Err(Error::SearchFailed { stage: "verification".into(), detail: first_line(&report) });
    }
    Ok(Extension { tree, map })
}

fn first_line(r: &ValidationReport) -> String {
    r.to_string().lines().next().unwrap_or_default().to_string()
}

/// `f^p (x - z)^{p-1} dx` for `w = f dx`; its Cartier image is `w`.
pub fn frobenius_lift(w: &DifferentialForm, z: FieldElement) -> DifferentialForm {
    let field = w.field();
    let p = field.characteristic() as u64;
    let f = w.coefficient().powi(p as i64).expect("nonzero power");
    let shift = RationalFunction::from_poly(Polynomial::linear(field, z).pow(p - 1));
    DifferentialForm::new(f.mul(&shift))
}

/// Coefficient of the top pole of `w` at `a`.
fn leading_at(w: &DifferentialForm, a: FieldElement) -> Result<FieldElement> {
    let pf = w.coefficient().partial_fractions()?;
    pf.terms
        .iter()
        .filter(|t| t.pole == a)
        .max_by_key(|t| t.order)
        .map(|t| t.coefficient)
        .ok_or_else(|| Error::ShapeViolation(format!("{w} has no pole at {}", w.field().render(a))))
}

struct Builder<'a> {
    prev: &'a HurwitzTree,
    field: Field,
    p: u64,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    leaves: Vec<Leaf>,
    map: VertexMap,
    taken: BTreeSet<String>,
}

impl<'a> Builder<'a> {
    fn new(prev: &'a HurwitzTree) -> Self {
        let mut taken = BTreeSet::new();
        taken.extend(prev.vertices().iter().map(|v| v.id.clone()));
        taken.extend(prev.leaves().iter().map(|l| l.id.clone()));
        Builder {
            prev,
            field: prev.field().clone(),
            p: prev.p() as u64,
            vertices: Vec::new(),
            edges: Vec::new(),
            leaves: Vec::new(),
            map: VertexMap::default(),
            taken,
        }
    }

    fn fresh(&mut self, base: &str) -> String {
        let mut id = base.to_string();
        let mut k = 2;
        while self.taken.contains(&id) {
            id = format!("{base}{k}");
            k += 1;
        }
        self.taken.insert(id.clone());
        id
    }

    fn push_vertex(&mut self, v: Vertex) {
        self.vertices.push(v);
    }

    fn attach(&mut self, parent: &str, target: ChartTarget, point: FieldElement) {
        let v = self.vertices.iter_mut().find(|v| v.id == parent).expect("parent pushed first");
        v.chart.push(ChartEntry { target, point });
    }

    #[allow(clippy::too_many_arguments)]
    fn push_child(&mut self, parent: &str, point: FieldElement, v: Vertex, thickness: Rational, slope: u64) {
        self.attach(parent, ChartTarget::Edge(v.id.clone()), point);
        self.edges.push(Edge { source: parent.into(), target: v.id.clone(), thickness, slope });
        self.vertices.push(v);
    }

    fn push_leaf(&mut self, vertex: &str, point: FieldElement, id: String, conductor: u64, index: u32) {
        self.attach(vertex, ChartTarget::Leaf(id.clone()), point);
        self.leaves.push(Leaf { id, conductor, index, vertex: vertex.into() });
    }

    /// Rebuilds old edge `e` (and everything behind it) below new vertex
    /// `parent`, reached at chart point `point`. The part of the parent's
    /// new form at `point` has top coefficient `kappa` and pole order
    /// `p C - p + 1 + l` with `C` the old pole order.
    fn extend_edge(&mut self, e: &Edge, parent: &str, point: FieldElement, l: u64, kappa: FieldElement) -> Result<()> {
        let prev = self.prev;
        let p = self.p;
        let cut = ratio(1, p as i64 - 1);
        let s = prev.vertex(&e.source)?;
        let t = prev.vertex(&e.target)?;
        let big_l = e.slope + 1;
        let m_new = p * big_l - p + 1 + l;
        let pr = int(p as i64);
        let r_s = prev.radius(&s.id)?;

        if t.depth < cut {
            return self.induction_step(e, parent, point, l, kappa);
        }

        // the edge crosses depth 1/(p-1) at r_cut
        let d = e.slope;
        let r_cut = &r_s + (&cut - &s.depth) / int(d as i64);
        let r_t = prev.radius(&t.id)?;
        let c = prev.constant_coefficient(&t.id)?;
        let top = rational::p_over_p_minus_one(p as u32);
        let cut_place = RationalPlace::new(t.id.clone(), r_cut.clone());

        if l == 0 {
            let (w, pts) = self.solve_cut(c, big_l, m_new - 1)?;
            if leading_at(&w, FieldElement::ZERO).ok() != Some(self.field.neg(c)) {
                return Err(Error::SearchFailed { stage: "cut vertex".into(), detail: "solution has the wrong top coefficient".into() });
            }
            let wc = w.pole_shape().expect("split solution").constant;
            if wc != kappa {
                return Err(Error::PreconditionViolated(format!("incoming coefficient does not match at {}", t.id)));
            }
            let w_id = self.fresh(&format!("{}_cut", t.id));
            let v = Vertex { id: w_id.clone(), depth: top.clone(), omega: Some(w), monodromy: t.monodromy + 1, chart: vec![] };
            self.push_child(parent, point, v, &r_cut - &r_s, m_new - 1);
            self.map.places.push(PlaceImage { place: cut_place, image: Location::Vertex(w_id.clone()) });
            self.copy_above(&t.id, &w_id, FieldElement::ZERO, &r_t - &r_cut)?;
            for (i, z) in pts.into_iter().enumerate() {
                let id = self.fresh(&format!("{w_id}_b{}", i + 1));
                self.push_leaf(&w_id, z, id, 1, 1);
            }
            return Ok(());
        }

        let lp = l % p;
        let a_ord = p * big_l - 2 * p + lp + 1;
        let n_star = a_ord - big_l;
        let lambda = &r_cut - &r_s;
        let (eps1, eps2) = partition_trunk(big_l, p as u32, l, lp, &lambda)?;
        let v_depth = &pr * &s.depth + int(m_new as i64 - 1) * &eps1;
        let v_id = self.fresh(&format!("{}_ins", t.id));
        let ins_place = RationalPlace::new(t.id.clone(), &r_s + &eps1);

        if n_star == 0 {
            // no vertex at the cut: the last segment keeps the old slope
            let c_next = self.field.neg(c);
            self.insertion(parent, point, &v_id, &v_depth, t.monodromy + 1, kappa, a_ord, m_new, c_next, eps1)?;
            self.map.places.push(PlaceImage { place: ins_place, image: Location::Vertex(v_id.clone()) });
            self.map.places.push(PlaceImage { place: cut_place, image: Location::Place(RationalPlace::new(t.id.clone(), r_cut.clone())) });
            self.copy_above(&t.id, &v_id, FieldElement::ZERO, &eps2 + (&r_t - &r_cut))?;
            return Ok(());
        }

        let (w, pts) = self.solve_cut(c, big_l, a_ord - 1)?;
        let c_next = w.pole_shape().expect("split solution").constant;
        self.insertion(parent, point, &v_id, &v_depth, t.monodromy + 1, kappa, a_ord, m_new, c_next, eps1)?;
        self.map.places.push(PlaceImage { place: ins_place, image: Location::Vertex(v_id.clone()) });
        let w_id = self.fresh(&format!("{}_cut", t.id));
        let wv = Vertex { id: w_id.clone(), depth: top, omega: Some(w), monodromy: t.monodromy + 1, chart: vec![] };
        self.push_child(&v_id, FieldElement::ZERO, wv, eps2, a_ord - 1);
        self.map.places.push(PlaceImage { place: cut_place, image: Location::Vertex(w_id.clone()) });
        self.copy_above(&t.id, &w_id, FieldElement::ZERO, &r_t - &r_cut)?;
        for (i, z) in pts.into_iter().enumerate() {
            let id = self.fresh(&format!("{w_id}_b{}", i + 1));
            self.push_leaf(&w_id, z, id, 1, 1);
        }
        Ok(())
    }

    /// `w` with `C(w) = w + c dx/x^L`, poles at 0 and at new simple points,
    /// and order `m - 1` at infinity.
    fn solve_cut(&self, c: FieldElement, big_l: u64, m: u64) -> Result<(DifferentialForm, Vec<FieldElement>)> {
        let field = &self.field;
        let prev = DifferentialForm::from_poles(field, c, &[(FieldElement::ZERO, big_l)]);
        let search = CartierSearch::split(CartierVariant::FixedPlus);
        let w = solve_cartier_with(&prev, m, &search)?.ok_or_else(|| Error::SearchFailed {
            stage: "solve_cartier".into(),
            detail: format!(
                "no split solution of C(w) = w + {} with ord_inf(w) = {} over F_{}; a larger field may help",
                prev.render(),
                m - 1,
                field.size()
            ),
        })?;
        let q = w.coefficient().denominator().div_exact(&Polynomial::monomial(field, field.one(), big_l as usize))?;
        Ok((w, q.roots()))
    }

    /// Inserts vertex `v_id` below `parent` carrying `kappa dx / (x^A (x - a)^k)`
    /// with an equidistant branch of `k` leaves at `a`. The next vertex on
    /// the path (at chart point 0) must have constant coefficient `c_next`.
    #[allow(clippy::too_many_arguments)]
    fn insertion(
        &mut self,
        parent: &str,
        point: FieldElement,
        v_id: &str,
        depth: &Rational,
        monodromy: u32,
        kappa: FieldElement,
        a_ord: u64,
        m_new: u64,
        c_next: FieldElement,
        eps1: Rational,
    ) -> Result<()> {
        let field = self.field.clone();
        let k = m_new - a_ord;
        let top = rational::p_over_p_minus_one(self.p as u32);
        // (-a)^k = kappa / c_next; try each root until the branch splits
        let rhs = field.div(kappa, c_next)?;
        let mut cands: Vec<FieldElement> = field.lth_roots(rhs, k).into_iter().map(|b| field.neg(b)).collect();
        cands.sort();
        let mut chosen = None;
        let mut last_err = Error::NoRootInField { required_exponent: k };
        for a in cands {
            let gamma = field.div(kappa, field.pow(a, a_ord))?;
            match equidistant_points(&field, k - 1, gamma) {
                Ok(pts) => {
                    chosen = Some((a, gamma, pts));
                    break;
                }
                Err(err) => last_err = err,
            }
        }
        let (a, gamma, pts) =
            chosen.ok_or_else(|| Error::SearchFailed { stage: "equidistant insertion".into(), detail: last_err.to_string() })?;
        let omega = DifferentialForm::from_poles(&field, kappa, &[(FieldElement::ZERO, a_ord), (a, k)]);
        let v = Vertex { id: v_id.into(), depth: depth.clone(), omega: Some(omega), monodromy, chart: vec![] };
        self.push_child(parent, point, v, eps1, m_new - 1);
        let u_id = self.fresh(&format!("{v_id}_eq"));
        let u = Vertex {
            id: u_id.clone(),
            depth: top.clone(),
            omega: Some(equidistant_form(&field, k - 1, gamma)),
            monodromy: 1,
            chart: vec![],
        };
        self.push_child(v_id, a, u, (&top - depth) / int(k as i64 - 1), k - 1);
        for (i, z) in pts.into_iter().enumerate() {
            let id = self.fresh(&format!("{u_id}_b{}", i + 1));
            self.push_leaf(&u_id, z, id, 1, 1);
        }
        Ok(())
    }

    /// Old target strictly below the cut: scale its depth by `p` and recurse.
    fn induction_step(&mut self, e: &Edge, parent: &str, point: FieldElement, l: u64, kappa: FieldElement) -> Result<()> {
        let prev = self.prev;
        let field = self.field.clone();
        let p = self.p;
        let pr = int(p as i64);
        let s = prev.vertex(&e.source)?;
        let t = prev.vertex(&e.target)?;
        let big_l = e.slope + 1;
        let m_new = p * big_l - p + 1 + l;
        let old = t.omega.as_ref().expect("positive depth");
        let shape = old.pole_shape().ok_or_else(|| Error::ShapeViolation(old.render()))?;
        let mut children: Vec<&ChartEntry> = t.chart.iter().collect();
        children.sort_by_key(|c| c.point);
        if children.len() < 2 || children.iter().any(|c| matches!(c.target, ChartTarget::Leaf(_))) {
            return Err(Error::PreconditionViolated(format!("vertex {} below depth 1/(p-1) needs two child edges", t.id)));
        }
        let (a1, a2) = (children[0].point, children[1].point);
        let cp = field.pow(shape.constant, p);
        let lp = l % p;
        let (constant, poles): (FieldElement, Vec<(FieldElement, u64)>) = if l == 0 {
            let poles = shape.poles.iter().map(|&(a, h)| (a, if a == a1 { p * h - p + 1 } else { p * h })).collect();
            (cp, poles)
        } else {
            let norm = field.pow(field.sub(a1, a2), p - lp);
            let poles = shape
                .poles
                .iter()
                .map(|&(a, h)| {
                    let m = if a == a1 {
                        p * h - p + 1
                    } else if a == a2 {
                        p * h - p + lp
                    } else {
                        p * h
                    };
                    (a, m)
                })
                .collect();
            (field.div(cp, norm)?, poles)
        };
        let omega = DifferentialForm::from_poles(&field, constant, &poles);
        let new_t =
            Vertex { id: t.id.clone(), depth: &pr * &t.depth, omega: Some(omega.clone()), monodromy: t.monodromy + 1, chart: vec![] };
        self.map.vertices.insert(t.id.clone(), t.id.clone());

        if l == 0 {
            if constant != kappa {
                return Err(Error::PreconditionViolated(format!("incoming coefficient does not match at {}", t.id)));
            }
            self.push_child(parent, point, new_t, e.thickness.clone(), m_new - 1);
        } else {
            let a_ord = p * big_l - 2 * p + lp + 1;
            let (eps1, eps2) = partition_trunk(big_l, p as u32, l, lp, &e.thickness)?;
            let v_depth = &pr * &s.depth + int(m_new as i64 - 1) * &eps1;
            let v_id = self.fresh(&format!("{}_ins", t.id));
            self.insertion(parent, point, &v_id, &v_depth, t.monodromy + 1, kappa, a_ord, m_new, constant, eps1.clone())?;
            let place = RationalPlace::new(t.id.clone(), prev.radius(&s.id)? + &eps1);
            self.map.places.push(PlaceImage { place, image: Location::Vertex(v_id.clone()) });
            self.push_child(&v_id, FieldElement::ZERO, new_t, eps2, a_ord - 1);
        }

        for c in children {
            let ChartTarget::Edge(target) = &c.target else { unreachable!() };
            let child_edge = prev.edge(target)?.clone();
            let sub_l = if c.point == a1 {
                0
            } else if c.point == a2 && l > 0 {
                lp - 1
            } else {
                p - 1
            };
            let k = leading_at(&omega, c.point)?;
            self.extend_edge(&child_edge, &t.id, c.point, sub_l, k)?;
        }
        Ok(())
    }

    /// Copies the old subtree at `id` above the cut: depth + 1, form negated,
    /// monodromy and leaf indices raised by one.
    fn copy_above(&mut self, id: &str, parent: &str, point: FieldElement, thickness: Rational) -> Result<()> {
        let prev = self.prev;
        let v = prev.vertex(id)?;
        let e = prev.edge(id)?;
        let copy = Vertex {
            id: v.id.clone(),
            depth: &v.depth + int(1),
            omega: v.omega.as_ref().map(|w| w.neg()),
            monodromy: v.monodromy + 1,
            chart: vec![],
        };
        self.map.vertices.insert(v.id.clone(), v.id.clone());
        self.push_child(parent, point, copy, thickness, e.slope);
        for c in &v.chart {
            match &c.target {
                ChartTarget::Edge(t) => {
                    let th = prev.edge(t)?.thickness.clone();
                    self.copy_above(t, id, c.point, th)?;
                }
                ChartTarget::Leaf(l) => {
                    let leaf = prev.leaf(l)?;
                    self.map.leaves.insert(l.clone(), l.clone());
                    self.push_leaf(id, c.point, l.clone(), leaf.conductor, leaf.index + 1);
                }
            }
        }
        Ok(())
    }
}
