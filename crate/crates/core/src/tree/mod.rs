//! Hurwitz trees: data model, validation, places, compatibility, subtrees.

mod compat;
mod equidistant;
mod place;
mod subtree;
mod validate;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::differential::DifferentialForm;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::rational::Rational;
use crate::witt::ReductionType;

pub use compat::check_compatibility;
pub use equidistant::{equidistant_form, equidistant_points, make_equidistant};
pub use place::RationalPlace;
pub use validate::validate;

/// What a chart point of a vertex points at.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChartTarget {
    /// The child edge, named by its target vertex.
    Edge(String),
    Leaf(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartEntry {
    pub target: ChartTarget,
    pub point: FieldElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub depth: Rational,
    pub omega: Option<DifferentialForm>,
    /// Exponent `i` of the monodromy group `Z/p^i`.
    pub monodromy: u32,
    pub chart: Vec<ChartEntry>,
}

/// An edge, identified by its target vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: String,
    pub target: String,
    pub thickness: Rational,
    pub slope: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    pub id: String,
    pub conductor: u64,
    pub index: u32,
    pub vertex: String,
}

/// A rooted decorated tree of type `Z/p^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzTree {
    field: Field,
    n: u32,
    root: String,
    reduction_type: Option<ReductionType>,
    /// Radius coordinate of the root; nonzero for extracted subtrees.
    root_radius: Rational,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    leaves: Vec<Leaf>,
    vertex_index: BTreeMap<String, usize>,
    edge_index: BTreeMap<String, usize>,
    leaf_index: BTreeMap<String, usize>,
}

/// Incremental construction of a [`HurwitzTree`].
#[derive(Debug, Clone)]
pub struct TreeBuilder {
    field: Field,
    n: u32,
    root: String,
    reduction_type: Option<ReductionType>,
    root_radius: Rational,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    leaves: Vec<Leaf>,
}

impl TreeBuilder {
    /// Tree with an étale root (depth 0) carrying a reduction type.
    pub fn etale(field: &Field, root: &str, reduction_type: ReductionType) -> Self {
        let n = reduction_type.len() as u32;
        let mut b = Self::empty(field, n, root);
        b.vertices.push(Vertex { id: root.into(), depth: Rational::zero(), omega: None, monodromy: n, chart: Vec::new() });
        b.reduction_type = Some(reduction_type);
        b
    }

    /// Tree with a radical root of positive depth.
    pub fn radical(field: &Field, n: u32, root: &str, depth: Rational, omega: DifferentialForm) -> Self {
        let mut b = Self::empty(field, n, root);
        b.vertices.push(Vertex { id: root.into(), depth, omega: Some(omega), monodromy: n, chart: Vec::new() });
        b
    }

    fn empty(field: &Field, n: u32, root: &str) -> Self {
        TreeBuilder {
            field: field.clone(),
            n,
            root: root.into(),
            reduction_type: None,
            root_radius: Rational::zero(),
            vertices: Vec::new(),
            edges: Vec::new(),
            leaves: Vec::new(),
        }
    }

    pub fn root_radius(mut self, r: Rational) -> Self {
        self.root_radius = r;
        self
    }

    /// Adds vertex `id` below `parent`, reached through chart point `point`.
    #[allow(clippy::too_many_arguments)]
    pub fn child(
        mut self,
        parent: &str,
        point: FieldElement,
        id: &str,
        thickness: Rational,
        slope: u64,
        depth: Rational,
        omega: DifferentialForm,
        monodromy: u32,
    ) -> Self {
        self.push_chart(parent, ChartTarget::Edge(id.into()), point);
        self.vertices.push(Vertex { id: id.into(), depth, omega: Some(omega), monodromy, chart: Vec::new() });
        self.edges.push(Edge { source: parent.into(), target: id.into(), thickness, slope });
        self
    }

    pub fn leaf(mut self, vertex: &str, point: FieldElement, id: &str, conductor: u64, index: u32) -> Self {
        self.push_chart(vertex, ChartTarget::Leaf(id.into()), point);
        self.leaves.push(Leaf { id: id.into(), conductor, index, vertex: vertex.into() });
        self
    }

    fn push_chart(&mut self, vertex: &str, target: ChartTarget, point: FieldElement) {
        if let Some(v) = self.vertices.iter_mut().find(|v| v.id == vertex) {
            v.chart.push(ChartEntry { target, point });
        } else {
            // recorded on a placeholder so `build` reports the unknown id
            self.vertices.push(Vertex {
                id: format!("\u{0}{vertex}"),
                depth: Rational::zero(),
                omega: None,
                monodromy: 0,
                chart: vec![ChartEntry { target, point }],
            });
        }
    }

    pub fn build(self) -> Result<HurwitzTree> {
        HurwitzTree::from_parts(TreeParts {
            field: self.field,
            n: self.n,
            root: self.root,
            reduction_type: self.reduction_type,
            root_radius: self.root_radius,
            vertices: self.vertices,
            edges: self.edges,
            leaves: self.leaves,
        })
    }
}

/// Raw components of a tree, checked for structural soundness by
/// [`HurwitzTree::from_parts`].
#[derive(Debug, Clone)]
pub struct TreeParts {
    pub field: Field,
    pub n: u32,
    pub root: String,
    pub reduction_type: Option<ReductionType>,
    pub root_radius: Rational,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub leaves: Vec<Leaf>,
}

impl HurwitzTree {
    /// Checks that the parts form a rooted tree with consistent charts.
    /// Domain conditions are left to [`validate`].
    pub fn from_parts(parts: TreeParts) -> Result<Self> {
        let TreeParts { field, n, root, reduction_type, root_radius, vertices, edges, leaves } = parts;
        let bad = |m: String| Err(Error::Malformed(m));
        if n == 0 {
            return bad("tree type exponent n must be positive".into());
        }
        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if let Some(id) = v.id.strip_prefix('\u{0}') {
                return Err(Error::UnknownId(id.into()));
            }
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return bad(format!("duplicate vertex id {}", v.id));
            }
            if let Some(w) = &v.omega {
                if w.field() != &field {
                    return Err(Error::FieldMismatch);
                }
            }
        }
        if !vertex_index.contains_key(&root) {
            return Err(Error::UnknownId(root));
        }
        if let Some(rt) = &reduction_type {
            if rt.field() != &field {
                return Err(Error::FieldMismatch);
            }
            if rt.len() as u32 != n {
                return bad(format!("reduction type has length {} but n = {n}", rt.len()));
            }
        }
        let mut edge_index = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            for id in [&e.source, &e.target] {
                if !vertex_index.contains_key(id) {
                    return Err(Error::UnknownId(id.clone()));
                }
            }
            if e.target == root {
                return bad("the root cannot be an edge target".into());
            }
            if edge_index.insert(e.target.clone(), i).is_some() {
                return bad(format!("vertex {} has two parent edges", e.target));
            }
        }
        if edges.len() + 1 != vertices.len() {
            return bad("every non-root vertex needs exactly one parent edge".into());
        }
        let mut leaf_index = BTreeMap::new();
        for (i, l) in leaves.iter().enumerate() {
            if !vertex_index.contains_key(&l.vertex) {
                return Err(Error::UnknownId(l.vertex.clone()));
            }
            if vertex_index.contains_key(&l.id) || leaf_index.insert(l.id.clone(), i).is_some() {
                return bad(format!("duplicate id {}", l.id));
            }
        }
        // charts: every child edge and leaf appears exactly once, points distinct
        for v in &vertices {
            let mut seen = Vec::new();
            for entry in &v.chart {
                if seen.contains(&entry.point) {
                    return bad(format!("vertex {} uses chart point {} twice", v.id, field.render(entry.point)));
                }
                seen.push(entry.point);
                let ok = match &entry.target {
                    ChartTarget::Edge(t) => edge_index.get(t).is_some_and(|&i| edges[i].source == v.id),
                    ChartTarget::Leaf(l) => leaf_index.get(l).is_some_and(|&i| leaves[i].vertex == v.id),
                };
                if !ok {
                    return bad(format!("chart of {} names {:?} which is not attached there", v.id, entry.target));
                }
            }
            let expected = edges.iter().filter(|e| e.source == v.id).count() + leaves.iter().filter(|l| l.vertex == v.id).count();
            if expected != v.chart.len() {
                return bad(format!("chart of {} does not cover all successors", v.id));
            }
        }
        let tree =
            HurwitzTree { field, n, root, reduction_type, root_radius, vertices, edges, leaves, vertex_index, edge_index, leaf_index };
        // connectivity: walking parents from every vertex reaches the root
        for v in &tree.vertices {
            let mut cur = v.id.as_str();
            let mut steps = 0;
            while cur != tree.root {
                cur = &tree.parent_edge(cur).ok_or_else(|| Error::Malformed(format!("{cur} is detached")))?.source;
                steps += 1;
                if steps > tree.vertices.len() {
                    return bad("cycle in parent relation".into());
                }
            }
        }
        Ok(tree)
    }

    pub fn into_parts(self) -> TreeParts {
        TreeParts {
            field: self.field,
            n: self.n,
            root: self.root,
            reduction_type: self.reduction_type,
            root_radius: self.root_radius,
            vertices: self.vertices,
            edges: self.edges,
            leaves: self.leaves,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn root(&self) -> &Vertex {
        self.vertex(&self.root).expect("root exists")
    }

    pub fn root_id(&self) -> &str {
        &self.root
    }

    pub fn reduction_type(&self) -> Option<&ReductionType> {
        self.reduction_type.as_ref()
    }

    pub fn is_etale(&self) -> bool {
        self.reduction_type.is_some()
    }

    pub fn root_radius(&self) -> &Rational {
        &self.root_radius
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn vertex(&self, id: &str) -> Result<&Vertex> {
        self.vertex_index.get(id).map(|&i| &self.vertices[i]).ok_or_else(|| Error::UnknownId(id.into()))
    }

    /// The edge whose target is `id`.
    pub fn edge(&self, id: &str) -> Result<&Edge> {
        self.edge_index.get(id).map(|&i| &self.edges[i]).ok_or_else(|| Error::UnknownId(id.into()))
    }

    pub fn leaf(&self, id: &str) -> Result<&Leaf> {
        self.leaf_index.get(id).map(|&i| &self.leaves[i]).ok_or_else(|| Error::UnknownId(id.into()))
    }

    pub fn parent_edge(&self, vertex: &str) -> Option<&Edge> {
        self.edge_index.get(vertex).map(|&i| &self.edges[i])
    }

    /// The unique edge leaving the root.
    pub fn trunk(&self) -> Option<&Edge> {
        self.child_edges(&self.root).next()
    }

    pub fn child_edges<'a>(&'a self, vertex: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.source == vertex)
    }

    pub fn leaves_at<'a>(&'a self, vertex: &'a str) -> impl Iterator<Item = &'a Leaf> + 'a {
        self.leaves.iter().filter(move |l| l.vertex == vertex)
    }

    /// Chart point of a successor of `vertex`.
    pub fn chart_point(&self, vertex: &str, target: &ChartTarget) -> Result<FieldElement> {
        self.vertex(vertex)?
            .chart
            .iter()
            .find(|c| &c.target == target)
            .map(|c| c.point)
            .ok_or_else(|| Error::UnknownId(format!("{target:?} at {vertex}")))
    }

    /// Chart point at `s(e)` of edge `e` (named by its target).
    pub fn edge_point(&self, edge: &str) -> Result<FieldElement> {
        let e = self.edge(edge)?;
        self.chart_point(&e.source, &ChartTarget::Edge(edge.into()))
    }

    pub fn leaf_point(&self, leaf: &str) -> Result<FieldElement> {
        let l = self.leaf(leaf)?;
        self.chart_point(&l.vertex, &ChartTarget::Leaf(leaf.into()))
    }

    /// Vertices in depth-first preorder from the root, children in chart order.
    pub fn preorder(&self) -> Vec<&Vertex> {
        let mut out = Vec::new();
        let mut stack = vec![self.root.as_str()];
        while let Some(id) = stack.pop() {
            let v = self.vertex(id).expect("known vertex");
            out.push(v);
            for c in v.chart.iter().rev() {
                if let ChartTarget::Edge(t) = &c.target {
                    stack.push(t);
                }
            }
        }
        out
    }

    /// Radius coordinate of a vertex: root radius plus thicknesses on the path.
    pub fn radius(&self, vertex: &str) -> Result<Rational> {
        let mut r = Rational::zero();
        let mut cur = self.vertex(vertex)?.id.as_str();
        while let Some(e) = self.parent_edge(cur) {
            r += &e.thickness;
            cur = &e.source;
        }
        Ok(r + &self.root_radius)
    }

    /// Whether `ancestor` lies on the path from the root to `vertex` (inclusive).
    pub fn is_ancestor(&self, ancestor: &str, vertex: &str) -> bool {
        let mut cur = vertex;
        loop {
            if cur == ancestor {
                return true;
            }
            match self.parent_edge(cur) {
                Some(e) => cur = &e.source,
                None => return false,
            }
        }
    }

    /// Leaves lying behind edge `e`, i.e. below its target.
    pub fn leaves_behind(&self, edge: &str) -> Vec<&Leaf> {
        self.leaves.iter().filter(|l| self.is_ancestor(edge, &l.vertex)).collect()
    }

    /// `sum h(b)` over all leaves.
    pub fn conductor(&self) -> u64 {
        self.leaves.iter().map(|l| l.conductor).sum()
    }

    /// Vertices on the path from the root to `vertex`, root first.
    pub fn path_to(&self, vertex: &str) -> Vec<String> {
        let mut out = vec![vertex.to_string()];
        let mut cur = vertex;
        while let Some(e) = self.parent_edge(cur) {
            out.push(e.source.clone());
            cur = &e.source;
        }
        out.reverse();
        out
    }
}
