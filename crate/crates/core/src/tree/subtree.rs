use super::{ChartEntry, ChartTarget, HurwitzTree, TreeParts, Vertex};
use crate::error::{Error, Result};

impl HurwitzTree {
    /// The tree hanging off `s(e)` through `e`, rooted at `s(e)` with the
    /// `e`-part as its differential. Radii keep their global values.
    pub fn subtree(&self, edge: &str) -> Result<HurwitzTree> {
        let e = self.edge(edge)?;
        if e.source == self.root_id() {
            return Err(Error::TrunkNotAllowed);
        }
        let s = self.vertex(&e.source)?;
        let top = self.vertex(&e.target)?;
        let point = self.edge_point(edge)?;
        let root = Vertex {
            id: s.id.clone(),
            depth: s.depth.clone(),
            omega: Some(self.e_part(edge)?),
            monodromy: top.monodromy,
            chart: vec![ChartEntry { target: ChartTarget::Edge(edge.into()), point }],
        };
        let below = |id: &str| self.is_ancestor(edge, id);
        let mut vertices = vec![root];
        vertices.extend(self.preorder().into_iter().filter(|v| below(&v.id)).cloned());
        let edges = self.edges.iter().filter(|x| below(&x.target)).cloned().collect();
        let leaves = self.leaves.iter().filter(|l| below(&l.vertex)).cloned().collect();
        HurwitzTree::from_parts(TreeParts {
            field: self.field.clone(),
            n: top.monodromy,
            root: s.id.clone(),
            reduction_type: None,
            root_radius: self.radius(&s.id)?,
            vertices,
            edges,
            leaves,
        })
    }
}
