//! Graphviz export.

use std::fmt::Write;

use crate::rational;
use crate::tree::{ChartTarget, HurwitzTree};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// DOT digraph: vertices show depth, form and monodromy; edges show
/// thickness and slope; leaves are drawn as points labelled with their
/// index and chart point.
pub fn to_dot(t: &HurwitzTree) -> String {
    let field = t.field();
    let p = t.p();
    let mut out = String::new();
    writeln!(out, "digraph hurwitz {{").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for v in t.preorder() {
        let mut label = format!("{}\\ndepth {}\\nZ/{}^{}", v.id, rational::format(&v.depth), p, v.monodromy);
        if v.id == t.root_id() {
            if let Some(rt) = t.reduction_type() {
                label.push_str(&format!("\\n{}", rt.render()));
            }
        }
        if let Some(w) = &v.omega {
            label.push_str(&format!("\\n{}", w.render()));
        }
        writeln!(out, "  {} [label={}];", quote(&v.id), quote(&label)).unwrap();
        for c in &v.chart {
            let at = field.render(c.point);
            match &c.target {
                ChartTarget::Edge(target) => {
                    let e = t.edge(target).expect("chart names an edge");
                    let label = format!("x = {at}\\neps {}, d {}", rational::format(&e.thickness), e.slope);
                    writeln!(out, "  {} -> {} [label={}];", quote(&v.id), quote(target), quote(&label)).unwrap();
                }
                ChartTarget::Leaf(id) => {
                    let leaf = t.leaf(id).expect("chart names a leaf");
                    let label = format!("{id} (i={}, h={})", leaf.index, leaf.conductor);
                    writeln!(out, "  {} [shape=point, xlabel={}];", quote(id), quote(&label)).unwrap();
                    writeln!(out, "  {} -> {} [label={}, arrowhead=none];", quote(&v.id), quote(id), quote(&format!("x = {at}"))).unwrap();
                }
            }
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::minimal_z2;

    #[test]
    fn small_tree() {
        let dot = to_dot(&minimal_z2());
        assert!(dot.starts_with("digraph hurwitz {\n"));
        assert!(dot.contains("\"v0\" -> \"v1\" [label=\"x = 0\\neps 2, d 1\"]"));
        assert!(dot.contains("\"b2\" [shape=point"));
        assert_eq!(dot.matches("->").count(), 3);
        assert_eq!(dot, to_dot(&minimal_z2()));
    }
}
