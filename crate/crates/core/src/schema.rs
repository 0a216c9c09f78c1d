//! JSON file formats.
//!
//! * field elements are coefficient arrays `[c0, c1, ...]` in the field generator;
//! * polynomials are arrays of field elements in ascending degree;
//! * rationals are strings `"n"` or `"n/d"`;
//! * a reduction type is an array of entries, entry `j` holding the
//!   coefficient of `x^-j`.
//!
//! A tree file:
//!
//! ```json
//! {
//!   "field": { "p": 2, "modulus": [0, 1] },
//!   "n": 1,
//!   "root": "v0",
//!   "root_radius": "0",
//!   "reduction_type": [[[0], [1]]],
//!   "vertices": [
//!     { "id": "v0", "depth": "0", "monodromy": 1, "chart": [{ "edge": "v1", "point": [0] }] },
//!     { "id": "v1", "depth": "2", "monodromy": 1,
//!       "omega_dx": { "num": [[1]], "den": [[0], [1], [1]] },
//!       "chart": [{ "leaf": "b1", "point": [0] }, { "leaf": "b2", "point": [1] }] }
//!   ],
//!   "edges": [{ "source": "v0", "target": "v1", "thickness": "2", "slope": 1 }],
//!   "leaves": [
//!     { "id": "b1", "vertex": "v1", "conductor": 1, "index": 1 },
//!     { "id": "b2", "vertex": "v1", "conductor": 1, "index": 1 }
//!   ]
//! }
//! ```
//!
//! A radical tree omits `reduction_type` and gives the root an `omega_dx`.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::differential::DifferentialForm;
use crate::error::{Error, Result};
use crate::extension::{ExtensionMode, ExtensionTarget, Location, PlaceImage, RootGoal, VertexMap};
use crate::field::{Field, FieldElement, FieldSpec};
use crate::poly::Polynomial;
use crate::ratfunc::RationalFunction;
use crate::rational::{self, Rational};
use crate::tree::{ChartEntry, ChartTarget, Edge, HurwitzTree, Leaf, RationalPlace, TreeParts, Vertex};
use crate::witt::ReductionType;

type ElemDoc = Vec<u32>;
type PolyDoc = Vec<ElemDoc>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub p: u32,
    /// Monic irreducible modulus in ascending degree; `[0, 1]` for a prime field.
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatFuncDoc {
    pub num: PolyDoc,
    pub den: PolyDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<String>,
    pub point: ElemDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub depth: String,
    pub monodromy: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_dx: Option<RatFuncDoc>,
    pub chart: Vec<ChartDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub source: String,
    pub target: String,
    pub thickness: String,
    pub slope: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafDoc {
    pub id: String,
    pub vertex: String,
    pub conductor: u64,
    pub index: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub field: FieldDoc,
    pub n: u32,
    pub root: String,
    #[serde(default = "zero_string")]
    pub root_radius: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction_type: Option<Vec<PolyDoc>>,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    pub leaves: Vec<LeafDoc>,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WittDoc {
    pub field: FieldDoc,
    pub reduction_type: Vec<PolyDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceImageDoc {
    pub edge: String,
    pub r: String,
    pub image: ImageDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub vertices: BTreeMap<String, String>,
    #[serde(default)]
    pub places: Vec<PlaceImageDoc>,
    #[serde(default)]
    pub leaves: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeDoc {
    Minimal,
    General,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RootGoalDoc {
    Etale(Vec<PolyDoc>),
    Radical {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        leading: Option<ElemDoc>,
    },
}

/// An extension target. `m_n`, when present, is checked against the
/// break the mode produces.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDoc {
    pub mode: ModeDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_n: Option<u64>,
    pub root_goal: RootGoalDoc,
}

/// Deserializes with the JSON path and line of the first error.
pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(s);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Parse(format!("at `{}`: {}", e.path(), e.inner())))
}

/// Pretty JSON with numeric arrays kept on one line and a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let pretty = serde_json::to_string_pretty(doc).expect("documents serialize");
    let mut out = String::with_capacity(pretty.len());
    let mut rest = pretty.as_str();
    while let Some(i) = rest.find('[') {
        out.push_str(&rest[..i]);
        let tail = &rest[i..];
        let close = tail.find(']').expect("balanced");
        let inner = &tail[1..close];
        if inner.chars().all(|c| c.is_ascii_digit() || c == ',' || c.is_whitespace()) {
            let items: Vec<&str> = inner.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
            out.push_str(&format!("[{}]", items.join(", ")));
            rest = &tail[close + 1..];
        } else {
            out.push('[');
            rest = &tail[1..];
        }
    }
    out.push_str(rest);
    out.push('\n');
    out
}

fn err(path: &str, what: impl std::fmt::Display) -> Error {
    Error::Parse(format!("at `{path}`: {what}"))
}

impl FieldDoc {
    pub fn of(field: &Field) -> Self {
        let spec = field.spec();
        FieldDoc { p: spec.p, modulus: spec.modulus.clone() }
    }

    pub fn build(&self) -> Result<Field> {
        Field::new(FieldSpec::new(self.p, self.modulus.clone())).map_err(|e| err("field", e))
    }
}

pub fn elem_doc(field: &Field, a: FieldElement) -> ElemDoc {
    field.coeffs(a)
}

pub fn elem_from_doc(field: &Field, doc: &[u32], path: &str) -> Result<FieldElement> {
    field.from_coeffs(doc).map_err(|e| err(path, e))
}

pub fn poly_doc(p: &Polynomial) -> PolyDoc {
    p.coeffs().iter().map(|&c| elem_doc(p.field(), c)).collect()
}

pub fn poly_from_doc(field: &Field, doc: &[ElemDoc], path: &str) -> Result<Polynomial> {
    let coeffs = doc.iter().enumerate().map(|(i, c)| elem_from_doc(field, c, &format!("{path}[{i}]"))).collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::new(field, coeffs))
}

pub fn ratfunc_doc(f: &RationalFunction) -> RatFuncDoc {
    RatFuncDoc { num: poly_doc(f.numerator()), den: poly_doc(f.denominator()) }
}

pub fn ratfunc_from_doc(field: &Field, doc: &RatFuncDoc, path: &str) -> Result<RationalFunction> {
    let num = poly_from_doc(field, &doc.num, &format!("{path}.num"))?;
    let den = poly_from_doc(field, &doc.den, &format!("{path}.den"))?;
    RationalFunction::new(num, den).map_err(|e| err(path, e))
}

pub fn witt_entries_doc(rt: &ReductionType) -> Vec<PolyDoc> {
    rt.entries().iter().map(poly_doc).collect()
}

pub fn witt_from_entries(field: &Field, doc: &[PolyDoc], path: &str) -> Result<ReductionType> {
    let entries = doc.iter().enumerate().map(|(i, e)| poly_from_doc(field, e, &format!("{path}[{i}]"))).collect::<Result<Vec<_>>>()?;
    ReductionType::new(field, entries).map_err(|e| err(path, e))
}

fn rat(s: &str, path: &str) -> Result<Rational> {
    rational::parse(s).map_err(|e| err(path, e))
}

impl TreeDoc {
    pub fn of(t: &HurwitzTree) -> Self {
        let field = t.field();
        let vertices = t
            .vertices()
            .iter()
            .map(|v| VertexDoc {
                id: v.id.clone(),
                depth: rational::format(&v.depth),
                monodromy: v.monodromy,
                omega_dx: v.omega.as_ref().map(|w| ratfunc_doc(w.coefficient())),
                chart: v
                    .chart
                    .iter()
                    .map(|c| {
                        let (edge, leaf) = match &c.target {
                            ChartTarget::Edge(e) => (Some(e.clone()), None),
                            ChartTarget::Leaf(l) => (None, Some(l.clone())),
                        };
                        ChartDoc { edge, leaf, point: elem_doc(field, c.point) }
                    })
                    .collect(),
            })
            .collect();
        TreeDoc {
            field: FieldDoc::of(field),
            n: t.n(),
            root: t.root_id().to_string(),
            root_radius: rational::format(t.root_radius()),
            reduction_type: t.reduction_type().map(witt_entries_doc),
            vertices,
            edges: t
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    source: e.source.clone(),
                    target: e.target.clone(),
                    thickness: rational::format(&e.thickness),
                    slope: e.slope,
                })
                .collect(),
            leaves: t
                .leaves()
                .iter()
                .map(|l| LeafDoc { id: l.id.clone(), vertex: l.vertex.clone(), conductor: l.conductor, index: l.index })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<HurwitzTree> {
        let field = self.field.build()?;
        let reduction_type = match &self.reduction_type {
            Some(rt) => Some(witt_from_entries(&field, rt, "reduction_type")?),
            None => None,
        };
        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let path = format!("vertices[{i}]");
            let omega = match &v.omega_dx {
                Some(doc) => Some(DifferentialForm::new(ratfunc_from_doc(&field, doc, &format!("{path}.omega_dx"))?)),
                None => None,
            };
            let mut chart = Vec::new();
            for (j, c) in v.chart.iter().enumerate() {
                let cpath = format!("{path}.chart[{j}]");
                let target = match (&c.edge, &c.leaf) {
                    (Some(e), None) => ChartTarget::Edge(e.clone()),
                    (None, Some(l)) => ChartTarget::Leaf(l.clone()),
                    _ => return Err(err(&cpath, "exactly one of `edge` and `leaf` is required")),
                };
                chart.push(ChartEntry { target, point: elem_from_doc(&field, &c.point, &format!("{cpath}.point"))? });
            }
            vertices.push(Vertex {
                id: v.id.clone(),
                depth: rat(&v.depth, &format!("{path}.depth"))?,
                omega,
                monodromy: v.monodromy,
                chart,
            });
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                Ok(Edge {
                    source: e.source.clone(),
                    target: e.target.clone(),
                    thickness: rat(&e.thickness, &format!("edges[{i}].thickness"))?,
                    slope: e.slope,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let leaves = self
            .leaves
            .iter()
            .map(|l| Leaf { id: l.id.clone(), conductor: l.conductor, index: l.index, vertex: l.vertex.clone() })
            .collect();
        HurwitzTree::from_parts(TreeParts {
            field,
            n: self.n,
            root: self.root.clone(),
            reduction_type,
            root_radius: rat(&self.root_radius, "root_radius")?,
            vertices,
            edges,
            leaves,
        })
    }
}

impl WittDoc {
    pub fn of(rt: &ReductionType) -> Self {
        WittDoc { field: FieldDoc::of(rt.field()), reduction_type: witt_entries_doc(rt) }
    }

    pub fn build(&self) -> Result<ReductionType> {
        witt_from_entries(&self.field.build()?, &self.reduction_type, "reduction_type")
    }
}

impl MapDoc {
    pub fn of(map: &VertexMap) -> Self {
        MapDoc {
            vertices: map.vertices.clone(),
            places: map
                .places
                .iter()
                .map(|pi| PlaceImageDoc {
                    edge: pi.place.edge.clone(),
                    r: rational::format(&pi.place.r),
                    image: match &pi.image {
                        Location::Vertex(v) => ImageDoc { vertex: Some(v.clone()), edge: None, r: None },
                        Location::Place(q) => ImageDoc { vertex: None, edge: Some(q.edge.clone()), r: Some(rational::format(&q.r)) },
                    },
                })
                .collect(),
            leaves: map.leaves.clone(),
        }
    }

    pub fn build(&self) -> Result<VertexMap> {
        let mut places = Vec::new();
        for (i, pi) in self.places.iter().enumerate() {
            let path = format!("places[{i}]");
            let place = RationalPlace::new(pi.edge.clone(), rat(&pi.r, &format!("{path}.r"))?);
            let image = match (&pi.image.vertex, &pi.image.edge, &pi.image.r) {
                (Some(v), None, None) => Location::Vertex(v.clone()),
                (None, Some(e), Some(r)) => Location::Place(RationalPlace::new(e.clone(), rat(r, &format!("{path}.image.r"))?)),
                _ => return Err(err(&format!("{path}.image"), "give either `vertex` or both `edge` and `r`")),
            };
            places.push(PlaceImage { place, image });
        }
        Ok(VertexMap { vertices: self.vertices.clone(), places, leaves: self.leaves.clone() })
    }
}

impl TargetDoc {
    pub fn of(target: &ExtensionTarget, field: &Field, m_n: Option<u64>) -> Self {
        let (mode, l) = match target.mode {
            ExtensionMode::Minimal => (ModeDoc::Minimal, None),
            ExtensionMode::General(l) => (ModeDoc::General, Some(l)),
        };
        let root_goal = match &target.root {
            RootGoal::Etale(rt) => RootGoalDoc::Etale(witt_entries_doc(rt)),
            RootGoal::Radical { leading } => RootGoalDoc::Radical { leading: leading.map(|a| elem_doc(field, a)) },
        };
        TargetDoc { mode, l, m_n, root_goal }
    }

    /// Resolves against the tree being extended, which supplies the field.
    pub fn build(&self, prev: &HurwitzTree) -> Result<ExtensionTarget> {
        let field = prev.field();
        let mode = match (self.mode, self.l) {
            (ModeDoc::Minimal, None | Some(0)) => ExtensionMode::Minimal,
            (ModeDoc::General, Some(l)) if l > 0 => ExtensionMode::General(l),
            (ModeDoc::Minimal, Some(_)) => return Err(err("l", "minimal mode takes no `l`")),
            (ModeDoc::General, _) => return Err(err("l", "general mode needs a positive `l`")),
        };
        let root = match &self.root_goal {
            RootGoalDoc::Etale(rt) => RootGoal::Etale(witt_from_entries(field, rt, "root_goal.etale")?),
            RootGoalDoc::Radical { leading } => RootGoal::Radical {
                leading: match leading {
                    Some(a) => Some(elem_from_doc(field, a, "root_goal.radical.leading")?),
                    None => None,
                },
            },
        };
        let target = ExtensionTarget { mode, root };
        if let Some(m) = self.m_n {
            let p = prev.p() as u64;
            let expected = p * prev.conductor() - p + target_excess(mode);
            if m != expected {
                return Err(Error::TargetInfeasible(format!("m_n = {m}, but the mode gives {expected}")));
            }
        }
        Ok(target)
    }
}

fn target_excess(mode: ExtensionMode) -> u64 {
    match mode {
        ExtensionMode::Minimal => 0,
        ExtensionMode::General(l) => l,
    }
}

pub fn tree_from_json(s: &str) -> Result<HurwitzTree> {
    from_json::<TreeDoc>(s)?.build()
}

pub fn tree_to_json(t: &HurwitzTree) -> String {
    to_json(&TreeDoc::of(t))
}

pub fn map_from_json(s: &str) -> Result<VertexMap> {
    from_json::<MapDoc>(s)?.build()
}

pub fn map_to_json(map: &VertexMap) -> String {
    to_json(&MapDoc::of(map))
}

pub fn witt_from_json(s: &str) -> Result<ReductionType> {
    from_json::<WittDoc>(s)?.build()
}

pub fn witt_to_json(rt: &ReductionType) -> String {
    to_json(&WittDoc::of(rt))
}
