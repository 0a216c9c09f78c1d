//! Checks that one tree extends another along a vertex map.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;

use super::classify::classify_level_pair;
use crate::differential::DifferentialForm;
use crate::error::Result;
use crate::rational::{self, int, Rational};
use crate::report::{Clause, ValidationReport};
use crate::tree::{HurwitzTree, RationalPlace};

/// Where a point of the lower tree lands in the upper tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Vertex(String),
    Place(RationalPlace),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceImage {
    pub place: RationalPlace,
    pub image: Location,
}

/// Correspondence from the lower tree to the upper tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexMap {
    pub vertices: BTreeMap<String, String>,
    pub places: Vec<PlaceImage>,
    pub leaves: BTreeMap<String, String>,
}

impl VertexMap {
    /// Mapped places on a lower edge, sorted by radius.
    pub fn places_on(&self, edge: &str) -> Vec<&PlaceImage> {
        let mut v: Vec<&PlaceImage> = self.places.iter().filter(|p| p.place.edge == edge).collect();
        v.sort_by(|a, b| a.place.r.cmp(&b.place.r));
        v
    }
}

/// Degeneration data `(delta, w)` at a location.
fn data_at(t: &HurwitzTree, loc: &Location) -> Result<(Rational, Option<DifferentialForm>)> {
    match loc {
        Location::Vertex(id) => {
            let v = t.vertex(id)?;
            Ok((v.depth.clone(), v.omega.clone()))
        }
        Location::Place(pl) => Ok((t.depth_at_place(pl)?, Some(t.differential_at_place(pl)?))),
    }
}

fn radius_of(t: &HurwitzTree, loc: &Location) -> Result<Rational> {
    match loc {
        Location::Vertex(id) => t.radius(id),
        Location::Place(pl) => Ok(pl.r.clone()),
    }
}

fn strictly_inside(t: &HurwitzTree, pl: &RationalPlace) -> bool {
    t.edge_interval(&pl.edge).is_ok_and(|(s, e)| s < pl.r && pl.r < e)
}

fn describe(loc: &Location) -> String {
    match loc {
        Location::Vertex(id) => id.clone(),
        Location::Place(pl) => format!("{}@{}", pl.edge, rational::format(&pl.r)),
    }
}

/// Checks refinement, level pairs, monodromy, new branches and the
/// reduction-type prefix. Thicknesses are not compared.
pub fn check_extension(lo: &HurwitzTree, hi: &HurwitzTree, map: &VertexMap) -> ValidationReport {
    let mut report = ValidationReport::new();
    let p = lo.p();

    if lo.field() != hi.field() {
        report.push(Clause::Refinement, hi.root_id(), "trees live over different fields");
        return report;
    }
    if hi.n() != lo.n() + 1 {
        report.push(Clause::Monodromy, hi.root_id(), format!("type Z/p^{} does not extend Z/p^{}", hi.n(), lo.n()));
    }
    match (lo.reduction_type(), hi.reduction_type()) {
        (Some(a), Some(b)) if !a.is_prefix_of(b) => {
            report.push(Clause::Prefix, hi.root_id(), format!("{} is not a prefix of {}", a.render(), b.render()))
        }
        (Some(_), None) | (None, Some(_)) => report.push(Clause::Prefix, hi.root_id(), "one root is étale and the other radical"),
        _ => {}
    }

    // (1) refinement: vertex images
    let mut used = BTreeSet::new();
    for v in lo.vertices() {
        match map.vertices.get(&v.id) {
            None => report.push(Clause::Refinement, &v.id, "vertex is not mapped"),
            Some(img) if hi.vertex(img).is_err() => report.push(Clause::Refinement, &v.id, format!("image {img} is not a vertex")),
            Some(img) => {
                if !used.insert(img.clone()) {
                    report.push(Clause::Refinement, &v.id, format!("image {img} is used twice"));
                }
            }
        }
    }
    if map.vertices.get(lo.root_id()).is_some_and(|r| r != hi.root_id()) {
        report.push(Clause::Refinement, lo.root_id(), "root must map to root");
    }
    for pi in &map.places {
        let here = describe(&Location::Place(pi.place.clone()));
        if !strictly_inside(lo, &pi.place) {
            report.push(Clause::Refinement, &here, "mapped place is not strictly inside its edge");
        }
        match &pi.image {
            Location::Vertex(id) => {
                if hi.vertex(id).is_err() {
                    report.push(Clause::Refinement, &here, format!("image {id} is not a vertex"));
                } else if !used.insert(id.clone()) {
                    report.push(Clause::Refinement, &here, format!("image {id} is used twice"));
                }
            }
            Location::Place(q) => {
                if !strictly_inside(hi, q) {
                    report.push(Clause::Refinement, &here, "image place is not strictly inside an edge");
                }
            }
        }
    }
    if report.has(Clause::Refinement) {
        return report;
    }

    // (1) paths, (2) level pairs at places and midpoints
    let mut path_edges = BTreeSet::new();
    for e in lo.edges() {
        let s_img = &map.vertices[&e.source];
        let t_img = &map.vertices[&e.target];
        if s_img == t_img || !hi.is_ancestor(s_img, t_img) {
            report.push(Clause::Refinement, &e.target, format!("{s_img} is not above {t_img}"));
            continue;
        }
        let path = hi.path_to(t_img);
        let start = path.iter().position(|x| x == s_img).expect("ancestor");
        let path = &path[start..];
        let inner: BTreeSet<&String> = path[1..path.len() - 1].iter().collect();
        path_edges.extend(path[1..].iter().cloned());

        let places = map.places_on(&e.target);
        let place_vertices: BTreeSet<&String> = places
            .iter()
            .filter_map(|pi| match &pi.image {
                Location::Vertex(id) => Some(id),
                Location::Place(_) => None,
            })
            .collect();
        if inner != place_vertices {
            report.push(Clause::Refinement, &e.target, "intermediate vertices of the image path are not the images of mapped places");
            continue;
        }
        // stations in order along both paths
        let (Ok(r_s), Ok(r_t)) = (lo.radius(&e.source), lo.radius(&e.target)) else { continue };
        let mut stations: Vec<(Rational, Location, Location)> =
            vec![(r_s, Location::Vertex(e.source.clone()), Location::Vertex(s_img.clone()))];
        for pi in &places {
            stations.push((pi.place.r.clone(), Location::Place(pi.place.clone()), pi.image.clone()));
        }
        stations.push((r_t, Location::Vertex(e.target.clone()), Location::Vertex(t_img.clone())));

        let mut hi_r = Vec::new();
        let mut ok = true;
        for (_, _, img) in &stations {
            if let Location::Place(q) = img {
                if !path[1..].contains(&q.edge) {
                    report.push(Clause::Refinement, &e.target, format!("image place on {} is off the image path", q.edge));
                    ok = false;
                }
            }
            match radius_of(hi, img) {
                Ok(r) => hi_r.push(r),
                Err(err) => {
                    report.push(Clause::Refinement, &e.target, err.to_string());
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        if hi_r.windows(2).any(|w| w[0] >= w[1]) {
            report.push(Clause::Refinement, &e.target, "map does not preserve order along the edge");
            continue;
        }

        for (_, lo_loc, hi_loc) in &stations[1..stations.len() - 1] {
            level_pair(lo, hi, lo_loc, hi_loc, p, &mut report);
            if let (Location::Place(_), Location::Vertex(id)) = (lo_loc, hi_loc) {
                let (g_lo, g_hi) = (lo.vertex(&e.target).map(|v| v.monodromy), hi.vertex(id).map(|v| v.monodromy));
                if let (Ok(a), Ok(b)) = (g_lo, g_hi) {
                    if b != a + 1 {
                        report.push(
                            Clause::Monodromy,
                            id,
                            format!("monodromy Z/p^{b} at the image of a place on {}, expected Z/p^{}", e.target, a + 1),
                        );
                    }
                }
            }
        }
        for i in 0..stations.len() - 1 {
            let lo_mid = (&stations[i].0 + &stations[i + 1].0) / int(2);
            let hi_mid = (&hi_r[i] + &hi_r[i + 1]) / int(2);
            let hi_edge = path[1..].iter().find(|x| hi.edge_interval(x).is_ok_and(|(a, b)| a < hi_mid && hi_mid < b));
            let Some(hi_edge) = hi_edge else {
                report.push(Clause::Refinement, &e.target, "segment midpoint is not inside an edge of the image path");
                continue;
            };
            let lo_loc = Location::Place(RationalPlace::new(e.target.clone(), lo_mid));
            let hi_loc = Location::Place(RationalPlace::new(hi_edge.clone(), hi_mid));
            level_pair(lo, hi, &lo_loc, &hi_loc, p, &mut report);
        }
    }

    // (2) and (3) at vertices
    for v in lo.vertices() {
        let img = &map.vertices[&v.id];
        let w = hi.vertex(img).expect("checked");
        if w.monodromy != v.monodromy + 1 {
            report.push(Clause::Monodromy, img, format!("monodromy Z/p^{} should be Z/p^{}", w.monodromy, v.monodromy + 1));
        }
        let etale_root = v.id == lo.root_id() && lo.is_etale();
        if !etale_root {
            level_pair(lo, hi, &Location::Vertex(v.id.clone()), &Location::Vertex(img.clone()), p, &mut report);
        }
    }

    // leaves: mapped ones raise their index, new ones have index 1
    let mut hit = BTreeSet::new();
    for l in lo.leaves() {
        let Some(img) = map.leaves.get(&l.id) else {
            report.push(Clause::Refinement, &l.id, "leaf is not mapped");
            continue;
        };
        match hi.leaf(img) {
            Err(_) => report.push(Clause::Refinement, &l.id, format!("image {img} is not a leaf")),
            Ok(h) => {
                hit.insert(img.clone());
                if map.vertices.get(&l.vertex) != Some(&h.vertex) {
                    report.push(Clause::Refinement, &l.id, "leaf image is not attached to the image of its vertex");
                }
                if h.index != l.index + 1 {
                    report.push(Clause::Monodromy, img, format!("index {} should be {}", h.index, l.index + 1));
                }
            }
        }
    }
    for h in hi.leaves() {
        if !hit.contains(&h.id) && h.index != 1 {
            report.push(Clause::NewBranch, &h.id, format!("new leaf has index {}, expected 1", h.index));
        }
    }
    // (4) edges off the image paths start new branches
    for e in hi.edges() {
        if !path_edges.contains(&e.target) {
            let g = hi.vertex(&e.target).map(|v| v.monodromy).unwrap_or(0);
            if g != 1 {
                report.push(Clause::NewBranch, &e.target, format!("new branch has monodromy Z/p^{g}, expected Z/p"));
            }
        }
    }
    report
}

fn level_pair(lo: &HurwitzTree, hi: &HurwitzTree, lo_loc: &Location, hi_loc: &Location, p: u32, report: &mut ValidationReport) {
    let at = describe(hi_loc);
    let (lo_data, hi_data) = match (data_at(lo, lo_loc), data_at(hi, hi_loc)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(err), _) | (_, Err(err)) => {
            report.push(Clause::LevelPair, &at, err.to_string());
            return;
        }
    };
    let (Some(w_hi), true) = (hi_data.1.as_ref(), hi_data.0.is_positive()) else {
        report.push(Clause::LevelPair, &at, "upper tree has no differential here");
        return;
    };
    match classify_level_pair(p, &lo_data.0, lo_data.1.as_ref(), &hi_data.0, w_hi) {
        Ok(v) if v.passed => {}
        Ok(v) => report.push(Clause::LevelPair, &at, format!("{} against {}: {} ({})", describe(lo_loc), at, v.detail, v.case)),
        Err(err) => report.push(Clause::LevelPair, &at, err.to_string()),
    }
}
