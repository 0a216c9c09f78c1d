//! Validation reports: a list of violated clauses with locations.

use std::fmt;

use serde::Serialize;

/// The condition a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Clause {
    H1,
    H2,
    H3,
    H4,
    H5,
    H6,
    H7,
    /// Slope equals the number of leaves behind minus one.
    SlopeConductor,
    /// Depth of leaf-carrying vertices in mixed characteristic.
    MixedDepth,
    /// Logarithmicity at leaf-carrying vertices.
    Logarithmic,
    /// Differentials of the shape `c dx / prod (x - a_i)^{m_i}`.
    Shape,
    /// Étale root data (reduction type, breaks).
    Root,
    /// Constant-coefficient compatibility.
    Compatibility,
    /// Extension: refinement.
    Refinement,
    /// Extension: level-pair Cartier identity.
    LevelPair,
    /// Extension: monodromy raised by one on mapped vertices.
    Monodromy,
    /// Extension: new branches end in `Z/p`.
    NewBranch,
    /// Extension: reduction-type prefix.
    Prefix,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::H1 => "H1",
            Clause::H2 => "H2",
            Clause::H3 => "H3",
            Clause::H4 => "H4",
            Clause::H5 => "H5",
            Clause::H6 => "H6",
            Clause::H7 => "H7",
            Clause::SlopeConductor => "slope-conductor",
            Clause::MixedDepth => "mixed-depth",
            Clause::Logarithmic => "logarithmic",
            Clause::Shape => "shape",
            Clause::Root => "root",
            Clause::Compatibility => "compatibility",
            Clause::Refinement => "ext-1-refinement",
            Clause::LevelPair => "ext-2-level-pair",
            Clause::Monodromy => "ext-3-monodromy",
            Clause::NewBranch => "ext-4-new-branch",
            Clause::Prefix => "ext-5-prefix",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: Clause,
    /// Vertex, edge, leaf or place the violation was found at.
    pub location: String,
    pub message: String,
}

/// Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, clause: Clause, location: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { clause, location: location.into(), message: message.into() });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, clause: Clause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }

    /// Distinct violated clauses in canonical order.
    pub fn clauses(&self) -> Vec<Clause> {
        let mut c: Vec<Clause> = self.violations.iter().map(|v| v.clause).collect();
        c.sort();
        c.dedup();
        c
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return writeln!(f, "OK");
        }
        for v in &self.violations {
            writeln!(f, "[{}] {}: {}", v.clause, v.location, v.message)?;
        }
        Ok(())
    }
}
