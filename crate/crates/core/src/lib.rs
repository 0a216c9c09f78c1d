//! Exact arithmetic over finite fields, differential forms and the Cartier
//! operator, Witt-vector reduction types, and Hurwitz trees with their
//! validation and extension.

pub mod differential;
pub mod dot;
pub mod error;
pub mod expr;
pub mod extension;
pub mod field;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod report;
pub mod schema;
pub mod tree;
pub mod witt;

pub use differential::{DifferentialForm, PoleShape};
pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldSpec};
pub use poly::{Degree, Polynomial};
pub use ratfunc::{Order, PartialFractions, PfTerm, Point, RationalFunction};
pub use rational::Rational;
pub use report::{Clause, ValidationReport, Violation};
pub use tree::{HurwitzTree, RationalPlace, TreeBuilder};
pub use witt::{LevelConductor, ReductionType};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/cartier.md")]
    mod cartier {}
    #[doc = include_str!("../../../book/src/witt.md")]
    mod witt {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/cartier_problem.md")]
    mod cartier_problem {}
    #[doc = include_str!("../../../book/src/extension.md")]
    mod extension {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
