//! Level-pair classification, extension checking, the Cartier problem and
//! the tree extension construction.

mod cartier_problem;
mod check;
mod classify;
mod extend;
mod partition;

pub use cartier_problem::{
    minimal_section, previous_break, solve_cartier, solve_cartier_with, verify_cartier_solution, CartierSearch, CartierVariant,
    SearchSpace, DEFAULT_CEILING,
};
pub use check::{check_extension, Location, PlaceImage, VertexMap};
pub use classify::{classify_level_one, classify_level_pair, CaseTag, LevelPairVerdict};
pub use extend::{extend_tree, frobenius_lift, Extension, ExtensionMode, ExtensionTarget, RootGoal};
pub use partition::{partition_trunk, rescaled_trunk_thickness, solve_equidistant_parameter};
