use thiserror::Error;

/// Errors raised by the algebraic and tree-level operations.
///
/// Validators never return these for domain violations; they return a
/// [`crate::report::ValidationReport`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    InvalidField(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("denominator has an irreducible factor of degree {degree}; retry over an extension of degree divisible by {degree}")]
    IrreducibleFactor { degree: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero differential form has no order")]
    ZeroForm,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("reduction type is not reduced: entry {entry} has a p-th power term x^-{exponent}")]
    NotReduced { entry: usize, exponent: usize },
    #[error("reduction type is not totally ramified at level {level}")]
    NotTotallyRamified { level: usize },
    #[error("conductor inequality violated at level {level}")]
    ConductorInequalityViolated { level: usize },
    #[error("leading exponent {exponent} of the top entry is divisible by p")]
    LeadingExponentDivisibleByP { exponent: usize },
    #[error("differential form is not of the shape c dx / prod (x - a_i)^m_i: {0}")]
    ShapeViolation(String),
    #[error("place {r} lies outside edge {edge}")]
    PlaceOutsideEdge { edge: String, r: String },
    #[error("the trunk has no subtree")]
    TrunkNotAllowed,
    #[error("attach depth {0} is not below p/(p-1)")]
    DepthTooHigh(String),
    #[error("no root of the required exponent {required_exponent} exists in this field")]
    NoRootInField { required_exponent: u64 },
    #[error("positivity violated in trunk partition: {0}")]
    NonPositiveSolution(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("search failed at stage {stage}: {detail}")]
    SearchFailed { stage: String, detail: String },
    #[error("target infeasible: {0}")]
    TargetInfeasible(String),
    #[error("unknown id {0}")]
    UnknownId(String),
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
