use thiserror::Error;

use crate::structure::AxiomReport;

/// Crate-wide error type. Mathematical violations carry enough of a
/// witness to reproduce the failure by hand.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cycle: {0} and {1} are distinct but ordered both ways")]
    Cycle(String, String),
    #[error("unknown element: {0}")]
    UnknownElement(String),
    #[error("unknown point: {0}")]
    UnknownPoint(String),
    #[error("duplicate name: {0}")]
    DuplicateName(String),
    #[error("missing mu entry for point {point} at element {element}")]
    Totality { point: String, element: String },
    #[error("axiom violation:\n{0}")]
    Validation(AxiomReport),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("blocks are not pairwise disjoint: {0}")]
    Disjointness(String),
    #[error("point order is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("combiner law violated on pair ({0}, {1})")]
    CombinerLaw(String, String),
    #[error("map is not surjective: {0} has empty fiber")]
    NotSurjective(String),
    #[error("not a substructure: {0}")]
    NotASubstructure(String),
    #[error("target has no infimum for class {0}")]
    MissingInfimum(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("pre-structure invalid: {0}")]
    PreInvalid(String),
    #[error("extension output failed validation: {0}")]
    PostValidation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("map of point {0} does not decrease: f({0}) is not <= {0}")]
    NotDecreasing(String),
    #[error("scale dimension of a point against itself is undefined")]
    EqualPoints,
    #[error("negative input: {0}")]
    NegativeInput(String),
    #[error("precision lost inverting the tower expansion at {0}")]
    Precision(f64),
    #[error("analytic dimension lies outside the sampling window: {0}")]
    WindowTooSmall(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
