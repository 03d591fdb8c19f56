use thiserror::Error;

/// Errors raised by the library. Mathematical check failures are never
/// errors; they are reported as values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series is not symmetric: swapping roots x{i} and x{j} changes the coefficient of {monomial}")]
    SymmetryViolation { i: usize, j: usize, monomial: String },

    #[error("invalid model data: {0}")]
    InvalidModel(String),

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("forbidden multiplicity: component `{component}` has multiplicity {mult} = -d")]
    ForbiddenMultiplicity { component: String, mult: i64 },

    #[error("invalid stratum table: {0}")]
    InvalidTable(String),

    #[error("blow-up precondition violated: {0}")]
    Precondition(String),

    #[error("invalid Hodge diamond: {0}")]
    InvalidDiamond(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
