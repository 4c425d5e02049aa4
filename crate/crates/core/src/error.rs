use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed polynomial '{input}': {message}")]
    Polynomial { input: String, message: String },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("interior product of a 0-form is undefined")]
    InteriorOfScalar,

    #[error("form of degree {expected} evaluated on {found} vectors")]
    Arity { expected: usize, found: usize },

    #[error("invalid metric: {0}")]
    Metric(String),

    #[error(
        "sqrt(det g) = sqrt({0}) is irrational; exact Hodge star unavailable, use the pointwise numeric mode"
    )]
    IrrationalVolume(String),

    #[error("not a G2 3-form at this point: {0}")]
    NotG2(String),

    #[error("declared metric is not compatible with phi: {0}")]
    Incompatible(String),

    #[error("dα degenerate at {0}: kernel of dα has dimension {1}, expected 1")]
    DegenerateContact(String, usize),

    #[error("α vanishes on the kernel of dα at {0}")]
    AlphaVanishesOnKernel(String),

    #[error("vanishing field: {0}")]
    VanishingField(String),

    #[error("exact mode unavailable: {0}")]
    ExactModeUnavailable(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("scenario error at {path}: {message}")]
    Scenario { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
