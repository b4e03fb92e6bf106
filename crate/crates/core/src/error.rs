use thiserror::Error;

use crate::flag::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rational {0:?}; expected \"p\" or \"p/q\"")]
    InvalidRational(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hyperplane {index} has zero linear part")]
    ZeroLinearPart { index: usize },

    #[error("hyperplanes {first} and {second} define the same affine hyperplane")]
    DuplicateHyperplane { first: usize, second: usize },

    #[error("flag needs {expected} forms with independent linear parts")]
    DegenerateFlag { expected: usize },

    #[error("flag rejected: {0}")]
    FlagViolation(Box<Violation>),

    #[error("no valid flag after {rounds} rounds{}", last.as_ref().map(|v| format!(" (last violation: {v})")).unwrap_or_default())]
    FlagGenerationFailed { rounds: usize, last: Option<Box<Violation>> },

    #[error("strata at levels {left} and {right} cannot be compared")]
    LevelMismatch { left: usize, right: usize },

    #[error("point is not in the complement: it lies on the complexification of hyperplane {hyperplane}")]
    NotInComplement { hyperplane: usize },

    #[error("point lies on hyperplanes {hyperplanes:?}")]
    OnBoundary { hyperplanes: Vec<usize> },

    #[error("hyperplane index {index} out of range for {len} hyperplanes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("index tuple repeats hyperplane {0}")]
    RepeatedIndex(usize),

    #[error("index tuple {0:?} is dependent")]
    DependentIndices(Vec<usize>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("classification routes disagree: brute force {brute:?}, constructive {constructive}")]
    RouteDisagreement { brute: Vec<usize>, constructive: usize },

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}
