use std::fmt;

/// A single failed hypothesis of a degree decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    TooFewBands { m: usize },
    NonPositive { j: usize, r: i64 },
    SumMismatch { expected: i64, actual: i64 },
    BelowLowerBound { j: usize, r: i64 },
    AboveUpperBound { j: usize, r: i64 },
    NonPositiveConstant,
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooFewBands { m } => write!(f, "need at least 2 band counts, got {m}"),
            Self::NonPositive { j, r } => write!(f, "r_{j} = {r} is not positive"),
            Self::SumMismatch { expected, actual } => {
                write!(
                    f,
                    "r_M + 2(r_1 + ... + r_(M-1)) = {actual}, expected N = {expected}"
                )
            }
            Self::BelowLowerBound { j, r } => write!(f, "r_{j} = {r} is below c1*{j}"),
            Self::AboveUpperBound { j, r } => write!(f, "r_{j} = {r} is above c2*{j}"),
            Self::NonPositiveConstant => write!(f, "growth constants must satisfy 0 < c1 <= c2"),
        }
    }
}

fn join(violations: &[PartitionViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degree {degree} is out of range: {reason}")]
    Domain { degree: i64, reason: &'static str },

    #[error("invalid partition: {}", join(.0))]
    InvalidPartition(Vec<PartitionViolation>),

    #[error("precision of {bits} bits is below the minimum of {min}")]
    PrecisionTooLow { bits: usize, min: usize },

    #[error("quadrature grid has {nodes} nodes, at least {required} required")]
    GridTooCoarse { nodes: usize, required: usize },

    #[error("invalid quadrature grid: {0}")]
    InvalidGrid(String),

    #[error("singular evaluation: {0}")]
    Singular(&'static str),

    #[error("points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),

    #[error("factors {0} and {1} share a root")]
    RepeatedRoot(usize, usize),

    #[error("invalid factor {index}: {reason}")]
    InvalidFactor { index: usize, reason: &'static str },

    #[error("point set needs at least {min} points, got {got}")]
    TooFewPoints { got: usize, min: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
