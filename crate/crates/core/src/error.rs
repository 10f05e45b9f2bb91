use thiserror::Error;

use crate::picard::Space;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus index {index} out of range 0..={max} on {space}")]
    IndexOutOfRange { index: u32, max: u32, space: Space },

    #[error("point label {label} outside 1..={n}")]
    PointOutOfRange { label: u32, n: u32 },

    #[error("label {label} does not belong to {space}")]
    LabelNotInSpace { label: String, space: Space },

    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: Space, right: Space },

    #[error("class is not S_n-invariant: {0}")]
    NotInvariant(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("enumeration bound exceeded: {0}")]
    EnumerationBound(String),

    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(u64, u64),

    #[error("quasireflection present in group: {0} (quasireflection quotients are not modelled)")]
    QuasireflectionPresent(String),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("parse error: {0}")]
    Parse(String),
}
