use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("pole of {what} at u = {at}")]
    Pole { what: String, at: String },

    #[error("exponent {0} is not a quarter-integer, q^a is not a power of w")]
    NotQuarterIntegral(String),

    #[error("cannot parse rational {0:?}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("unsupported parameter regime: {0}")]
    UnsupportedRegime(String),

    #[error("representation fails relation {relation}")]
    RelationFailure { relation: String },

    #[error("loop inconsistency on edge {edge}: recursion gives {expected}, tree gives {found}")]
    LoopInconsistent {
        edge: String,
        expected: String,
        found: String,
    },

    #[error("intertwining system is inconsistent (null space is trivial)")]
    InconsistentSystem,

    #[error("non-generic sample: null space has dimension {dim}")]
    NonGeneric { dim: usize },

    #[error("no generic sample found after {attempts} attempts")]
    SamplingExhausted { attempts: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
