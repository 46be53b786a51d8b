use thiserror::Error;

/// Failure modes shared by every engine in the crate.
///
/// The split between [`Error::Infeasible`] and [`Error::SolverGaveUp`] matters:
/// the first is a certified negative answer, the second only says the search
/// stopped without finding a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("modulus mismatch: expected {expected}, got {got}")]
    ModulusMismatch { expected: usize, got: usize },
    #[error("factor or orientation belongs to a different host graph")]
    HostMismatch,
    #[error("factors overlap on edge {0}")]
    Overlap(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("solver gave up: {0}")]
    SolverGaveUp(String),
    #[error("{what} exceeds limit {limit} (got {got})")]
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn hypothesis<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Hypothesis(msg.into()))
}

/// Whether an engine verifies its theorem's hypotheses before running.
///
/// `Assume` skips the checks so callers can probe below the stated
/// thresholds; outputs are still verified against the conclusion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Hypotheses {
    #[default]
    Verify,
    Assume,
}

impl Hypotheses {
    pub fn verify(self) -> bool {
        self == Hypotheses::Verify
    }
}
