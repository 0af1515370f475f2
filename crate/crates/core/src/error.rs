use crate::numerics::Complex;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures reported by the engine. Numerical failures are surfaced, never
/// papered over with a guessed value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: u32, residual: f64 },

    #[error("Newton step undefined: derivative vanished at {at}")]
    DerivativeVanished { at: Complex },

    #[error("{count} root(s) did not reach tolerance (worst residual {worst:e})")]
    UnconvergedRoots { count: usize, worst: f64 },

    #[error("seeds #{first} and #{second} of {group} converged to the same root {root}")]
    SeedCollision {
        group: &'static str,
        first: usize,
        second: usize,
        root: Complex,
    },

    #[error("precondition failed: {check}")]
    Precondition { check: String },

    #[error("curve continuation is ambiguous at sample {index} even with {samples} samples")]
    ContinuationBreak { index: usize, samples: usize },

    #[error("bracket failure on [{lo}, {hi}]: {reason}")]
    BracketFailure { lo: f64, hi: f64, reason: String },

    #[error("ray vote inconclusive ({hits} of {rays} rays)")]
    InconclusiveRay { hits: usize, rays: usize },

    #[error("invalid plane: {0}")]
    InvalidPlane(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn precondition(check: impl Into<String>) -> Self {
        Error::Precondition {
            check: check.into(),
        }
    }

    /// Whether this failure means the structural preconditions do not hold
    /// (as opposed to bad input or a solver breakdown).
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
