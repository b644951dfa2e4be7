use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid q = {q}: {reason}")]
    InvalidQ { q: u64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("random ensemble failed after {attempts} attempts: {reason}")]
    EnsembleFailure { attempts: usize, reason: String },

    #[error("exhausted {attempts} attempts: {reason}")]
    ExhaustedAttempts { attempts: usize, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("punctured generator lost rank ({before} -> {after})")]
    DimensionDrop { before: usize, after: usize },

    #[error("X and Z checks do not commute: x-row {x_row} (v1 vertex {v1}) vs z-row {z_row} (v0 vertex {v0})")]
    Commutation {
        x_row: usize,
        z_row: usize,
        v1: usize,
        v0: usize,
    },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("flip is not supported on the local view of vertex {vertex}")]
    SupportViolation { vertex: usize },
}

impl Error {
    /// Short machine-readable kind, used for the CLI error stream.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::SizeLimit(_) => "size-limit",
            Error::Parse(_) => "parse",
            Error::InvalidQ { .. } => "invalid-q",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::EnsembleFailure { .. } => "ensemble-failure",
            Error::ExhaustedAttempts { .. } => "exhausted-attempts",
            Error::Precondition(_) => "precondition",
            Error::Invariant(_) => "invariant-violation",
            Error::DimensionDrop { .. } => "dimension-drop",
            Error::Commutation { .. } => "commutation-failure",
            Error::NonConvergence { .. } => "non-convergence",
            Error::SupportViolation { .. } => "support-violation",
        }
    }

    /// True for errors that indicate a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_) | Error::Commutation { .. })
    }
}
