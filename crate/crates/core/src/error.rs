use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidSpec(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("code of size {0} exceeds the supported maximum of 3")]
    CodeSize(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("solver did not converge after {iterations} iterations (gap {gap:.3e}, infeasibility {infeas:.3e})")]
    NonConvergence { iterations: usize, gap: f64, infeas: f64 },

    #[error("numerical breakdown: {0}")]
    Conditioning(String),

    #[error("certification failed: guard {guard:.3e} too large (objective {objective})")]
    Certification { guard: f64, objective: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("verification mismatch: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
