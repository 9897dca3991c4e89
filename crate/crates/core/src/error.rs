use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain specification: {0}")]
    InvalidSpec(String),

    #[error("length mismatch: expected {expected} on-site energies, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigensolver did not converge within {max_iterations} iterations")]
    NoConvergence { max_iterations: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("site {site} out of range for a chain of {n} sites")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("no antisymmetric state with both particles on site {0}")]
    PauliExclusion(usize),

    #[error("operation requires a {expected} decomposition, got {actual}")]
    WrongSubspace { expected: String, actual: String },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("empty intensity series")]
    EmptySeries,

    #[error("intensity series has zero mean")]
    ZeroMean,

    #[error("all {0} samples fall outside the histogram range")]
    AllUnderflow(usize),

    #[error("invalid distribution parameter: {0}")]
    InvalidParameter(String),

    #[error("no {model} fit for contrast {contrast}: {reason}")]
    FitFailed {
        model: &'static str,
        contrast: f64,
        reason: String,
    },

    #[error("diffuse background is empty: all phasor weight is dominant")]
    EmptyBackground,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
