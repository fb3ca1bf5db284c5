use thiserror::Error;

/// Errors produced by the bound, minimization, simulation and estimation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Pedram pole: {detail}")]
    PedramPole { detail: String },

    #[error("no minimum exists for HUP: the bound hbar/(4 dP) has infimum 0")]
    NoMinimum,

    #[error("no closed-form minimum for gamma = {gamma} (use the numeric minimizer)")]
    UnsupportedAnalytic { gamma: f64 },

    #[error("unsupported particle count N = {n}: {reason}")]
    UnsupportedParticleCount { n: u32, reason: &'static str },

    #[error("failed to bracket a minimum: {0}")]
    Bracket(String),

    #[error("grid too small: {detail}; try x in [{suggest_min}, {suggest_max}]")]
    GridTooSmall {
        detail: String,
        suggest_min: f64,
        suggest_max: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no real roots: discriminant negative for beta = {beta} (beta_crit = {beta_crit})")]
    NoRealRoots { beta: f64, beta_crit: f64 },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("fixture format error: {0}")]
    Fixture(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
