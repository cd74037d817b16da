//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A finite-difference stencil degenerated (coincident or missing samples).
    #[error("degenerate stencil at sample {index}: {reason}")]
    DegenerateStencil { index: usize, reason: String },

    /// Requested time step exceeds the stability bound.
    #[error("time step {dt:.3e} exceeds CFL bound {bound:.3e}")]
    CflViolation { dt: f64, bound: f64 },

    /// A step was rejected because it broke mean convexity.
    #[error("step rejected: mean convexity lost at sample {index} (H = {h:.3e})")]
    StepRejected { index: usize, h: f64 },

    /// Curvature blow-up beyond the resolvable threshold.
    #[error("singularity detected at t = {time:.6}: max|H|*h = {criterion:.3} at ({x:.4}, {r:.4})")]
    SingularityDetected {
        time: f64,
        criterion: f64,
        x: f64,
        r: f64,
    },

    /// Surface is not a graph over the requested cylinder.
    #[error("surface is not graphical over the cylinder: sample {index} (|q| = {q_norm:.3e})")]
    NotGraphical { index: usize, q_norm: f64 },

    /// Flow terminated before sweeping the grid; the field is partial.
    #[error("flow terminated before sweeping the domain: {unswept} cells unswept")]
    PartialField { unswept: usize },

    /// Trajectory left the domain where the field is defined.
    #[error("trajectory exited the field domain at ({0:?})")]
    DomainExit(Vec<f64>),

    /// Step-count budget exhausted before the stop criterion was met.
    #[error("integration budget of {steps} steps exhausted")]
    StepBudget { steps: usize },

    /// Not enough resolved samples for the requested analysis.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// Log-log fit has too little dynamic range.
    #[error("ill-conditioned fit: samples span {decades:.2} decades (need >= {needed:.1})")]
    IllConditionedFit { decades: f64, needed: f64 },

    /// Frequency function undefined because I(r) vanished.
    #[error("degenerate frequency: I({r:.4}) = {value:.3e} <= 0")]
    DegenerateFrequency { r: f64, value: f64 },

    /// A required upstream artifact is missing.
    #[error("missing dependency: {0}")]
    MissingDependency(String),

    /// Configuration error; carries the offending key.
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed data: {0}")]
    Parse(String),
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
