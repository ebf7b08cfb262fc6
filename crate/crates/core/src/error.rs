use thiserror::Error;

/// Errors surfaced by the solver and its operators.
#[derive(Debug, Error)]
pub enum Error {
    /// `analyze` called with fewer grid points than the band limit requires.
    #[error("grid too coarse for band limit {band_limit}: need at least {needed} samples, got {got}")]
    GridTooCoarse {
        band_limit: usize,
        needed: usize,
        got: usize,
    },

    /// Input samples or coefficients contain NaN/inf.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// Negative-order Sobolev norms are only defined for mean-zero fields.
    #[error("negative-order norm requires a mean-zero field (|c_0| = {mean:e})")]
    MeanZeroRequired { mean: f64 },

    /// Wasserstein inputs must carry the same mass.
    #[error("mass mismatch between densities: {mu} vs {nu} (relative {rel:e})")]
    MassMismatch { mu: f64, nu: f64, rel: f64 },

    /// A string configuration or flow map lost strict monotonicity.
    #[error("{context}: sequence not strictly increasing at index {index}")]
    NotMonotone { context: &'static str, index: usize },

    /// Flow seeds do not match the configuration positions.
    #[error("flow seeds do not match string configuration (first mismatch at index {index})")]
    SeedMismatch { index: usize },

    /// The synthesized field lost positivity during time stepping.
    #[error("positivity lost at t = {t} (min sample {min:e}); step size too large")]
    PositivityLoss { t: f64, min: f64 },

    /// The adaptive step fell below the hard floor.
    #[error("time step underflow at t = {t} (dt = {dt:e})")]
    StepUnderflow { t: f64, dt: f64 },

    /// A check or operation was invoked outside its hypotheses.
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    /// Malformed configuration file or override.
    #[error("config error: {0}")]
    Config(String),

    /// Malformed data file.
    #[error("parse error in {context}: {detail}")]
    Parse { context: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
