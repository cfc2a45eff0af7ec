use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("invalid preset: {0}")]
    InvalidPreset(String),

    /// Parameters violate the hypotheses of the analysis that was requested.
    /// The message names the violated constraint.
    #[error("inadmissible parameters: {0}")]
    InadmissibleParameters(String),

    /// `initial_v` needs n > 0; with n = 0 the caller must supply v0 itself.
    #[error("initialization undefined: {0}")]
    InitializationUndefined(String),

    #[error("numerical failure at iteration {iteration}: {message}")]
    NumericalFailure { iteration: usize, message: String },

    /// Integration produced a non-finite state; `t` is the last good time.
    #[error("integration diverged; last good time t = {t}")]
    IntegrationDiverged { t: f64 },

    #[error("index error: {0}")]
    IndexError(String),

    /// Time-dependent damping n(t) = p/t is singular below t0.
    #[error("singular time: t = {t} is below t0 = {t0}")]
    SingularTime { t: f64, t0: f64 },

    /// The evaluator needs x* or f* and the objective does not carry them.
    #[error("missing optimum data: {0}")]
    MissingOptimum(String),

    /// Closed-form certificate entries only exist along the documented
    /// substitution path (lambda = q, n = q).
    #[error("unsupported analysis path: {0}")]
    UnsupportedPath(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A quantity the theory pins down failed its own recomputation check.
    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("empty series")]
    EmptySeries,
}

pub type Result<T> = std::result::Result<T, Error>;
