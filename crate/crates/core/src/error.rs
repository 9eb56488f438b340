use thiserror::Error;

/// Errors raised by the geometric constructions and the checks built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A finite-difference stencil or evaluation point left the declared domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A matrix that should be an almost-complex structure is not (‖S²+Id‖ too large).
    #[error("structure error: ‖S²+Id‖ = {residual:.3e} exceeds {tol:.1e}")]
    Structure { residual: f64, tol: f64 },
    /// Singular or indefinite metric.
    #[error("metric error: {0}")]
    Metric(String),
    /// A model-level precondition failed (negative curvature operator, bad weights, ...).
    #[error("model error: {0}")]
    Model(String),
    /// Level-set Newton solve hit a point where the group does not act freely.
    #[error("non-free point: orbit/normal frame rank deficient (condition {cond:.3e})")]
    NonFree { cond: f64 },
    /// Newton iteration failed to converge.
    #[error("no convergence after {iters} iterations (residual {residual:.3e})")]
    Convergence { iters: usize, residual: f64 },
    /// Bad dimensions or malformed input.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Evaluation at a pole.
    #[error("pole: {0}")]
    Pole(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
