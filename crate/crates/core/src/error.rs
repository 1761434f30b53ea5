use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state outside the chart: 1 - kappa r^2 = {margin:e} (must be > 0)")]
    Domain { margin: f64 },

    #[error("degenerate origin: r = 0 has no polar angle")]
    DegenerateOrigin,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("trajectory left the domain at t = {last_time} (margin {margin:e})")]
    DomainExit { last_time: f64, margin: f64 },

    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),

    #[error("curvature is zero; use the confluent (Kummer) path")]
    ZeroCurvature,

    #[error("hypergeometric parameters are complex: discriminant {0:e}")]
    ComplexParameters(f64),

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("state is not normalizable: {0}")]
    NonNormalizable(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
