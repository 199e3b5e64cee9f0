use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate sample at index {index}: |X_u| = {speed:.3e}")]
    DegenerateSample { index: usize, speed: f64 },

    #[error("affine map is singular (|det| = {det:.3e})")]
    SingularMap { det: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("classification is ambiguous at tolerance: {}", flags.join(", "))]
    BoundaryCase { flags: Vec<String> },

    #[error("case {0} requires the parameter a")]
    MissingParameter(&'static str),

    #[error("parameter a = {value} outside the admissible range for case {case}")]
    InvalidParameter { case: &'static str, value: f64 },

    #[error("time {t} outside [0, {t_max})")]
    TimeOutOfRange { t: f64, t_max: f64 },

    #[error("quadrature did not converge (estimated error {estimate:.3e}, requested {requested:.3e})")]
    QuadratureFailure { estimate: f64, requested: f64 },

    #[error("invalid constants for family: {0}")]
    InvalidConstants(String),

    #[error("step size underflow at {at} (h = {step:.3e})")]
    StepUnderflow { at: f64, step: f64 },

    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),

    #[error("scooper window touches the pole w = 1 (margin {margin})")]
    WindowTouchesPole { margin: f64 },

    #[error("seam mismatch {mismatch:.3e} exceeds {limit:.1e}")]
    SeamMismatch { mismatch: f64, limit: f64 },

    #[error("trajectory cannot start at the origin")]
    SingularStart,

    #[error("bisection endpoints classify identically ({0})")]
    BracketFailure(String),

    #[error("trajectory holds {found} full oscillations, {needed} needed")]
    TooFewOscillations { found: usize, needed: usize },

    #[error("trajectory is not in the required regime: {0}")]
    WrongRegime(String),

    #[error("curve is not a soliton for the given data (residual {residual:.3e})")]
    NotASoliton { residual: f64 },

    #[error("csv: {0}")]
    Csv(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
