use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature exhausted its refinement levels without meeting tolerance.
    #[error("quadrature did not converge: estimate {value}, error estimate {error_estimate}")]
    Quadrature { value: f64, error_estimate: f64 },

    /// A bracketing root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// A sign scan found more than one root where exactly one was expected.
    #[error("expected a unique root but found {count} sign changes")]
    MultipleRoots { count: usize, brackets: Vec<(f64, f64)> },

    /// The λ-landscape does not exist for this function.
    #[error("no λ-landscape: {0}")]
    NoLandscape(String),

    /// The blowup set is only defined when the standing wave has positive energy.
    #[error("blowup set undefined: E(φ_ω) = {energy} is not positive")]
    UndefinedSet { energy: f64 },

    /// A function was paired with a grid of a different size.
    #[error("grid mismatch: expected {expected} values, got {actual}")]
    GridMismatch { expected: usize, actual: usize },

    /// The tridiagonal solve broke down or missed its residual tolerance.
    #[error("linear solver failure: {0}")]
    Solver(String),

    /// Too few uniformly spaced trace records for a second difference.
    #[error("insufficient records: need at least {needed}, have {have}")]
    InsufficientRecords { needed: usize, have: usize },

    /// A precondition of an operation does not hold for the given input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed input file or record.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable snake_case tag, used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Quadrature { .. } => "quadrature",
            Error::NoSignChange { .. } => "no_sign_change",
            Error::MultipleRoots { .. } => "multiple_roots",
            Error::NoLandscape(_) => "no_landscape",
            Error::UndefinedSet { .. } => "undefined_set",
            Error::GridMismatch { .. } => "grid_mismatch",
            Error::Solver(_) => "solver",
            Error::InsufficientRecords { .. } => "insufficient_records",
            Error::Precondition(_) => "precondition",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    /// True for errors caused by the caller's input rather than by a
    /// numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::GridMismatch { .. } | Error::Precondition(_) | Error::Parse(_) | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
