use thiserror::Error;

/// Crate-wide error type. Every fallible operation returns one of these
/// variants rather than panicking, so callers (in particular the CLI) can
/// distinguish bad input from numerical failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("invalid subsystem layout: {0}")]
    InvalidLayout(String),

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("data length {got} does not match expected length {want}")]
    LengthMismatch { got: usize, want: usize },

    #[error("operator is not hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("degenerate filter: acceptance probability {0:.3e} is below 1e-14")]
    DegenerateFilter(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("eigensolver failed to converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid rational literal `{0}`")]
    RationalParse(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("non-finite value in numerical input")]
    NonFinite,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
