use thiserror::Error;

/// Errors raised by the library. Per-sample degeneracies (e.g. a zero-length
/// voltage vector in the geometric pipeline) are not errors; they surface as
/// `None` markers in the affected series.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sampling interval must be finite and positive, got {0}")]
    InvalidStep(f64),

    #[error("series needs at least {required} samples, got {actual}")]
    TooShort { required: usize, actual: usize },

    #[error("non-finite value at sample {index}")]
    NonFinite { index: usize },

    #[error("invalid signal spec: {0}")]
    InvalidSpec(String),

    #[error("magnitude at sample {index} is at or below the floor {floor:e}; phase is undefined")]
    BelowMagnitudeFloor { index: usize, floor: f64 },

    #[error("series grids differ: {0}")]
    GridMismatch(String),

    #[error("trace row {row} (line {line}): {reason}")]
    Trace {
        row: usize,
        line: usize,
        reason: String,
    },

    #[error("trace header must be `t,va,vb,vc`, got `{0}`")]
    TraceHeader(String),

    #[error("trace is empty")]
    EmptyTrace,

    #[error("trajectory is not planar: torsion metric {metric:e} exceeds {threshold:e}")]
    NotPlanar { metric: f64, threshold: f64 },

    #[error("trajectory is degenerate: {0}")]
    Degenerate(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
