//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]; variants carry enough context
//! to name the offending scale, field, or numeric contract in diagnostics.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("grid points must be a power of two, got {0}")]
    PointsNotPowerOfTwo(usize),

    #[error("dimension {0} unsupported (only n = 1 and n = 2 are implemented)")]
    UnsupportedDimension(usize),

    #[error(
        "index window overflows the grid: member l={l}, scale j={j}, shift k={k:?} \
         needs radius {needed:.3} but the grid box half-width is {half_width:.3}"
    )]
    SupportOverflow {
        l: usize,
        j: i32,
        k: Vec<i64>,
        needed: f64,
        half_width: f64,
    },

    #[error("zero function passed to {0}")]
    ZeroFunction(&'static str),

    #[error("measure is inadmissible: {0}")]
    InadmissibleMeasure(String),

    #[error(
        "convolution padding contract violated at scale j={j}: \
         relative boundary mass {mass:.3e} exceeds 1e-6"
    )]
    PaddingViolation { j: i32, mass: f64 },

    #[error("operation unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate atom draw: post-projection norm fell below {floor:.1e} of the draw norm after {retries} retries")]
    DegenerateAtom { floor: f64, retries: u32 },

    #[error("kernel evaluation too close to the diagonal: |x - y| = {0:.3e} <= 1e-6")]
    NearDiagonal(f64),

    #[error("coefficient table length {got} does not match window size {expected}")]
    WeightLength { got: usize, expected: usize },

    #[error("coefficient values not filled: run analysis before synthesis")]
    ValuesMissing,

    #[error("weight table sup {0} exceeds the unit bound required for kernel scans")]
    WeightSup(f64),

    #[error("analysis failed at scale j={j}: {reason}")]
    ScaleFailure { j: i32, reason: String },

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
