//! Library-wide error type.

use thiserror::Error;

/// Errors produced by curve construction, analysis, and verification.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("{op}: argument {value} outside domain ({detail})")]
    Domain {
        op: &'static str,
        value: f64,
        detail: &'static str,
    },

    /// A non-finite value (NaN or infinity) was passed where a finite one is required.
    #[error("{op}: non-finite input")]
    NonFinite { op: &'static str },

    /// A parameter fell outside its admissible range.
    #[error("{op}: {what} = {value} outside [{lo}, {hi}]")]
    Range {
        op: &'static str,
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// Geometric degeneracy: a stationary point, repeated sample, or
    /// near-singular matrix where a regular configuration is required.
    #[error("degenerate input at index {index}: {detail}")]
    Degenerate { index: usize, detail: &'static str },

    /// A curvature ratio touched or escaped the open band.
    #[error("band violation at cell {cell}: ratio {ratio} not strictly inside ({kappa1}, {kappa2})")]
    BandViolation {
        cell: usize,
        ratio: f64,
        kappa1: f64,
        kappa2: f64,
    },

    /// An operation that requires the constant-speed parameterization was
    /// handed a raw-parameterized curve.
    #[error("{op}: curve must be in constant-speed parameterization")]
    NotConstantSpeed { op: &'static str },

    /// A verification check was invoked on an input violating its precondition.
    #[error("precondition violated: {detail}")]
    Precondition { detail: String },

    /// Malformed input file.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
