//! Error type shared by the library.

use thiserror::Error;

/// Errors raised by measure evaluation, validation and audit configuration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of a function (e.g. a non-positive argument).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition was violated (e.g. mis-ordered means).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An index or parameter lies outside its supported range.
    #[error("out of range: {0}")]
    Range(String),

    /// A measure name does not resolve in the registry.
    #[error("unknown measure: {0}")]
    UnknownMeasure(String),

    /// A probability vector contains a non-positive entry at this index.
    #[error("non-positive entry at index {0}")]
    NonPositiveEntry(usize),

    /// A probability vector does not sum to one within tolerance.
    #[error("entries sum to {0}, outside tolerance of 1")]
    SumOutOfTolerance(f64),

    /// Two probability vectors differ in length.
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    /// A vector is too short to be a distribution.
    #[error("a distribution needs at least two entries, got {0}")]
    TooShort(usize),

    /// Malformed input text.
    #[error("parse error: {0}")]
    Parse(String),

    /// Invalid audit or chain configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A ratio denominator vanished away from its removable point.
    #[error("singular denominator at x = {0}")]
    Singularity(f64),

    /// I/O failure while reading an input file.
    #[error("i/o error: {0}")]
    Io(String),
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;
