//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Structurally malformed input (missing unit, non-involutive dual, bad shapes).
    #[error("malformed input: {0}")]
    Malformed(String),
    /// Input file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// Unsupported schema version in an input file.
    #[error("schema version mismatch: expected 1, found {0}")]
    SchemaVersionMismatch(u64),
    /// The category failed validation.
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    /// A 3-cocycle (or 2-cocycle) failed its cocycle equation.
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    /// A combination of group and cocycle name is not in the library.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Unknown built-in name.
    #[error("unknown name: {0}")]
    UnknownName(String),
    /// Subgroup is not normal.
    #[error("not normal: {0}")]
    NotNormal(String),
    /// The pivotal normalisation |F^{aāa}_{a;0,0}| = 1/d_a fails.
    #[error("gauge violation: {0}")]
    GaugeViolation(String),
    /// Vectors of mismatched length.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// Spectral clustering was ambiguous for every seed tried.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    /// An element expected to be an idempotent is not.
    #[error("not idempotent: {0}")]
    NotIdempotent(String),
    /// The vacuum block could not be identified.
    #[error("vacuum idempotent not found")]
    VacuumNotFound,
    /// The twist does not act as a scalar on a block.
    #[error("T is not scalar on block {block}: residual {residual:e}")]
    NonScalarT { block: usize, residual: f64 },
    /// Verlinde multiplicities are not integral.
    #[error("non-integer fusion: max residual {0:e}")]
    NonIntegerFusion(f64),
    /// No unique dual could be determined.
    #[error("dual ambiguous for block {0}")]
    DualAmbiguous(usize),
    /// An operation requiring a one-dimensional block received a larger one.
    #[error("block {0} is degenerate")]
    DegenerateBlock(usize),
    /// A generic projection vanished for every seed tried.
    #[error("zero projection: {0}")]
    ZeroProjection(String),
    /// A domain-wall image matched no idempotent.
    #[error("no matching idempotent: {0}")]
    NoMatchingIci(String),
    /// Unknown fixture name.
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    /// I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Result alias.
pub type Result<T> = std::result::Result<T, Error>;
