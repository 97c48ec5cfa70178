//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid current: {0}")]
    InvalidCurrent(String),
    #[error("degenerate simplex {index}: {kind}-volume {volume:.3e} below tolerance {tolerance:.3e}")]
    DegenerateSimplex {
        index: usize,
        kind: usize,
        volume: f64,
        tolerance: f64,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("linear program: {0}")]
    LinearProgram(String),
    #[error("complexes could not be unified: {0}")]
    ComplexMismatch(String),
    #[error("Newton iteration failed at {0:?}")]
    NewtonFailed(Vec<f64>),
    #[error("solver failed: {0}")]
    SolverFailed(String),
    #[error("ambiguous angle branch between samples {0} and {1}")]
    AmbiguousBranch(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis (a3) fails: component {0} is not close to any plane of the cone")]
    ComponentUnmatched(usize),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
