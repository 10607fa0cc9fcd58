use thiserror::Error;

/// Errors raised by validation, the linear kernels, the steppers, and the
/// stability toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has a negative off-diagonal entry at ({row}, {col})")]
    NotMetzler { row: usize, col: usize },
    #[error("column {col} does not sum to zero (|sum| = {residual:e})")]
    NotConservative { col: usize, residual: f64 },
    #[error("matrix is identically zero")]
    ZeroMatrix,
    #[error("matrix must be square with dimension at least 2 (got {rows}x{cols})")]
    BadShape { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular to working precision (pivot {pivot})")]
    Singular { pivot: usize },
    #[error("interpolation nodes are not strictly increasing at index {index}")]
    DuplicateNodes { index: usize },
    #[error("rational function has a pole at z = {re} + {im}i")]
    PoleAt { re: f64, im: f64 },
    #[error("stage value {stage} has a non-positive entry at component {component}")]
    NonPositiveStage { stage: usize, component: usize },
    #[error("Patankar weight denominator is non-positive at component {component}")]
    NonPositiveSigma { component: usize },
    #[error("rate function returned a negative or non-finite value at ({row}, {col})")]
    InvalidRate { row: usize, col: usize },
    #[error("state has a non-positive entry at component {component}")]
    NonPositiveState { component: usize },
    #[error("time step must be positive and finite")]
    InvalidTimeStep,
    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("order {order} outside the supported range {min}..={max}")]
    OrderOutOfRange { order: usize, min: usize, max: usize },
    #[error("Newton iteration for Gauss-Lobatto node {index} did not converge")]
    NewtonDivergence { index: usize },
    #[error("|R| stays below one on the sampled ray up to r = {limit}")]
    NoCrossing { limit: f64 },
    #[error("unknown test problem `{0}`")]
    UnknownProblem(String),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("step {step} failed: {source}")]
    AtStep { step: usize, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;
