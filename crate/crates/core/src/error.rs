//! Crate-level error type for everything above the lattice layer.

use crate::lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("negative entry at coordinate {coordinate}: support indicators are defined on nonnegative vectors")]
    NegativeInput { coordinate: usize },
    #[error("kernel point enumeration exceeded the budget of {budget} search nodes")]
    BoxTooLarge { budget: usize },
    #[error("move set would hold {size} signed vectors, beyond the cap of {cap}")]
    SizeBudgetExceeded { size: usize, cap: usize },
    #[error("move {index} is not in the kernel of the matrix")]
    MoveNotInKernel { index: usize },
    #[error("move {index} is the zero vector")]
    ZeroMove { index: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("path endpoints must be distinct vertices")]
    IdenticalEndpoints,
    #[error("fiber is empty")]
    EmptyFiber,
    #[error("vertex {vertex} is isolated, so its walk transition row is undefined")]
    IsolatedVertex { vertex: usize },
    #[error("not a valid transition matrix: {0}")]
    BadTransitionMatrix(String),
    #[error("iteration budget exhausted after {iterations} steps without convergence")]
    NoConvergence { iterations: usize },
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse error: {0}")]
    Parse(String),
}
