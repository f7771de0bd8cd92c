//! Error type shared by the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("axis {axis} out of range for an order-{order} tensor")]
    AxisOutOfRange { axis: usize, order: usize },

    #[error("axis {axis} appears twice in the contraction pair list")]
    DuplicateAxis { axis: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },

    #[error("index tuple has length {got}, expected {order}")]
    IndexLength { got: usize, order: usize },

    #[error("index component {value} at axis {axis} outside 1..={dim}")]
    IndexOutOfRange { axis: usize, value: usize, dim: usize },

    #[error("duplicate index tuple {0:?}")]
    DuplicateEntry(Vec<usize>),

    #[error("tensor is marked symmetric but values differ on the orbit of {0:?}")]
    SymmetryFlag(Vec<usize>),

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimTooLarge { dim: usize, max: usize },

    #[error("order {order} outside the supported range {min}..={max}")]
    OrderRange { order: usize, min: usize, max: usize },

    #[error("invalid set partition: {0}")]
    InvalidPartition(String),

    #[error("flattened block size {size} exceeds the cap {cap}")]
    BlockTooLarge { size: u128, cap: u128 },

    #[error("diagram rows hold {total} vertices, more than the cap {cap}")]
    VertexCap { total: usize, cap: usize },

    #[error("row {row} must hold at least one vertex")]
    EmptyRow { row: usize },

    #[error("expected {expected} kernels, got {got}")]
    KernelCount { expected: usize, got: usize },

    #[error("{what} = {got} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}
