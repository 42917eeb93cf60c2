use thiserror::Error;

/// Errors produced by the algebra, spin and eigensolver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    #[error("matrix is singular (pivot magnitude {pivot:e} below {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("dimension overflow: {rows} x {cols} entries is not representable")]
    Sizing { rows: usize, cols: usize },

    #[error("failed to allocate {bytes} bytes")]
    Allocation { bytes: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: ||A - A^H||_F = {defect:e}, allowed {allowed:e}")]
    NotHermitian { defect: f64, allowed: f64 },

    #[error("operator failed the Hermitian probe: |<x,Ay> - <Ax,y>| = {defect:e}")]
    HermitianProbe { defect: f64 },

    #[error("index {index} out of range 1..={n}")]
    Range { index: usize, n: usize },

    #[error("{n} sites exceed the dense capacity of {cap}; use the matrix-free engine")]
    Capacity { n: usize, cap: usize },

    #[error("no convergence after {iterations} iterations (best estimates {estimates:?})")]
    Convergence {
        iterations: usize,
        estimates: Vec<f64>,
    },

    #[error("invalid Hamiltonian spec: {0}")]
    InvalidSpec(String),

    #[error("unknown Kronecker property {0}; expected 1..=8")]
    UnknownProperty(usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Shape {
        op,
        detail: detail.into(),
    }
}
