use thiserror::Error;

/// Errors emitted by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: symmetry residual {residual:.3e} exceeds {max_allowed:.3e}")]
    NonHermitian { residual: f64, max_allowed: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below -{max_allowed:.3e}")]
    NotPsd { min_eigenvalue: f64, max_allowed: f64 },

    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("input matrix must be nonzero")]
    ZeroInput,

    #[error("invalid exponent: {reason}")]
    InvalidExponent { reason: String },

    #[error("matrix power requires k >= 1, got {k}")]
    InvalidPower { k: u32 },

    #[error("f(0) = {f_at_zero:.3e} is nonzero; the dilation calculus identity needs f(0) = 0")]
    FZeroViolation { f_at_zero: f64 },

    #[error("block shape mismatch: expected {expected} = outer*inner, got matrix of size {got}")]
    BlockShape { expected: usize, got: usize },

    #[error("entries must be finite (found NaN or infinity)")]
    NonFinite,

    #[error("functional is infeasible: {reason}")]
    Infeasible { reason: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
