use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column")]
    Empty,

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("{op}: dimension mismatch ({left:?} vs {right:?})")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("eigenvalue {eigenvalue} lies outside the domain [{lo}, {hi}]")]
    SpectrumOutsideDomain { eigenvalue: f64, lo: f64, hi: f64 },

    #[error("function `{id}` returned a non-finite value at {at}")]
    NonFiniteValue { id: String, at: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not completely positive (minimum Choi eigenvalue {min_eigenvalue:e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("map does not send the identity to a positive definite matrix: {0}")]
    SingularUnit(String),

    #[error("Stinespring reconstruction residual {residual:e} exceeds {bound:e}")]
    Reconstruction { residual: f64, bound: f64 },

    #[error("unknown {what} `{id}`")]
    Unknown { what: &'static str, id: String },

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
