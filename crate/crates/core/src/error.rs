use std::path::PathBuf;

/// Errors raised across the library.
///
/// Infeasibility (range inclusion failing) is kept distinct from numeric
/// failures so callers can report an efficiency of zero instead of aborting.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },
    #[error("matrix is singular (smallest eigenvalue {eigenvalue:.3e})")]
    Singular { eigenvalue: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index {index} out of range (max {max})")]
    Index { index: usize, max: usize },
    #[error("manifold mismatch: expected {expected}, found {found}")]
    Manifold { expected: String, found: String },
    #[error("design is infeasible: range(K) is not contained in range(M) (rank {rank_m} vs {rank_mk})")]
    Infeasible { rank_m: usize, rank_mk: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failed after {attempts} attempts (residual {residual:.3e})")]
    ConstructionFailed { attempts: usize, residual: f64 },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("invalid data: {0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
