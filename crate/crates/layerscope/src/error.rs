use thiserror::Error;

/// Errors produced by construction and by dimension-checked operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix is not Hermitian: max |M - M†| entry is {residual:.3e} (tolerance {tol:.3e})")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("operator is not positive semidefinite: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("Kraus operators are not complete: max |ΣK†K - I| entry is {residual:.3e}")]
    KrausIncomplete { residual: f64 },

    #[error("channel is not trace preserving: max |Tr_out[J] - I| entry is {residual:.3e}")]
    NotTracePreserving { residual: f64 },

    #[error("instrument total map is not trace preserving: residual {residual:.3e}")]
    InstrumentNotTracePreserving { residual: f64 },

    #[error("basis is not orthonormal: max |V†V - I| entry is {residual:.3e}")]
    BasisNotOrthonormal { residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("outcome count mismatch: {0}")]
    OutcomeMismatch(String),

    #[error("observable list is empty")]
    EmptyObservable,

    #[error("trivial observable supplied where a non-trivial one is required")]
    TrivialObservable,

    #[error("bisection bracket failure: {0}")]
    BracketFailure(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
