use thiserror::Error;

/// Errors produced by matrix construction, decompositions, spec evaluation
/// and check configuration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    Dimension {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("matrix entries must be finite (offending entry at row {row}, col {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: ||M - M*||_F = {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not positive semi-definite: lambda_min = {lambda_min:.6e}")]
    NotPsd { lambda_min: f64 },

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {off_diag:.3e})"
    )]
    NonConvergence { sweeps: usize, off_diag: f64 },

    #[error("eigenvalue {eigenvalue} of the argument lies outside the domain [{lo}, {hi}] of `{function}`")]
    DomainViolation {
        function: String,
        eigenvalue: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("majorization precondition violated: partial sum {index} has {lhs:.6e} > {rhs:.6e}")]
    MajorizationViolated { index: usize, lhs: f64, rhs: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
