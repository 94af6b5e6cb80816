use thiserror::Error;

/// Errors raised anywhere in the interpolation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MsnError {
    #[error("point {point:?} lies outside the {domain} domain")]
    Domain { domain: &'static str, point: Vec<f64> },

    #[error("basis ordinal {ordinal} out of range for dimension {dimension}")]
    Index { ordinal: usize, dimension: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("length mismatch: expected {expected}, got {got} ({what})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("constraint system is empty")]
    EmptySystem,

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("system infeasible at tolerance: numerical rank 0, relative residual {residual:e}")]
    Infeasible { residual: f64 },

    #[error("oracle inapplicable: row {row} is numerically dependent on earlier rows")]
    OracleInapplicable { row: usize },

    #[error("gram matrix not positive definite after jitter (pivot estimate {smallest_eigenvalue_estimate:e})")]
    Conditioning { smallest_eigenvalue_estimate: f64 },
}

pub type Result<T> = std::result::Result<T, MsnError>;
