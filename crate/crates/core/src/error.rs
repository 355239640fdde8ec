use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {value} at index {index} is outside [0, 1]")]
    CoordinateOutOfRange { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size overflow: {0}")]
    Overflow(String),

    #[error("cell {cell}: measure {measure} differs from 1/N = {expected} (defect {defect:e})")]
    MeasureMismatch {
        cell: usize,
        measure: f64,
        expected: f64,
        defect: f64,
    },

    #[error("cells {cell_a} and {cell_b} overlap with volume {volume:e}")]
    Overlap {
        cell_a: usize,
        cell_b: usize,
        volume: f64,
    },

    #[error("cells do not cover the unit cube: total measure {total} (defect {defect:e})")]
    CoverageGap { total: f64, defect: f64 },

    #[error("cell {cell} has zero measure")]
    ZeroMeasureCell { cell: usize },

    #[error("invalid box in cell {cell}: {reason}")]
    InvalidBox { cell: usize, reason: String },

    #[error("enumeration budget exceeded: {required} grid evaluations > budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("cell {cell} mixes exact and heuristic records")]
    MixedMethods { cell: String },

    #[error("method {method} is infeasible for cell {cell} and heuristic fallback is disabled")]
    InfeasibleMethod { method: String, cell: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
