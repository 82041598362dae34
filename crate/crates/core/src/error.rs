use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("vector must have at least one entry")]
    EmptyVector,
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("matrix dimensions must be positive")]
    EmptyShape,
    #[error("entry ({row}, {col}) outside a {n_rows}x{n_cols} matrix")]
    OutOfBounds { row: usize, col: usize, n_rows: usize, n_cols: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("operator maps both random starts to zero")]
    ZeroOperator,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SetError {
    /// The linear objective is identically zero; every feasible point is a minimizer.
    #[error("zero direction passed to the linear minimization oracle")]
    ZeroDirection,
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("lp exponent must lie in (1, inf), got {0}")]
    InvalidExponent(f64),
    #[error("direction has dimension {found}, set expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObjectiveError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scale must be positive, got {0}")]
    InvalidScale(f64),
    #[error("observation mask is empty")]
    EmptyMask,
    #[error("label {value} at row {row} is not in {{-1, +1}}")]
    InvalidLabel { row: usize, value: f64 },
    #[error("problem has no data rows")]
    NoData,
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("starting point is not feasible")]
    InfeasibleStart,
    #[error("constraint set does not expose a Euclidean projection")]
    MissingProjection,
    #[error("objective has no strong convexity constant")]
    MissingStrongConvexity,
    #[error("max_iters must be at least 1")]
    InvalidStoppingRule,
    #[error("step size {delta} at k = {k} is outside (0, 1]")]
    InvalidStep { k: usize, delta: f64 },
    #[error(transparent)]
    Set(#[from] SetError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("trace holds {available} records, need {needed}")]
    IncompleteTrace { needed: usize, available: usize },
    #[error("only {usable} usable rows in the rate window, need at least 10")]
    EmptyWindow { usable: usize },
    #[error("negative optimality gap {gap:e} at k = {k}; f_star is too large")]
    NegativeGap { k: usize, gap: f64 },
    #[error("invalid window [{0}, {1}]")]
    InvalidWindow(usize, usize),
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}: {text:?}")]
    MalformedLine { line: usize, text: String, reason: String },
    #[error("more than two label values: {values:?}")]
    NonBinaryLabels { values: Vec<f64> },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
