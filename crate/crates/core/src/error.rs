use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension must be even and at least {min}, got {n}")]
    BadDimension { n: usize, min: usize },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("curvature tensor violates {0}")]
    Symmetry(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator is not Laplace-type: {0}")]
    NotLaplaceType(String),
    #[error("leading symbol is not invertible")]
    NotInvertible,
    #[error("invalid power {0}; must be positive")]
    BadPower(i64),
    #[error("power {power} is not supported here; expected {allowed}")]
    UnsupportedPower { power: i64, allowed: String },
    #[error("symbol of order {found} where order {expected} is required")]
    WrongOrder { expected: i32, found: i32 },
    #[error("homogeneity {wanted} was truncated away (symbol keeps {lowest}..={leading})")]
    Truncated { wanted: i32, lowest: i32, leading: i32 },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Decomposition(String),
    #[error("{0}")]
    Eval(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
