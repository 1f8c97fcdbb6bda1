use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-exact division: ({dividend}) / ({divisor})")]
    NonExactDivision { dividend: String, divisor: String },
    #[error("cannot substitute into negative power of {var}: value {value} is not invertible")]
    NonInvertibleSubstitution { var: String, value: String },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
