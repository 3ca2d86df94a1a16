use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent vector has {found} entries, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("not a linear form: {0}")]
    NotLinear(String),
    #[error("series constant term must be a nonzero rational")]
    NonInvertibleSeries,
}
