use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("root order must be odd and at least 3, got {0}")]
    InvalidOrder(i64),
    #[error("exponent {exponent} has denominator {denominator} not invertible modulo l = {order}")]
    NonInvertibleDenominator {
        exponent: String,
        denominator: String,
        order: u32,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected {expected} coefficients for l = {order}, got {got}")]
    CoefficientCount {
        order: u32,
        expected: usize,
        got: usize,
    },
    #[error("malformed scalar: {0}")]
    Malformed(String),
}
