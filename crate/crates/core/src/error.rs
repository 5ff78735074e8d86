use evalrep_cyclotomic::ScalarError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("index {what} out of range for rank {n}")]
    IndexOutOfRange { what: String, n: usize },
    #[error("affine constructions need rank n >= 2, got n = {0}")]
    RankTooSmall(usize),
    #[error("invalid module parameters: {0}")]
    InvalidParams(String),
    #[error("module dimension l^N = {l}^{big_n} is too large")]
    DimensionTooLarge { l: u32, big_n: usize },
    #[error("operator maps the subspace outside itself (image of basis vector {0})")]
    NotInvariant(usize),
    #[error("v(0) is not a highest weight vector for the extraction word")]
    NotHighestWeight,
    #[error("lambda_{0} = 0, so the Drinfel'd root is undetermined")]
    ZeroWeight(usize),
    #[error("descent form {kind} needs a {expected}-type sequence")]
    KindMismatch { kind: String, expected: String },
    #[error("generator {0} is not available on this module")]
    MissingGenerator(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
