use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree r = {0} is outside the supported range 2..=16")]
    DegreeOutOfRange(u32),
    #[error("polynomial {f:#x} does not have degree {r}")]
    DegreeMismatch { f: u32, r: u32 },
    #[error("polynomial {0:#x} is not primitive")]
    NotPrimitive(u32),
    #[error("stored lift {stored:?} differs from the lift {expected:?} of f")]
    LiftMismatch { stored: Vec<u8>, expected: Vec<u8> },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("construction check failed: {0}")]
    Construction(String),
    #[error("data word {0:?} lies outside the data space")]
    DataWord(Vec<u8>),
    #[error("user index {0} out of range")]
    UserOutOfRange(usize),
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("coefficient blocks overlap: {0}")]
    Overlap(String),
    #[error("identity check failed: {0}")]
    Identity(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
