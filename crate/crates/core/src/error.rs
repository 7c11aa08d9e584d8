use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("point (x = {x}, t = {t}) is outside the flow domain")]
    OutOfDomain { x: f64, t: f64 },

    #[error("support leaks out of the sampling window: {0}")]
    SupportLeak(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("jet mismatch: {0}")]
    JetMismatch(String),

    #[error("symbol is not invertible on the loop (min modulus {min_modulus:e})")]
    NonFredholm { min_modulus: f64 },

    #[error("loop is under-resolved: argument-principle residual {residual:.3e}")]
    UnderResolved { residual: f64 },

    #[error("input does not decay: |f| = {value:e} at truncation point {at}")]
    NonDecaying { at: f64, value: f64 },

    #[error("inadmissible diffeomorphism: {0}")]
    InadmissibleDiffeomorphism(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
