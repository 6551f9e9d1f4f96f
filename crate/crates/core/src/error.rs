use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid array geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("excitation vector has zero norm")]
    ZeroExcitation,

    #[error("sphere quadrature produced a non-finite result")]
    Quadrature,

    #[error("cannot build {variant}: {reason}")]
    Architecture { variant: String, reason: String },

    #[error("operation not supported by {variant}: {reason}")]
    Unsupported { variant: String, reason: String },

    #[error("analog state does not match the architecture layout: {0}")]
    StateLayout(String),

    #[error("channel is rank deficient (condition number {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("transmit power must be positive, got {0}")]
    NonPositivePower(f64),

    #[error("invalid illumination geometry: {0}")]
    Illumination(String),

    #[error("{0}")]
    InvalidArgument(String),
}
