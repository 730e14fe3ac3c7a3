use thiserror::Error;

use crate::density::Basis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical input is outside its allowed domain.
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The requested operation is undefined for these parameters
    /// (no field present, nonzero detuning in a dressed-basis routine, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("basis mismatch: expected {expected} basis, got {found}")]
    BasisMismatch { expected: Basis, found: Basis },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("stationary state is not unique (null-space dimension {nullity})")]
    DegenerateSteadyState { nullity: usize },

    #[error("singular linear system: {0}")]
    SingularSystem(&'static str),

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("output error: {0}")]
    Output(String),
}

impl Error {
    /// True for errors caused by the user's configuration rather than by
    /// the computation.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::Domain(_) | Error::Config(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Output(e.to_string())
    }
}
