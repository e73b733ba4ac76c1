use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(
        "aperture support [{lo}, {hi}] leaves less than 25% margin in a domain of extent {extent}"
    )]
    ApertureMargin { lo: f64, hi: f64, extent: f64 },

    #[error("slit width {width} is resolved by fewer than 2 samples (dx = {dx})")]
    UnresolvedSlit { width: f64, dx: f64 },

    #[error("dispersion family {0} needs a carrier wavenumber k0")]
    MissingCarrier(&'static str),

    #[error("propagated field vanished (evanescent fraction {evanescent_fraction})")]
    TotalEvanescence { evanescent_fraction: f64 },

    #[error("wraparound guard tripped: edge density is {ratio:e} of peak (limit {limit:e})")]
    Wraparound { ratio: f64, limit: f64 },

    #[error("field file line {line}: {reason}")]
    FieldFile { line: usize, reason: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for the numerical guards (wraparound, total evanescence) as
    /// opposed to malformed input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::Wraparound { .. } | Error::TotalEvanescence { .. }
        )
    }
}
