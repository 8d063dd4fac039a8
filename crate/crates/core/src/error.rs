use thiserror::Error;

use crate::statistics::CountRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid calibration: {0}")]
    InvalidCalibration(String),

    #[error("site {site} out of range 1..={n_sites}")]
    SiteOutOfRange { site: usize, n_sites: usize },

    /// The eigensolver did not converge. Carries the matrix dimension and
    /// the largest absolute entry so callers can judge conditioning.
    #[error("eigensolver failed to converge (dimension {dimension}, max |entry| {max_abs:e})")]
    NumericalFailure { dimension: usize, max_abs: f64 },

    #[error("g2 estimate undefined: zero singles in {record:?}")]
    UndefinedEstimate { record: CountRecord },

    #[error(
        "calibration target {target} unreachable in t-bracket [{t_min}, {t_max}]; \
         achieved site-1 confinement range [{achieved_min:.6}, {achieved_max:.6}]"
    )]
    CalibrationFailure {
        target: f64,
        t_min: f64,
        t_max: f64,
        achieved_min: f64,
        achieved_max: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
