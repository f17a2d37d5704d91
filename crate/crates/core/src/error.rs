use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Bessel order {0} outside supported range |n| <= {max}", max = crate::bessel::MAX_ORDER)]
    BesselOrder(i64),

    #[error("Bessel argument must be finite and non-negative, got {0}")]
    BesselArgument(f64),

    #[error("expected a state in the {expected:?} picture, got {found:?}")]
    PictureMismatch {
        expected: crate::types::Picture,
        found: crate::types::Picture,
    },

    #[error("state has {found} amplitudes, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode picture requires a uniform channel (non-uniform bond couplings given)")]
    NonUniformChannel,

    #[error("channel mode {mode} is resonant with the receiver (omega_k - omega_r = 0)")]
    ResonantChannel { mode: usize },

    #[error("integrator step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("invalid time span [{start}, {end}]")]
    InvalidTimeSpan { start: f64, end: f64 },

    #[error("empty averaging window [{start}, {end}]")]
    EmptyWindow { start: f64, end: f64 },

    #[error("drive cannot produce requested area: {0}")]
    Calibration(String),

    #[error("sweep has no values")]
    EmptySweep,

    #[error("reducer window {window} is shorter than one transfer period {period}")]
    WindowTooShort { window: f64, period: f64 },

    #[error("unknown sweep axis `{0}`")]
    UnknownAxis(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
