use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time grid too coarse: {samples_per_cycle:.1} samples per optical cycle (minimum {minimum})")]
    GridTooCoarse { samples_per_cycle: f64, minimum: f64 },

    #[error("time {time} a.u. is outside the tabulated range [{start}, {end}]")]
    OutsideTable { time: f64, start: f64, end: f64 },

    #[error("integrator step {step} a.u. resolves the fastest oscillation (period {period} a.u.) with fewer than {required} points")]
    StepTooLarge { step: f64, period: f64, required: f64 },

    #[error("detection time {time} a.u. lies inside the optical pulse (|A| = {vector_potential:e})")]
    DetectionInsidePulse { time: f64, vector_potential: f64 },

    #[error("underdamped regime required: Rabi frequency {rabi} must exceed half the decay rate {half_gamma}")]
    Overdamped { rabi: f64, half_gamma: f64 },

    #[error("Bessel function out of range: order {order}, argument {argument}")]
    BesselDomain { order: i64, argument: f64 },

    #[error("Bessel sum truncated at n_max = {n_max}, need at least {required}")]
    Truncation { n_max: usize, required: usize },

    #[error("negative radicand {value} in angular factor 1 + beta P2(cos theta)")]
    NegativeRadicand { value: f64 },

    #[error("unknown bound state index {0}")]
    UnknownState(usize),

    #[error("x-ray pulse [{lo:.2}, {hi:.2}] fs is not contained in the optical plateau [{plateau_lo:.2}, {plateau_hi:.2}] fs")]
    OffPlateau { lo: f64, hi: f64, plateau_lo: f64, plateau_hi: f64 },

    #[error("empty spectrum or zero total probability")]
    EmptySpectrum,

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error("malformed range: {0}")]
    MalformedRange(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), message: err.to_string() }
    }
}
