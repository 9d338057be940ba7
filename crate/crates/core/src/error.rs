use thiserror::Error;

/// Errors raised by the simulation kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("susceptibility denominator vanishes (|D| = {magnitude:e})")]
    Singularity { magnitude: f64 },

    #[error("degenerate distribution: sigma_c = 0, use the point evaluation")]
    DegenerateDistribution,

    #[error("quadrature did not converge: relative change {relative_change:e} on node doubling")]
    Convergence { relative_change: f64 },

    #[error("zero beat detuning: demodulation needs delta_s + delta_c != 0")]
    ZeroBeat,

    #[error("integration unstable: |dw| = {jump:e} in one step of size {step:e}")]
    Stability { jump: f64, step: f64 },

    #[error("demodulation window spans {periods} beat periods, expected an integer >= 2")]
    Leakage { periods: f64 },

    #[error("pump profile leaves its domain: b*psi + c = {value:e} <= 0")]
    ProfileDomain { value: f64 },

    #[error("undersampled raster: {what} of {length:e} m needs at least {min_pixels} pixels of pitch {pitch:e} m")]
    Sampling {
        what: &'static str,
        length: f64,
        pitch: f64,
        min_pixels: usize,
    },

    #[error("flat azimuthal response: |Re chi(2pi) - Re chi(0)| = {delta:e}")]
    FlatResponse { delta: f64 },

    #[error("geometry mismatch: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}
