//! Dimensionless parameters of the pump-driven two-level exciton.
//!
//! Rabi frequencies and detunings are normalised by the dephasing time `t2`,
//! so dipole moments and field envelopes never appear on their own.

use num_complex::Complex64;

use crate::error::{ensure_finite, invalid, Result};

/// Exciton dephasing time used throughout the reference scenario, seconds.
pub const REFERENCE_T2: f64 = 3.0e-13;
/// Exciton lifetime of the reference scenario, seconds.
pub const REFERENCE_T1: f64 = 1.5e-11;
/// Reference pump Rabi frequency (dimensionless).
pub const REFERENCE_OMEGA_C: f64 = 0.3;
/// Reference pump-exciton detuning (dimensionless).
pub const REFERENCE_DELTA_C: f64 = 0.05;
/// Probe wavelength corresponding to the 2.34 eV interband transition, metres.
pub const REFERENCE_WAVELENGTH: f64 = 530.0e-9;

/// Driven two-level configuration shared by every closed-form result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Exciton lifetime T1, seconds.
    pub t1: f64,
    /// Exciton dephasing time T2, seconds.
    pub t2: f64,
    /// Pump Rabi frequency scaled by T2.
    pub omega_c: f64,
    /// Pump-exciton detuning (omega_ex - omega_c) * T2.
    pub delta_c: f64,
}

impl SystemParams {
    pub fn new(t1: f64, t2: f64, omega_c: f64, delta_c: f64) -> Result<Self> {
        let params = Self {
            t1,
            t2,
            omega_c,
            delta_c,
        };
        params.validate()?;
        Ok(params)
    }

    /// The room-temperature quantum-dot scenario: T2 = 0.3 ps, T1 = 15 ps,
    /// Omega_c = 0.3, Delta_c = 0.05.
    pub fn reference() -> Self {
        Self {
            t1: REFERENCE_T1,
            t2: REFERENCE_T2,
            omega_c: REFERENCE_OMEGA_C,
            delta_c: REFERENCE_DELTA_C,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("t1", self.t1)?;
        ensure_finite("t2", self.t2)?;
        ensure_finite("omega_c", self.omega_c)?;
        ensure_finite("delta_c", self.delta_c)?;
        if self.t1 <= 0.0 {
            return Err(invalid(
                "t1",
                format!("lifetime must be positive, got {}", self.t1),
            ));
        }
        if self.t2 <= 0.0 {
            return Err(invalid(
                "t2",
                format!("dephasing time must be positive, got {}", self.t2),
            ));
        }
        if self.omega_c < 0.0 {
            return Err(invalid(
                "omega_c",
                format!("must be non-negative, got {}", self.omega_c),
            ));
        }
        Ok(())
    }

    /// T2 / T1, the population decay rate in units of the dephasing rate.
    pub fn decay_ratio(&self) -> f64 {
        self.t2 / self.t1
    }

    /// T1 / T2.
    pub fn lifetime_ratio(&self) -> f64 {
        self.t1 / self.t2
    }

    pub fn with_omega_c(self, omega_c: f64) -> Self {
        Self { omega_c, ..self }
    }

    pub fn with_delta_c(self, delta_c: f64) -> Self {
        Self { delta_c, ..self }
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::reference()
    }
}

/// Probe-exciton detuning Delta_s = (omega_s - omega_ex) * T2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProbeDetuning {
    pub delta_s: f64,
}

impl ProbeDetuning {
    pub fn new(delta_s: f64) -> Result<Self> {
        ensure_finite("delta_s", delta_s)?;
        Ok(Self { delta_s })
    }

    /// Probe-pump beat detuning delta_c = Delta_s + Delta_c.
    pub fn beat(&self, params: &SystemParams) -> f64 {
        self.delta_s + params.delta_c
    }
}

/// Dimensionless linear susceptibility of the probe.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexSusceptibility {
    pub re: f64,
    pub im: f64,
}

impl ComplexSusceptibility {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm(&self) -> f64 {
        self.as_complex().norm()
    }
}

impl From<Complex64> for ComplexSusceptibility {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Refractive index and absorption derived from a susceptibility value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalConstants {
    pub n: f64,
    /// Absorption coefficient, 1/m.
    pub alpha: f64,
    /// Probe wavelength, m.
    pub lambda: f64,
}
