//! Brute-force check of the closed-form susceptibility.
//!
//! The mean-field Bloch equations are integrated in dimensionless time
//! `tau = t / T2` under the bichromatic drive `Omega(tau) = Omega_c +
//! Omega_s exp(-i beat tau)`, and the polarization component oscillating at
//! the probe frequency is demodulated from the settled trajectory:
//!
//! ```text
//! dq/dtau = -(1 + i Delta_c) q - i w Omega(tau)
//! dw/dtau = -(T2/T1)(w + 1) + 4 Im(q conj(Omega(tau)))
//! ```
//!
//! `q` is the polarization divided by the dipole moment. The drive enters
//! with unit weight (rather than one half) because the dimensionless Rabi
//! frequency of the closed form is half the field-dipole coupling rate; with
//! this scaling `chi = q_1 / Omega_s` and the pump-only inversion both agree
//! with [`crate::susceptibility`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::params::{ComplexSusceptibility, ProbeDetuning, SystemParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest inversion change tolerated in a single RK4 step.
pub const MAX_STEP_JUMP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Probe Rabi amplitude Omega_s.
    pub omega_s: f64,
    /// Settling time before the measurement window; `None` means 30 T1/T2.
    pub settle_time: Option<f64>,
    /// Number of beat periods averaged by the demodulator.
    pub demod_periods: usize,
    /// Target RK4 step; `None` means min(0.01, beat period / 2000).
    pub step: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            omega_s: 1e-4,
            settle_time: None,
            demod_periods: 8,
            step: None,
        }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        ensure_finite("omega_s", self.omega_s)?;
        if self.omega_s < 0.0 {
            return Err(invalid("omega_s", "must be non-negative"));
        }
        if let Some(settle) = self.settle_time {
            ensure_finite("settle_time", settle)?;
            if settle <= 0.0 {
                return Err(invalid("settle_time", "must be positive"));
            }
        }
        if self.demod_periods < 2 {
            return Err(invalid("demod_periods", "must be at least 2"));
        }
        if let Some(step) = self.step {
            ensure_finite("step", step)?;
            if step <= 0.0 {
                return Err(invalid("step", "must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub q: Complex64,
    pub w: f64,
}

impl BlochState {
    pub fn ground() -> Self {
        Self {
            q: Complex64::new(0.0, 0.0),
            w: -1.0,
        }
    }
}

/// Samples of the settled trajectory over the demodulation window.
#[derive(Debug, Clone)]
pub struct BlochTrace {
    pub tau: Vec<f64>,
    pub states: Vec<BlochState>,
    /// Actual RK4 step (an integer fraction of the beat period).
    pub step: f64,
    pub beat: f64,
    /// Extremes over the whole integration, settling included.
    pub min_w: f64,
    pub max_w: f64,
    pub max_abs_q: f64,
}

impl BlochTrace {
    pub fn polarization(&self) -> Vec<Complex64> {
        self.states.iter().map(|s| s.q).collect()
    }

    pub fn mean_inversion(&self) -> f64 {
        // the last sample repeats the first phase of the window
        let n = self.states.len() - 1;
        self.states[..n].iter().map(|s| s.w).sum::<f64>() / n as f64
    }
}

struct Drive {
    omega_c: f64,
    omega_s: f64,
    beat: f64,
    detuning: f64,
    decay: f64,
}

impl Drive {
    fn field(&self, tau: f64) -> Complex64 {
        self.omega_c + self.omega_s * Complex64::cis(-self.beat * tau)
    }

    fn rhs(&self, tau: f64, s: &BlochState) -> BlochState {
        let field = self.field(tau);
        BlochState {
            q: -(1.0 + I * self.detuning) * s.q - I * s.w * field,
            w: -self.decay * (s.w + 1.0) + 4.0 * (s.q * field.conj()).im,
        }
    }

    fn rk4(&self, tau: f64, h: f64, s: &BlochState) -> BlochState {
        let shift = |a: &BlochState, k: &BlochState, f: f64| BlochState {
            q: a.q + k.q * f,
            w: a.w + k.w * f,
        };
        let k1 = self.rhs(tau, s);
        let k2 = self.rhs(tau + 0.5 * h, &shift(s, &k1, 0.5 * h));
        let k3 = self.rhs(tau + 0.5 * h, &shift(s, &k2, 0.5 * h));
        let k4 = self.rhs(tau + h, &shift(s, &k3, h));
        BlochState {
            q: s.q + (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q) * (h / 6.0),
            w: s.w + (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w) * (h / 6.0),
        }
    }
}

/// Integrates from the ground state with fixed-step RK4 and returns the
/// trajectory over the final `demod_periods` beat periods.
pub fn integrate_bloch(
    params: &SystemParams,
    probe: &ProbeDetuning,
    cfg: &OracleConfig,
) -> Result<BlochTrace> {
    params.validate()?;
    cfg.validate()?;
    ensure_finite("delta_s", probe.delta_s)?;
    let beat = probe.beat(params);
    if beat == 0.0 {
        return Err(Error::ZeroBeat);
    }
    let period = 2.0 * PI / beat.abs();
    let target = cfg.step.unwrap_or_else(|| 0.01f64.min(period / 2000.0));
    let per_period = (period / target).ceil() as usize;
    let h = period / per_period as f64;
    let settle = cfg.settle_time.unwrap_or(30.0 * params.lifetime_ratio());
    let settle_steps = (settle / h).ceil() as usize;
    let window_steps = cfg.demod_periods * per_period;

    let drive = Drive {
        omega_c: params.omega_c,
        omega_s: cfg.omega_s,
        beat,
        detuning: params.delta_c,
        decay: params.decay_ratio(),
    };

    let mut state = BlochState::ground();
    let mut trace = BlochTrace {
        tau: Vec::with_capacity(window_steps + 1),
        states: Vec::with_capacity(window_steps + 1),
        step: h,
        beat,
        min_w: state.w,
        max_w: state.w,
        max_abs_q: 0.0,
    };

    let total = settle_steps + window_steps;
    for k in 0..=total {
        if k >= settle_steps {
            trace.tau.push(k as f64 * h);
            trace.states.push(state);
        }
        if k == total {
            break;
        }
        let next = drive.rk4(k as f64 * h, h, &state);
        let jump = (next.w - state.w).abs();
        if !(jump <= MAX_STEP_JUMP) || !next.q.norm().is_finite() {
            return Err(Error::Stability { jump, step: h });
        }
        state = next;
        trace.min_w = trace.min_w.min(state.w);
        trace.max_w = trace.max_w.max(state.w);
        trace.max_abs_q = trace.max_abs_q.max(state.q.norm());
    }
    Ok(trace)
}

/// Amplitude of the `exp(-i beat tau)` component of `series` over a window
/// of whole beat periods, by the trapezoid rule.
pub fn demodulate_first_harmonic(
    tau: &[f64],
    series: &[Complex64],
    beat: f64,
) -> Result<Complex64> {
    if tau.len() != series.len() || tau.len() < 3 {
        return Err(invalid(
            "series",
            "needs at least three samples with matching times",
        ));
    }
    if beat == 0.0 {
        return Err(Error::ZeroBeat);
    }
    let span = tau[tau.len() - 1] - tau[0];
    let periods = span * beat.abs() / (2.0 * PI);
    let whole = periods.round();
    if whole < 2.0 || (periods - whole).abs() > 1e-9 * whole {
        return Err(Error::Leakage { periods });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..tau.len() {
        let a = series[k - 1] * Complex64::cis(beat * tau[k - 1]);
        let b = series[k] * Complex64::cis(beat * tau[k]);
        acc += 0.5 * (a + b) * (tau[k] - tau[k - 1]);
    }
    Ok(acc / span)
}

/// Susceptibility extracted from the time-domain trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub chi: ComplexSusceptibility,
    /// Probe amplitude the estimate was measured with.
    pub omega_s: f64,
    pub step: f64,
}

pub fn oracle_susceptibility(
    params: &SystemParams,
    probe: &ProbeDetuning,
    cfg: &OracleConfig,
) -> Result<OracleEstimate> {
    if !(cfg.omega_s > 0.0) {
        return Err(invalid("omega_s", "the probe amplitude must be positive"));
    }
    let trace = integrate_bloch(params, probe, cfg)?;
    let q1 = demodulate_first_harmonic(&trace.tau, &trace.polarization(), trace.beat)?;
    Ok(OracleEstimate {
        chi: (q1 / cfg.omega_s).into(),
        omega_s: cfg.omega_s,
        step: trace.step,
    })
}
