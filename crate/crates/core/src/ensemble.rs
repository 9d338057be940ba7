//! Inhomogeneous broadening over a Gaussian spread of pump-exciton detunings.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::params::{ComplexSusceptibility, ProbeDetuning, SystemParams};
use crate::susceptibility::susceptibility;

/// Which laser detuning is shared by every dot while averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetuningConvention {
    /// The pump-probe beat is common to all dots; each dot sees its own
    /// probe detuning `beat - Delta_g`.
    #[default]
    FixedBeat,
    /// Every dot sees the nominal probe detuning; the beat varies per dot.
    FixedProbe,
}

/// Gaussian distribution of pump-exciton detunings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    /// Distribution centre (dimensionless Delta_c).
    pub center: f64,
    /// Half-width sigma_c = sigma * T2.
    pub sigma_c: f64,
    /// Integration range in units of sigma_c on each side.
    pub truncation: f64,
    /// Odd number of Simpson nodes.
    pub nodes: usize,
    pub convention: DetuningConvention,
}

impl EnsembleSpec {
    pub const DEFAULT_TRUNCATION: f64 = 6.0;
    pub const DEFAULT_NODES: usize = 257;
    /// Relative change allowed when the node count is doubled.
    pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

    pub fn new(center: f64, sigma_c: f64) -> Result<Self> {
        let spec = Self {
            center,
            sigma_c,
            truncation: Self::DEFAULT_TRUNCATION,
            nodes: Self::DEFAULT_NODES,
            convention: DetuningConvention::FixedBeat,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("center", self.center)?;
        ensure_finite("sigma_c", self.sigma_c)?;
        ensure_finite("truncation", self.truncation)?;
        if self.sigma_c < 0.0 {
            return Err(invalid(
                "sigma_c",
                format!("must be non-negative, got {}", self.sigma_c),
            ));
        }
        if self.truncation < 4.0 {
            return Err(invalid(
                "truncation",
                format!("must be at least 4, got {}", self.truncation),
            ));
        }
        if self.nodes < 33 || self.nodes.is_multiple_of(2) {
            return Err(invalid(
                "nodes",
                format!("must be odd and >= 33, got {}", self.nodes),
            ));
        }
        Ok(())
    }

    fn range(&self) -> (f64, f64) {
        let half = self.truncation * self.sigma_c;
        (self.center - half, self.center + half)
    }
}

/// Gaussian weight G(Delta_g) of the detuning distribution.
pub fn gaussian_weight(spec: &EnsembleSpec, delta_g: f64) -> Result<f64> {
    if spec.sigma_c == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    spec.validate()?;
    Ok(weight(spec, delta_g))
}

fn weight(spec: &EnsembleSpec, delta_g: f64) -> f64 {
    let z = (delta_g - spec.center) / spec.sigma_c;
    (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * spec.sigma_c)
}

/// Composite Simpson rule on `nodes` equally spaced points over `[lo, hi]`.
///
/// The samples are summed in index order so the result does not depend on
/// how `f` was evaluated.
pub fn simpson<F>(lo: f64, hi: f64, nodes: usize, f: F) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if nodes < 3 || nodes.is_multiple_of(2) {
        return Err(invalid(
            "nodes",
            format!("Simpson needs an odd count >= 3, got {nodes}"),
        ));
    }
    let h = (hi - lo) / (nodes - 1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let x = if k == nodes - 1 {
            hi
        } else {
            lo + k as f64 * h
        };
        let coeff = if k == 0 || k == nodes - 1 {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += coeff * f(x)?;
    }
    Ok(acc * h / 3.0)
}

/// Quadrature of the Gaussian weight over the truncated range.
pub fn weight_normalization(spec: &EnsembleSpec) -> Result<f64> {
    if spec.sigma_c == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    spec.validate()?;
    let (lo, hi) = spec.range();
    Ok(simpson(lo, hi, spec.nodes, |x| {
        Ok(Complex64::new(weight(spec, x), 0.0))
    })?
    .re)
}

fn dot_response(
    params: &SystemParams,
    spec: &EnsembleSpec,
    probe: &ProbeDetuning,
    delta_g: f64,
) -> Result<Complex64> {
    let dot = params.with_delta_c(delta_g);
    let probe = match spec.convention {
        DetuningConvention::FixedBeat => {
            // beat fixed by the nominal lasers: delta_s + center
            let beat = probe.delta_s + spec.center;
            ProbeDetuning {
                delta_s: beat - delta_g,
            }
        }
        DetuningConvention::FixedProbe => *probe,
    };
    Ok(susceptibility(&dot, &probe)?.as_complex())
}

fn weighted_average(
    params: &SystemParams,
    spec: &EnsembleSpec,
    probe: &ProbeDetuning,
    nodes: usize,
) -> Result<Complex64> {
    let (lo, hi) = spec.range();
    let norm = simpson(lo, hi, nodes, |x| Ok(Complex64::new(weight(spec, x), 0.0)))?.re;
    let integral = simpson(lo, hi, nodes, |x| {
        Ok(weight(spec, x) * dot_response(params, spec, probe, x)?)
    })?;
    Ok(integral / norm)
}

/// Susceptibility averaged over the detuning distribution.
///
/// `params.delta_c` is ignored in favour of `spec.center`. A zero width falls
/// back to the point evaluation. The result is checked against a run with
/// twice as many intervals.
pub fn averaged_susceptibility(
    params: &SystemParams,
    spec: &EnsembleSpec,
    probe: &ProbeDetuning,
) -> Result<ComplexSusceptibility> {
    params.validate()?;
    spec.validate()?;
    if spec.sigma_c == 0.0 {
        return susceptibility(&params.with_delta_c(spec.center), probe);
    }
    let coarse = weighted_average(params, spec, probe, spec.nodes)?;
    let fine = weighted_average(params, spec, probe, 2 * spec.nodes - 1)?;
    let scale = coarse.norm().max(f64::MIN_POSITIVE);
    let relative_change = (fine - coarse).norm() / scale;
    if !(relative_change <= EnsembleSpec::CONVERGENCE_TOLERANCE) {
        return Err(Error::Convergence { relative_change });
    }
    Ok(coarse.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(center: f64, sigma_c: f64) -> EnsembleSpec {
        EnsembleSpec::new(center, sigma_c).unwrap()
    }

    #[test]
    fn weight_shape() {
        let s = spec(0.05, 0.15);
        let peak = gaussian_weight(&s, 0.05).unwrap();
        assert!((peak - 2.659_615_202_676_218).abs() < 1e-12);
        let one_sigma = gaussian_weight(&s, 0.2).unwrap();
        assert!((one_sigma - peak * (-0.5f64).exp()).abs() < 1e-12);
        assert_eq!(
            gaussian_weight(&spec(0.0, 0.0), 0.0),
            Err(Error::DegenerateDistribution)
        );
    }

    #[test]
    fn weight_normalizes() {
        let n = weight_normalization(&spec(0.05, 0.15)).unwrap();
        // erf(6 / sqrt 2): mass of the Gaussian inside six half-widths
        let truncated = 1.0 - 1.973_175_290_075_34e-9;
        assert!((n - truncated).abs() < 1e-12, "{n}");
        assert!((1.0 - 1e-6..=1.0).contains(&n));
    }

    #[test]
    fn invalid_specs() {
        assert!(EnsembleSpec::new(0.0, -0.1).is_err());
        let mut s = spec(0.0, 0.1);
        s.nodes = 32;
        assert!(s.validate().is_err());
        s.nodes = 34;
        assert!(s.validate().is_err());
        s.nodes = 33;
        s.truncation = 3.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn constant_integrand_is_exact() {
        let c = Complex64::new(0.3, -1.7);
        let s = spec(0.05, 0.15);
        let (lo, hi) = s.range();
        let integral = simpson(lo, hi, s.nodes, |x| Ok(weight(&s, x) * c)).unwrap();
        let norm = weight_normalization(&s).unwrap();
        assert!((integral / norm - c).norm() < 1e-15);
    }

    #[test]
    fn narrow_distribution_matches_point() {
        let params = SystemParams::reference();
        let probe = ProbeDetuning { delta_s: 0.0 };
        let point = susceptibility(&params, &probe).unwrap().as_complex();
        let avg = averaged_susceptibility(&params, &spec(0.05, 1e-9), &probe)
            .unwrap()
            .as_complex();
        assert!((avg - point).norm() < 1e-6 * point.norm());
        let zero = averaged_susceptibility(&params, &spec(0.05, 0.0), &probe)
            .unwrap()
            .as_complex();
        assert_eq!(zero, point);
    }

    #[test]
    fn broadening_lowers_unpumped_peak() {
        let params = SystemParams::reference().with_omega_c(0.0);
        let probe = ProbeDetuning { delta_s: 0.0 };
        let s = spec(0.05, 0.15);
        let avg = averaged_susceptibility(&params, &s, &probe).unwrap();
        let mut reference = s;
        reference.nodes = 4097;
        let dense = weighted_average(&params, &reference, &probe, reference.nodes).unwrap();
        assert!(avg.im < 1.0);
        assert!((avg.as_complex() - dense).norm() < 1e-10);
    }

    #[test]
    fn node_doubling_is_stable_at_reference_point() {
        let params = SystemParams::reference();
        let probe = ProbeDetuning { delta_s: 0.0 };
        for &sigma in &[0.05, 0.15] {
            let s = spec(0.05, sigma);
            let coarse = weighted_average(&params, &s, &probe, s.nodes).unwrap();
            let fine = weighted_average(&params, &s, &probe, 2 * s.nodes - 1).unwrap();
            assert!((coarse.re - fine.re).abs() < 1e-8);
            assert!((coarse.im - fine.im).abs() < 1e-8);
        }
    }

    #[test]
    fn conventions_agree_at_zero_width_and_differ_otherwise() {
        let params = SystemParams::reference();
        let probe = ProbeDetuning { delta_s: 0.3 };
        let mut beat = spec(0.05, 0.15);
        let mut fixed = beat;
        fixed.convention = DetuningConvention::FixedProbe;
        let a = averaged_susceptibility(&params, &beat, &probe).unwrap();
        let b = averaged_susceptibility(&params, &fixed, &probe).unwrap();
        assert!((a.as_complex() - b.as_complex()).norm() > 1e-6);
        beat.sigma_c = 0.0;
        fixed.sigma_c = 0.0;
        assert_eq!(
            averaged_susceptibility(&params, &beat, &probe).unwrap(),
            averaged_susceptibility(&params, &fixed, &probe).unwrap()
        );
    }
}
