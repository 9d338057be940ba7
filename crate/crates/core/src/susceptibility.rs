//! Steady-state pump-probe susceptibility of a driven two-level exciton.
//!
//! The polarization and inversion are expanded to first order in the probe
//! around the pump-only steady state; the beat between pump and probe drives
//! a population oscillation at the beat frequency, which is what opens the
//! narrow transparency hole at the probe resonance.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::params::{ComplexSusceptibility, OpticalConstants, ProbeDetuning, SystemParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Smallest |D| accepted before the response is treated as singular.
pub const SINGULARITY_FLOOR: f64 = 1e-300;

/// Steady-state inversion w0 under the pump alone.
///
/// The self-consistency `w0 = -4 Omega^2 w0 (T1/T2) / (1 + Delta^2) - 1` is
/// linear in `w0`, so it is solved in closed form. Always in `[-1, 0)`.
pub fn population_inversion(params: &SystemParams) -> Result<f64> {
    params.validate()?;
    let detuning = 1.0 + params.delta_c * params.delta_c;
    let saturation = 4.0 * params.omega_c * params.omega_c * params.lifetime_ratio();
    Ok(-detuning / (detuning + saturation))
}

/// Denominator D(delta_beat) of the first-order probe response.
pub fn cpo_denominator(params: &SystemParams, delta_beat: f64) -> Result<Complex64> {
    params.validate()?;
    ensure_finite("delta_beat", delta_beat)?;
    Ok(denominator(params, delta_beat))
}

fn denominator(params: &SystemParams, beat: f64) -> Complex64 {
    let dc2 = params.delta_c * params.delta_c;
    let one_minus_ib = Complex64::new(1.0, -beat);
    let relax = Complex64::new(params.decay_ratio(), -beat);
    relax * (1.0 + dc2) * (one_minus_ib * one_minus_ib + dc2)
        + 4.0 * params.omega_c * params.omega_c * one_minus_ib * (1.0 + dc2)
}

/// Linear susceptibility seen by the probe at detuning `probe`.
pub fn susceptibility(
    params: &SystemParams,
    probe: &ProbeDetuning,
) -> Result<ComplexSusceptibility> {
    ensure_finite("delta_s", probe.delta_s)?;
    let w0 = population_inversion(params)?;
    let beat = probe.beat(params);
    let dc = params.delta_c;

    let prefactor = -I * w0 / (1.0 + I * (dc - beat));
    if params.omega_c == 0.0 {
        return Ok(prefactor.into());
    }

    let d = denominator(params, beat);
    let magnitude = d.norm();
    if !(magnitude >= SINGULARITY_FLOOR) {
        return Err(Error::Singularity { magnitude });
    }
    let coupling = (1.0 + I * dc) * (1.0 - I * (dc + beat)) * (2.0 - I * beat);
    let bracket = 1.0 - 2.0 * params.omega_c * params.omega_c / d * coupling;
    Ok((prefactor * bracket).into())
}

/// Refractive index `n = 1 + Re(chi)/2` and absorption `alpha = 2 pi Im(chi) / lambda`.
pub fn optical_constants(chi: &ComplexSusceptibility, lambda: f64) -> Result<OpticalConstants> {
    ensure_finite("lambda", lambda)?;
    if lambda <= 0.0 {
        return Err(invalid(
            "lambda",
            format!("wavelength must be positive, got {lambda}"),
        ));
    }
    Ok(OpticalConstants {
        n: 1.0 + 0.5 * chi.re,
        alpha: 2.0 * PI * chi.im / lambda,
        lambda,
    })
}

/// Intensity transmission `exp(-alpha d)` through a slab of thickness `d`.
///
/// For `alpha >= 0` the value lies in `[0, 1]`. Negative `alpha` (gain) is
/// returned unclamped and is above one; see [`is_gain`].
pub fn transmission(alpha: f64, thickness: f64) -> Result<f64> {
    ensure_finite("alpha", alpha)?;
    ensure_finite("thickness", thickness)?;
    if thickness < 0.0 {
        return Err(invalid(
            "thickness",
            format!("must be non-negative, got {thickness}"),
        ));
    }
    let t = (-alpha * thickness).exp();
    if alpha >= 0.0 {
        Ok(t.clamp(0.0, 1.0))
    } else {
        Ok(t)
    }
}

pub fn is_gain(alpha: f64) -> bool {
    alpha < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(omega_c: f64, delta_c: f64) -> SystemParams {
        SystemParams::reference()
            .with_omega_c(omega_c)
            .with_delta_c(delta_c)
    }

    fn chi(omega_c: f64, delta_c: f64, delta_s: f64) -> Complex64 {
        susceptibility(&params(omega_c, delta_c), &ProbeDetuning { delta_s })
            .unwrap()
            .as_complex()
    }

    #[test]
    fn inversion_limits() {
        assert_eq!(population_inversion(&params(0.0, 0.7)).unwrap(), -1.0);
        let symmetric = SystemParams::new(1.0, 1.0, 0.5, 0.0).unwrap();
        assert!((population_inversion(&symmetric).unwrap() + 0.5).abs() < 1e-15);
        // hand evaluation: -1.0025 / (1.0025 + 18)
        let w0 = population_inversion(&SystemParams::reference()).unwrap();
        assert!((w0 + 0.052_756_216_287_33).abs() < 1e-12, "{w0}");
    }

    #[test]
    fn inversion_rejects_bad_lifetimes() {
        let bad = SystemParams {
            t1: 0.0,
            ..SystemParams::reference()
        };
        assert!(matches!(
            population_inversion(&bad),
            Err(Error::InvalidParameter { name: "t1", .. })
        ));
        assert!(SystemParams::new(1e-11, -1.0, 0.3, 0.0).is_err());
        assert!(SystemParams::new(1e-11, 1e-13, -0.1, 0.0).is_err());
        assert!(SystemParams::new(1e-11, 1e-13, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn denominator_reference_values() {
        let d = cpo_denominator(&params(0.0, 0.0), 0.0).unwrap();
        assert!((d - Complex64::new(0.02, 0.0)).norm() < 1e-15);

        let d = cpo_denominator(&params(0.3, 0.05), 0.05).unwrap();
        assert!(
            (d - Complex64::new(0.375_937_5, -0.070_175)).norm() < 1e-12,
            "{d}"
        );

        let d = cpo_denominator(&params(1.0, 0.05), 0.05).unwrap();
        assert!(
            (d - Complex64::new(4.025_037_5, -0.252_63)).norm() < 1e-12,
            "{d}"
        );
    }

    #[test]
    fn zero_pump_is_lorentzian() {
        assert!((chi(0.0, 0.05, 0.0) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((chi(0.0, 0.05, 1.0) - Complex64::new(-0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn reference_point_has_transparency_hole() {
        let value = chi(0.3, 0.05, 0.0);
        // independent complex evaluation of the closed form in double precision
        let expected = Complex64::new(0.005_479_482_272_301_127, 0.003_069_935_756_741_916_7);
        assert!(
            (value - expected).norm() < 1e-14 * expected.norm(),
            "{value}"
        );
    }

    #[test]
    fn optical_constants_and_transmission() {
        let lambda = 530e-9;
        let vac = optical_constants(&ComplexSusceptibility::default(), lambda).unwrap();
        assert_eq!(vac.n, 1.0);
        assert_eq!(vac.alpha, 0.0);

        let dark = optical_constants(&ComplexSusceptibility { re: 0.0, im: 0.4 }, lambda).unwrap();
        assert!((dark.alpha - 4.742_026_646_9e6).abs() < 1.0);
        let ad = dark.alpha * 71e-6;
        assert!((ad - 336.683_891_93).abs() < 1e-6, "{ad}");
        let t = transmission(dark.alpha, 71e-6).unwrap();
        assert!((t.ln() + 336.683_891_93).abs() < 1e-6);

        let n = optical_constants(
            &ComplexSusceptibility {
                re: 0.005479,
                im: 0.0,
            },
            lambda,
        )
        .unwrap()
        .n;
        assert!((n - 1.002_739_5).abs() < 1e-15);

        assert_eq!(transmission(0.0, 71e-6).unwrap(), 1.0);
        assert!(transmission(330.0, 1.0).unwrap() < 1e-140);
        assert!(transmission(-1.0, 1.0).unwrap() > 1.0);
        assert!(is_gain(-1.0));
        assert!(transmission(1.0, -1e-6).is_err());
        assert!(optical_constants(&ComplexSusceptibility::default(), 0.0).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        for &omega in &[0.0, 0.1, 0.3, 1.0] {
            for &dc in &[0.0, 0.05, 0.5, -0.7] {
                for &ds in &[-2.0, -0.3, 0.0, 0.4, 3.0] {
                    let a = chi(omega, dc, ds);
                    let b = chi(omega, -dc, -ds);
                    assert!((b + a.conj()).norm() < 1e-12, "{omega} {dc} {ds}");
                }
            }
        }
    }

    #[test]
    fn hole_deepens_with_pump() {
        let off = chi(0.0, 0.05, 0.0).im;
        let mid = chi(0.3, 0.05, 0.0).im;
        let strong = chi(1.0, 0.05, 0.0).im;
        assert_eq!(off, 1.0);
        assert!(strong < mid && mid < off);
        assert!(mid / off < 0.1 && strong / mid < 0.1);
    }

    #[test]
    fn no_poles_on_real_axis() {
        for &omega in &[0.1, 0.3, 1.0] {
            for &dc in &[0.0, 0.05, 0.5] {
                let p = params(omega, dc);
                let min = (0..=20_000)
                    .map(|k| -10.0 + k as f64 * 1e-3)
                    .map(|ds| cpo_denominator(&p, ds + dc).unwrap().norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(min > 1e-6, "{omega} {dc}: {min}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn lorentzian_limit(ds in -10.0f64..10.0, dc in -1.0f64..1.0) {
                let got = chi(0.0, dc, ds);
                let expected = Complex64::new(-ds, 1.0) / (1.0 + ds * ds);
                prop_assert!((got - expected).norm() < 1e-12);
            }

            #[test]
            fn inversion_saturates_monotonically(a in 0.0f64..3.0, b in 0.0f64..3.0, dc in -2.0f64..2.0) {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let w_lo = population_inversion(&params(lo, dc)).unwrap();
                let w_hi = population_inversion(&params(hi, dc)).unwrap();
                prop_assert!((-1.0..0.0).contains(&w_lo));
                prop_assert!((-1.0..0.0).contains(&w_hi));
                if hi > lo + 1e-9 {
                    prop_assert!(w_hi > w_lo);
                }
            }

            #[test]
            fn mirrored_detunings_conjugate(omega in 0.0f64..2.0, dc in -1.0f64..1.0, ds in -5.0f64..5.0) {
                let a = chi(omega, dc, ds);
                let b = chi(omega, -dc, -ds);
                prop_assert!((b + a.conj()).norm() < 1e-12);
            }
        }
    }
}
