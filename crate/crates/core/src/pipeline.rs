//! From pump mask to probe modulation.
//!
//! An azimuthal pump profile is turned into a table of susceptibilities, the
//! slab thickness that converts the index swing across one fold into a
//! `2 pi delta_l` phase ramp is solved for, and per-pixel complex
//! transmittances are rendered for phase (vortex) and amplitude (fork)
//! modulation.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ensemble::{averaged_susceptibility, EnsembleSpec};
use crate::error::{ensure_finite, invalid, Error, Result};
use crate::masks::AzimuthalPumpProfile;
use crate::params::{ComplexSusceptibility, ProbeDetuning, SystemParams};
use crate::raster::{RasterGeometry, RasterGrid};
use crate::susceptibility::{optical_constants, susceptibility, transmission};

/// Thickness quoted for the reference scenario, metres.
pub const REPORTED_THICKNESS: f64 = 71e-6;
/// Dark-fringe susceptibility quoted alongside the extinction estimate.
pub const REPORTED_DARK_IM_CHI: f64 = 0.4;
/// Smallest endpoint swing of Re(chi) accepted by [`required_thickness`].
pub const FLAT_RESPONSE_FLOOR: f64 = 1e-12;
pub const MIN_TABLE_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseSample {
    pub phi: f64,
    pub omega_c: f64,
    pub re_chi: f64,
    pub im_chi: f64,
}

/// Susceptibility sampled on a uniform azimuth grid over `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AzimuthalResponseTable {
    pub samples: Vec<ResponseSample>,
    /// Left limit at the end of a fold (`psi -> 2pi`), stored with `phi = 2pi`.
    pub fold_end: ResponseSample,
    pub winding_l: u32,
    pub ensemble: Option<EnsembleSpec>,
}

impl AzimuthalResponseTable {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn re_chi_start(&self) -> f64 {
        self.samples[0].re_chi
    }

    pub fn re_chi_end(&self) -> f64 {
        self.fold_end.re_chi
    }

    /// Linearly interpolated `(Re chi, Im chi)` at azimuth `phi`.
    ///
    /// All folds are identical, so interpolation runs over the first fold's
    /// samples with the fold-end limit closing the last interval; no
    /// interval straddles a fold discontinuity.
    pub fn response_at(&self, phi: f64) -> (f64, f64) {
        if self.winding_l == 0 {
            let s = &self.samples[0];
            return (s.re_chi, s.im_chi);
        }
        let l = self.winding_l as f64;
        let per_fold = self.samples.len() / self.winding_l as usize;
        let mut psi = (l * phi).rem_euclid(TAU);
        if psi >= TAU {
            psi = 0.0;
        }
        let u = psi / TAU * per_fold as f64;
        let j = (u.floor() as usize).min(per_fold - 1);
        let frac = u - j as f64;
        let a = &self.samples[j];
        let b = if j + 1 == per_fold {
            &self.fold_end
        } else {
            &self.samples[j + 1]
        };
        (
            a.re_chi + frac * (b.re_chi - a.re_chi),
            a.im_chi + frac * (b.im_chi - a.im_chi),
        )
    }
}

fn evaluate(
    params: &SystemParams,
    probe: &ProbeDetuning,
    ensemble: Option<&EnsembleSpec>,
    omega_c: f64,
) -> Result<ComplexSusceptibility> {
    let p = params.with_omega_c(omega_c);
    match ensemble {
        Some(spec) => averaged_susceptibility(&p, spec, probe),
        None => susceptibility(&p, probe),
    }
}

/// Samples the probe response under the azimuthal pump on `n_samples`
/// uniformly spaced angles. `n_samples` must be a multiple of the winding.
pub fn azimuthal_response(
    profile: &AzimuthalPumpProfile,
    params: &SystemParams,
    probe: &ProbeDetuning,
    ensemble: Option<&EnsembleSpec>,
    n_samples: usize,
) -> Result<AzimuthalResponseTable> {
    profile.validate()?;
    params.validate()?;
    if let Some(spec) = ensemble {
        spec.validate()?;
    }
    if n_samples < MIN_TABLE_SAMPLES {
        return Err(invalid(
            "samples",
            format!("need at least {MIN_TABLE_SAMPLES} azimuth samples, got {n_samples}"),
        ));
    }
    let l = profile.winding_l as usize;
    if l > 0 && !n_samples.is_multiple_of(l) {
        return Err(invalid(
            "samples",
            format!("{n_samples} samples do not split into {l} equal folds"),
        ));
    }

    // fold angle from integer indices so fold starts land exactly on psi = 0
    let psi = |j: usize| -> f64 {
        if l == 0 {
            0.0
        } else {
            TAU * ((l * j) % n_samples) as f64 / n_samples as f64
        }
    };
    let samples = (0..n_samples)
        .into_par_iter()
        .map(|j| {
            let omega_c = profile.rabi_at_fold_angle(psi(j))?;
            let chi = evaluate(params, probe, ensemble, omega_c)?;
            Ok(ResponseSample {
                phi: TAU * j as f64 / n_samples as f64,
                omega_c,
                re_chi: chi.re,
                im_chi: chi.im,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let end_omega = profile.fold_end_rabi()?;
    let end_chi = evaluate(params, probe, ensemble, end_omega)?;
    Ok(AzimuthalResponseTable {
        samples,
        fold_end: ResponseSample {
            phi: TAU,
            omega_c: end_omega,
            re_chi: end_chi.re,
            im_chi: end_chi.im,
        },
        winding_l: profile.winding_l,
        ensemble: ensemble.copied(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThicknessResult {
    /// Slab thickness, metres (always positive).
    pub d: f64,
    pub delta_l: u32,
    pub re_chi_0: f64,
    pub re_chi_2pi: f64,
    /// +1 when the phase grows with azimuth, -1 when the index swing is
    /// negative and the ramp (vortex charge) is reversed.
    pub ramp_sign: i8,
    pub discrepancy_note: String,
}

/// Thickness `d = 2 delta_l lambda / (Re chi(2pi-) - Re chi(0))` that turns
/// the index swing `n = 1 + Re(chi)/2` across one fold into a
/// `2 pi delta_l` phase ramp.
pub fn required_thickness(
    table: &AzimuthalResponseTable,
    lambda: f64,
    delta_l: u32,
) -> Result<ThicknessResult> {
    ensure_finite("lambda", lambda)?;
    if lambda <= 0.0 {
        return Err(invalid("lambda", "wavelength must be positive"));
    }
    if delta_l == 0 {
        return Err(invalid("delta_l", "winding increment must be at least 1"));
    }
    let re_chi_0 = table.re_chi_start();
    let re_chi_2pi = table.re_chi_end();
    let swing = re_chi_2pi - re_chi_0;
    if !(swing.abs() >= FLAT_RESPONSE_FLOOR) {
        return Err(Error::FlatResponse { delta: swing });
    }
    let unit = 2.0 * lambda / swing;
    let d = delta_l as f64 * unit.abs();
    let ramp_sign = if unit < 0.0 { -1 } else { 1 };
    let discrepancy_note = format!(
        "computed d = {:.4} um for delta_l = {delta_l} (Re chi(0) = {re_chi_0:.6e}, Re chi(2pi-) = {re_chi_2pi:.6e}, ramp {}); reported 71 um, ratio {:.4}",
        d * 1e6,
        if ramp_sign > 0 { "increasing" } else { "reversed" },
        d / (delta_l as f64 * REPORTED_THICKNESS),
    );
    Ok(ThicknessResult {
        d,
        delta_l,
        re_chi_0,
        re_chi_2pi,
        ramp_sign,
        discrepancy_note,
    })
}

/// Per-pixel complex transmittance imprinted on the probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationMap {
    pub geometry: RasterGeometry,
    /// `exp(i Phi) exp(-alpha d / 2)`, row-major.
    pub transmittance: Vec<Complex64>,
    /// Phase `Phi`, radians (not wrapped).
    pub phase: Vec<f64>,
    /// Intensity transmission `|t|^2 = exp(-alpha d)`.
    pub intensity: Vec<f64>,
    /// Pixels with negative absorption (gain); their |t| exceeds one.
    pub gain_pixels: usize,
}

impl ModulationMap {
    fn from_pixels(geometry: RasterGeometry, pixels: Vec<(f64, f64)>) -> Self {
        let mut gain_pixels = 0;
        let mut transmittance = Vec::with_capacity(pixels.len());
        let mut phase = Vec::with_capacity(pixels.len());
        let mut intensity = Vec::with_capacity(pixels.len());
        for (phi, t_int) in pixels {
            if t_int > 1.0 {
                gain_pixels += 1;
            }
            transmittance.push(Complex64::from_polar(t_int.sqrt(), phi));
            phase.push(phi);
            intensity.push(t_int);
        }
        Self {
            geometry,
            transmittance,
            phase,
            intensity,
            gain_pixels,
        }
    }

    pub fn phase_raster(&self) -> RasterGrid {
        RasterGrid {
            geometry: self.geometry,
            values: self.phase.iter().map(|p| p.rem_euclid(TAU)).collect(),
        }
    }

    pub fn intensity_raster(&self) -> RasterGrid {
        RasterGrid {
            geometry: self.geometry,
            values: self.intensity.clone(),
        }
    }
}

fn check_slab(d: f64, lambda: f64) -> Result<()> {
    ensure_finite("thickness", d)?;
    ensure_finite("lambda", lambda)?;
    if lambda <= 0.0 {
        return Err(invalid("lambda", "wavelength must be positive"));
    }
    if d < 0.0 {
        return Err(invalid(
            "thickness",
            format!("must be non-negative, got {d}"),
        ));
    }
    Ok(())
}

/// Phase `Phi(phi) = (pi d / lambda)(Re chi(phi) - Re chi(0))` and intensity
/// transmission at azimuth `phi`.
pub fn modulation_at(table: &AzimuthalResponseTable, d: f64, lambda: f64, phi: f64) -> (f64, f64) {
    let (re, im) = table.response_at(phi);
    slab_response(table.re_chi_start(), re, im, d, lambda)
}

/// Same as [`modulation_at`] at the closed end of a fold, `phi -> 2pi-`.
pub fn fold_end_modulation(table: &AzimuthalResponseTable, d: f64, lambda: f64) -> (f64, f64) {
    let end = &table.fold_end;
    slab_response(table.re_chi_start(), end.re_chi, end.im_chi, d, lambda)
}

fn slab_response(re_ref: f64, re: f64, im: f64, d: f64, lambda: f64) -> (f64, f64) {
    let phase = PI * d / lambda * (re - re_ref);
    let alpha = 2.0 * PI * im / lambda;
    (phase, (-alpha * d).exp())
}

/// Vortex phase plate: every pixel takes the table response at its azimuth.
pub fn phase_modulation_map(
    table: &AzimuthalResponseTable,
    d: f64,
    lambda: f64,
    geometry: &RasterGeometry,
) -> Result<ModulationMap> {
    check_slab(d, lambda)?;
    if d == 0.0 {
        return Err(invalid(
            "thickness",
            "phase modulation needs a positive thickness",
        ));
    }
    geometry.validate()?;
    let n = geometry.n;
    let pixels = (0..geometry.len())
        .into_par_iter()
        .map(|k| {
            let (_, phi) = geometry.polar(k % n, k / n);
            modulation_at(table, d, lambda, phi)
        })
        .collect();
    Ok(ModulationMap::from_pixels(*geometry, pixels))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionResponse {
    pub omega_c: f64,
    pub chi: ComplexSusceptibility,
    /// Absorption coefficient, 1/m.
    pub alpha: f64,
    pub transmission: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeGrating {
    pub map: ModulationMap,
    pub bright: RegionResponse,
    pub dark: RegionResponse,
}

fn region(
    params: &SystemParams,
    probe: &ProbeDetuning,
    d: f64,
    lambda: f64,
) -> Result<RegionResponse> {
    let chi = susceptibility(params, probe)?;
    let alpha = optical_constants(&chi, lambda)?.alpha;
    Ok(RegionResponse {
        omega_c: params.omega_c,
        chi,
        alpha,
        transmission: transmission(alpha, d)?,
    })
}

/// Fork grating imprinted in the medium: bright fringes (mask 1) are pumped
/// with `bright`, dark fringes (mask 0) see `dark`, which must be unpumped.
/// Phases are referenced to the bright fringes.
pub fn amplitude_modulation_map(
    fork: &RasterGrid,
    bright: &SystemParams,
    dark: &SystemParams,
    probe: &ProbeDetuning,
    d: f64,
    lambda: f64,
) -> Result<AmplitudeGrating> {
    check_slab(d, lambda)?;
    if dark.omega_c != 0.0 {
        return Err(invalid("omega_c", "dark fringes must be unpumped"));
    }
    if !(bright.omega_c > 0.0) {
        return Err(invalid("omega_c", "bright fringes need a pump"));
    }
    if fork.values.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(invalid("fork", "mask must be binary"));
    }
    let bright_r = region(bright, probe, d, lambda)?;
    let dark_r = region(dark, probe, d, lambda)?;
    let reference = bright_r.chi.re;
    let pixel = |r: &RegionResponse| slab_response(reference, r.chi.re, r.chi.im, d, lambda);
    let lit = pixel(&bright_r);
    let unlit = pixel(&dark_r);
    let pixels = fork
        .values
        .iter()
        .map(|&v| if v == 1.0 { lit } else { unlit })
        .collect();
    Ok(AmplitudeGrating {
        map: ModulationMap::from_pixels(fork.geometry, pixels),
        bright: bright_r,
        dark: dark_r,
    })
}

/// Exponent `alpha d` for a given Im(chi); the field is extinguished as
/// `exp(-alpha d)`.
pub fn extinction_exponent(im_chi: f64, lambda: f64, d: f64) -> Result<f64> {
    check_slab(d, lambda)?;
    let alpha = optical_constants(
        &ComplexSusceptibility {
            re: 0.0,
            im: im_chi,
        },
        lambda,
    )?
    .alpha;
    Ok(alpha * d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionSample {
    pub phi: f64,
    pub omega_c: f64,
    pub re_chi: f64,
    pub im_chi: f64,
    pub alpha: f64,
    pub transmission: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionProfile {
    pub rows: Vec<TransmissionSample>,
    pub min: f64,
    pub max: f64,
    /// Share of azimuth samples with T > 0.8.
    pub fraction_above_80: f64,
    pub gain: bool,
}

/// Intensity transmission `exp(-alpha(phi) d)` on the table's azimuth grid.
pub fn transmission_profile(
    table: &AzimuthalResponseTable,
    d: f64,
    lambda: f64,
) -> Result<TransmissionProfile> {
    check_slab(d, lambda)?;
    let rows = table
        .samples
        .iter()
        .map(|s| {
            let alpha = 2.0 * PI * s.im_chi / lambda;
            Ok(TransmissionSample {
                phi: s.phi,
                omega_c: s.omega_c,
                re_chi: s.re_chi,
                im_chi: s.im_chi,
                alpha,
                transmission: transmission(alpha, d)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min = rows
        .iter()
        .map(|r| r.transmission)
        .fold(f64::INFINITY, f64::min);
    let max = rows
        .iter()
        .map(|r| r.transmission)
        .fold(f64::NEG_INFINITY, f64::max);
    let above = rows.iter().filter(|r| r.transmission > 0.8).count();
    let gain = rows.iter().any(|r| r.alpha < 0.0);
    Ok(TransmissionProfile {
        fraction_above_80: above as f64 / rows.len() as f64,
        rows,
        min,
        max,
        gain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::masks::{render_fork_mask, ForkGratingSpec};
    use crate::params::REFERENCE_WAVELENGTH as LAMBDA;

    fn reference_table(l: u32, n: usize) -> AzimuthalResponseTable {
        azimuthal_response(
            &AzimuthalPumpProfile::reference(l),
            &SystemParams::reference(),
            &ProbeDetuning::default(),
            None,
            n,
        )
        .unwrap()
    }

    fn synthetic(swing: f64) -> AzimuthalResponseTable {
        let mut table = reference_table(1, 64);
        table.samples[0].re_chi = 0.0;
        table.fold_end.re_chi = swing;
        table
    }

    #[test]
    fn uniform_pump_gives_constant_table() {
        let table = reference_table(0, 64);
        assert!(table
            .samples
            .iter()
            .all(|s| s.re_chi == table.samples[0].re_chi && s.im_chi == table.samples[0].im_chi));
        assert!(matches!(
            required_thickness(&table, LAMBDA, 1),
            Err(Error::FlatResponse { .. })
        ));
    }

    #[test]
    fn reference_endpoints() {
        let table = reference_table(1, 256);
        // closed form at Omega_c = 1 and Omega_c = (2pi + 1)^-1/2
        assert!((table.re_chi_start() + 5.986_144_990_548e-5).abs() < 1e-15);
        assert!((table.re_chi_end() - 2.221_236_194_110_97e-3).abs() < 1e-14);
        assert!((table.samples[0].im_chi - 8.680_474_336_181e-6).abs() < 1e-15);
        let unpumped = susceptibility(
            &SystemParams::reference().with_omega_c(0.0),
            &ProbeDetuning::default(),
        )
        .unwrap()
        .im;
        assert!(table.samples.iter().all(|s| s.im_chi < 0.01 * unpumped));
    }

    #[test]
    fn table_rejects_bad_sampling() {
        let profile = AzimuthalPumpProfile::reference(3);
        let params = SystemParams::reference();
        let probe = ProbeDetuning::default();
        assert!(azimuthal_response(&profile, &params, &probe, None, 32).is_err());
        assert!(azimuthal_response(&profile, &params, &probe, None, 100).is_err());
        assert!(azimuthal_response(&profile, &params, &probe, None, 99).is_ok());
    }

    #[test]
    fn thickness_inversion_and_linearity() {
        let d = required_thickness(&synthetic(0.01493), LAMBDA, 1).unwrap();
        assert!((d.d - 71.0e-6).abs() < 0.1e-6, "{}", d.d);
        let table = reference_table(1, 256);
        let one = required_thickness(&table, LAMBDA, 1).unwrap();
        for dl in 2..6 {
            assert_eq!(
                required_thickness(&table, LAMBDA, dl).unwrap().d,
                dl as f64 * one.d
            );
        }
        assert_eq!(one.ramp_sign, 1);
        assert!((one.d - 464.688_569e-6).abs() < 1e-11, "{}", one.d);

        let reversed = required_thickness(&synthetic(-0.01493), LAMBDA, 1).unwrap();
        assert_eq!(reversed.ramp_sign, -1);
        assert_eq!(reversed.d, d.d);
        assert!(required_thickness(&synthetic(1e-13), LAMBDA, 1).is_err());
    }

    #[test]
    fn phase_ramp_closes_on_winding() {
        let table = reference_table(1, 256);
        for dl in 1..=2 {
            let t = required_thickness(&table, LAMBDA, dl).unwrap();
            let (start, _) = modulation_at(&table, t.d, LAMBDA, 0.0);
            let (end, _) = fold_end_modulation(&table, t.d, LAMBDA);
            assert_eq!(start, 0.0);
            assert!((end - start - TAU * dl as f64).abs() < 1e-9);
            let (near, _) = modulation_at(&table, t.d, LAMBDA, TAU * (1.0 - 1e-13));
            assert!((near - end).abs() < 1e-9);
        }
    }

    #[test]
    fn folded_table_interpolates_within_folds() {
        let one = reference_table(1, 256);
        let two = reference_table(2, 512);
        for k in 0..200 {
            let phi = k as f64 * 0.0157;
            let (a, _) = one.response_at((2.0 * phi).rem_euclid(TAU));
            let (b, _) = two.response_at(phi);
            assert!((a - b).abs() < 1e-9, "{phi}");
        }
    }

    #[test]
    fn phase_map_properties() {
        let geometry = RasterGeometry::new(64, 1.0).unwrap();
        let flat = phase_modulation_map(&reference_table(0, 64), 1e-4, LAMBDA, &geometry).unwrap();
        assert!(flat.phase.iter().all(|&p| p == 0.0));
        assert!(flat.intensity.iter().all(|&t| t == flat.intensity[0]));

        let table = reference_table(1, 256);
        let d = required_thickness(&table, LAMBDA, 1).unwrap().d;
        let map = phase_modulation_map(&table, d, LAMBDA, &geometry).unwrap();
        assert_eq!(map.gain_pixels, 0);
        assert!(map.transmittance.iter().all(|t| t.norm() <= 1.0));
        assert!(phase_modulation_map(&table, 0.0, LAMBDA, &geometry).is_err());
    }

    #[test]
    fn doubling_samples_barely_moves_phase() {
        let geometry = RasterGeometry::new(64, 1.0).unwrap();
        let coarse = reference_table(1, 4096);
        let fine = reference_table(1, 8192);
        let d = required_thickness(&coarse, LAMBDA, 1).unwrap().d;
        let a = phase_modulation_map(&coarse, d, LAMBDA, &geometry).unwrap();
        let b = phase_modulation_map(&fine, d, LAMBDA, &geometry).unwrap();
        let worst = a
            .phase
            .iter()
            .zip(&b.phase)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn amplitude_grating_contrast() {
        let geometry = RasterGeometry::new(64, 1.0).unwrap();
        let fork = render_fork_mask(
            &ForkGratingSpec {
                charge_p: 1,
                period: 8.0,
                aperture_radius: None,
            },
            &geometry,
        )
        .unwrap();
        let bright = SystemParams::reference().with_omega_c(1.0);
        let dark = SystemParams::reference().with_omega_c(0.0);
        let probe = ProbeDetuning::default();
        let grating =
            amplitude_modulation_map(&fork, &bright, &dark, &probe, 71e-6, LAMBDA).unwrap();
        assert!(grating.bright.transmission > 0.99);
        // alpha d = 2 pi 71 um / 530 nm with Im chi = 1
        assert!((grating.dark.alpha * 71e-6 - 841.709_729_8).abs() < 1e-6);
        assert!(grating.dark.transmission / grating.bright.transmission < 1e-100);
        for (v, t) in fork.values.iter().zip(&grating.map.intensity) {
            let expected = if *v == 1.0 {
                grating.bright.transmission
            } else {
                grating.dark.transmission
            };
            assert_eq!(*t, expected);
        }

        let all_on = RasterGrid {
            geometry,
            values: vec![1.0; geometry.len()],
        };
        let uniform =
            amplitude_modulation_map(&all_on, &bright, &dark, &probe, 71e-6, LAMBDA).unwrap();
        assert!(uniform
            .map
            .intensity
            .iter()
            .all(|&t| t == grating.bright.transmission));
        assert!(uniform.map.phase.iter().all(|&p| p == 0.0));

        assert!(amplitude_modulation_map(&fork, &bright, &bright, &probe, 71e-6, LAMBDA).is_err());
    }

    #[test]
    fn quoted_dark_fringe_extinction() {
        let ad = extinction_exponent(REPORTED_DARK_IM_CHI, LAMBDA, REPORTED_THICKNESS).unwrap();
        assert!((329.0..=339.0).contains(&ad), "{ad}");
    }

    #[test]
    fn transmission_profile_summary() {
        let table = reference_table(1, 256);
        let none = transmission_profile(&table, 0.0, LAMBDA).unwrap();
        assert!(none.rows.iter().all(|r| r.transmission == 1.0));
        assert_eq!(none.fraction_above_80, 1.0);

        let d = required_thickness(&table, LAMBDA, 1).unwrap().d;
        let profile = transmission_profile(&table, d, LAMBDA).unwrap();
        assert!(!profile.gain);
        assert!(profile.min > 0.0 && profile.max <= 1.0);
        assert!(profile.fraction_above_80 > 0.0 && profile.fraction_above_80 < 1.0);

        let mut unpumped = table.clone();
        for s in &mut unpumped.samples {
            s.im_chi = 1.0;
        }
        let dark = transmission_profile(&unpumped, 71e-6, LAMBDA).unwrap();
        for r in &dark.rows {
            assert!((r.alpha * 71e-6 - 841.709_729_8).abs() < 1e-6);
        }
        // exp(-841.7) is below the smallest subnormal double
        assert_eq!(dark.max, 0.0);
    }
}
