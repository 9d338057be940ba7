//! One function per subcommand. Each writes its artifacts under an output
//! directory and returns the file names it produced, in write order.

use std::f64::consts::{LN_10, PI, TAU};
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use cpo_slm_core::bloch::oracle_susceptibility;
use cpo_slm_core::masks::{
    balanced_half_window, render_fork_mask, render_pump_intensity, window_transitions,
};
use cpo_slm_core::oam::{oam_spectrum, OamSpectrum};
use cpo_slm_core::params::{ComplexSusceptibility, ProbeDetuning, SystemParams};
use cpo_slm_core::pipeline::{
    amplitude_modulation_map, azimuthal_response, extinction_exponent, phase_modulation_map,
    required_thickness, transmission_profile, AzimuthalResponseTable, ThicknessResult,
    REPORTED_DARK_IM_CHI, REPORTED_THICKNESS,
};
use cpo_slm_core::propagation::{
    apply_map, gaussian_field, propagate_angular_spectrum, rayleigh_range, FieldGrid,
};
use cpo_slm_core::susceptibility::{optical_constants, population_inversion, susceptibility};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{
    format_g, write_bytes, write_raster_pgm, write_table_csv, PgmMapping, CSV_DIGITS,
};

pub type Written = Vec<String>;

/// Modulation kind for the `modulate` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulationMode {
    Phase,
    Amplitude,
}

/// Grid used by `oracle-check`.
pub const ORACLE_OMEGA_C: [f64; 4] = [0.0, 0.1, 0.3, 1.0];
pub const ORACLE_DELTA_C: [f64; 3] = [0.0, 0.05, 0.5];
pub const ORACLE_DELTA_S: [f64; 7] = [-2.0, -1.0, -0.3, 0.0, 0.3, 1.0, 2.0];

/// Windings rendered by `all`.
pub const PUMP_IMAGE_WINDINGS: [u32; 4] = [0, 1, 2, 4];

fn g(v: f64) -> String {
    format_g(v, CSV_DIGITS)
}

fn csv(
    dir: &Path,
    name: &str,
    header: &[&str],
    rows: &[Vec<f64>],
    out: &mut Written,
) -> Result<(), CliError> {
    write_table_csv(header, rows, &dir.join(name))?;
    out.push(name.to_string());
    Ok(())
}

fn pgm(
    dir: &Path,
    name: &str,
    raster: &cpo_slm_core::RasterGrid,
    mapping: PgmMapping,
    out: &mut Written,
) -> Result<(), CliError> {
    write_raster_pgm(raster, &dir.join(name), mapping)?;
    out.push(name.to_string());
    Ok(())
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |k| if k + 1 == n { hi } else { lo + step * k as f64 })
}

/// Probe detuning sweep with the pump off and on.
pub fn spectrum(cfg: &RunConfig, dir: &Path) -> Result<Written, CliError> {
    let off = cfg.params.with_omega_c(0.0);
    let detunings: Vec<f64> =
        linspace(cfg.spectrum_min, cfg.spectrum_max, cfg.spectrum_points).collect();
    let rows = detunings
        .par_iter()
        .map(|&delta_s| {
            let probe = ProbeDetuning::new(delta_s)?;
            let a = susceptibility(&off, &probe)?;
            let b = susceptibility(&cfg.params, &probe)?;
            Ok(vec![delta_s, a.re, a.im, b.re, b.im])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut out = Written::new();
    csv(
        dir,
        "spectrum.csv",
        &[
            "delta_s",
            "re_chi_pump_off",
            "im_chi_pump_off",
            "re_chi_pump_on",
            "im_chi_pump_on",
        ],
        &rows,
        &mut out,
    )?;
    Ok(out)
}

pub fn response_table(cfg: &RunConfig) -> Result<AzimuthalResponseTable, CliError> {
    Ok(azimuthal_response(
        &cfg.profile,
        &cfg.params,
        &cfg.probe,
        None,
        cfg.samples,
    )?)
}

/// Response under the azimuthal pump, optionally ensemble-averaged.
pub fn azimuthal(cfg: &RunConfig, dir: &Path) -> Result<Written, CliError> {
    let point = response_table(cfg)?;
    let averaged = cfg
        .sigma_c
        .iter()
        .map(|&s| {
            let spec = cfg.ensemble(s);
            azimuthal_response(
                &cfg.profile,
                &cfg.params,
                &cfg.probe,
                Some(&spec),
                cfg.samples,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut header: Vec<String> = ["phi", "omega_c", "re_chi", "im_chi"]
        .map(String::from)
        .to_vec();
    for s in &cfg.sigma_c {
        header.push(format!("re_chi_sigma_{}", g(*s)));
        header.push(format!("im_chi_sigma_{}", g(*s)));
    }
    let rows: Vec<Vec<f64>> = point
        .samples
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let mut row = vec![s.phi, s.omega_c, s.re_chi, s.im_chi];
            for t in &averaged {
                row.push(t.samples[j].re_chi);
                row.push(t.samples[j].im_chi);
            }
            row
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = Written::new();
    csv(dir, "azimuthal.csv", &header, &rows, &mut out)?;
    Ok(out)
}

pub fn pump_image(cfg: &RunConfig, dir: &Path, winding_l: u32) -> Result<Written, CliError> {
    let mut profile = cfg.profile;
    profile.winding_l = winding_l;
    let image = render_pump_intensity(&profile, &cfg.geometry, cfg.fork.aperture_radius)?;
    let mut out = Written::new();
    pgm(
        dir,
        &format!("pump_l{winding_l}.pgm"),
        &image,
        PgmMapping::Range(0.0, 1.0),
        &mut out,
    )?;
    Ok(out)
}

pub fn fork(cfg: &RunConfig, dir: &Path) -> Result<Written, CliError> {
    let mask = render_fork_mask(&cfg.fork, &cfg.geometry)?;
    let mut out = Written::new();
    pgm(dir, "fork.pgm", &mask, PgmMapping::Binary, &mut out)?;
    if let Some(half) = balanced_half_window(&cfg.fork, &cfg.geometry) {
        let n = cfg.geometry.n;
        let offsets = (1..=4).map(|k| k * n / 16);
        let rows: Vec<Vec<f64>> = offsets
            .map(|dy| {
                let above = window_transitions(&mask, n / 2 + dy, half);
                let below = window_transitions(&mask, n / 2 - 1 - dy, half);
                vec![dy as f64, half as f64, above as f64, below as f64]
            })
            .collect();
        csv(
            dir,
            "fork_scanlines.csv",
            &[
                "row_offset_px",
                "half_window_px",
                "transitions_upper",
                "transitions_lower",
            ],
            &rows,
            &mut out,
        )?;
    }
    Ok(out)
}

/// Values collected for the discrepancy report.
#[derive(Debug, Clone)]
pub struct Findings {
    pub w0: f64,
    pub chi: ComplexSusceptibility,
    pub thickness: ThicknessResult,
    pub implied_swing: f64,
    pub fraction_above_80: f64,
    pub transmission_min: f64,
    pub transmission_max: f64,
    pub gain: bool,
    pub dark_reported_alpha_d: f64,
    pub dark_unpumped_im_chi: f64,
    pub dark_unpumped_alpha_d: f64,
    pub bright_alpha_d: f64,
    pub contrast_log10: f64,
}

pub fn findings(cfg: &RunConfig) -> Result<Findings, CliError> {
    let table = response_table(cfg)?;
    let thickness = required_thickness(&table, cfg.lambda, cfg.delta_l)?;
    let profile = transmission_profile(&table, thickness.d, cfg.lambda)?;
    let unpumped = susceptibility(&cfg.params.with_omega_c(0.0), &cfg.probe)?;
    let d_amp = cfg.amplitude_thickness;
    let bright = susceptibility(&cfg.params, &cfg.probe)?;
    let alpha_bright = optical_constants(&bright, cfg.lambda)?.alpha;
    let alpha_dark = optical_constants(&unpumped, cfg.lambda)?.alpha;
    Ok(Findings {
        w0: population_inversion(&cfg.params)?,
        chi: bright,
        implied_swing: 2.0 * cfg.lambda / REPORTED_THICKNESS,
        fraction_above_80: profile.fraction_above_80,
        transmission_min: profile.min,
        transmission_max: profile.max,
        gain: profile.gain,
        dark_reported_alpha_d: extinction_exponent(
            cfg.dark_im_chi,
            cfg.lambda,
            REPORTED_THICKNESS,
        )?,
        dark_unpumped_im_chi: unpumped.im,
        dark_unpumped_alpha_d: extinction_exponent(unpumped.im, cfg.lambda, REPORTED_THICKNESS)?,
        bright_alpha_d: alpha_bright * d_amp,
        contrast_log10: -(alpha_dark - alpha_bright) * d_amp / LN_10,
        thickness,
    })
}

fn report_text(cfg: &RunConfig, f: &Findings) -> String {
    let t = &f.thickness;
    let mut s = String::new();
    let mut line = |key: &str, value: f64, note: &str| {
        s.push_str(&format!("{key} = {}", g(value)));
        if !note.is_empty() {
            s.push_str(&format!("  # {note}"));
        }
        s.push('\n');
    };
    line(
        "population_inversion",
        f.w0,
        "closed-form steady state at the configured pump",
    );
    line("re_chi", f.chi.re, "configured pump and probe");
    line("im_chi", f.chi.im, "configured pump and probe");
    line("re_chi_phi0", t.re_chi_0, "start of a pump fold");
    line(
        "re_chi_phi2pi",
        t.re_chi_2pi,
        "end of a pump fold (left limit)",
    );
    line(
        "delta_re_chi",
        t.re_chi_2pi - t.re_chi_0,
        &format!("reported thickness implies {}", g(f.implied_swing)),
    );
    line(
        "thickness_m",
        t.d,
        &format!(
            "reported {} for delta_l = 1; ratio {}",
            g(REPORTED_THICKNESS),
            g(t.d / (t.delta_l as f64 * REPORTED_THICKNESS))
        ),
    );
    line("delta_l", t.delta_l as f64, "");
    line(
        "ramp_sign",
        t.ramp_sign as f64,
        "-1 reverses the vortex charge",
    );
    line(
        "fraction_t_above_0.8",
        f.fraction_above_80,
        "share of azimuth samples; reported as above 80% in most cases",
    );
    line("transmission_min", f.transmission_min, "");
    line("transmission_max", f.transmission_max, "");
    line(
        "gain_present",
        if f.gain { 1.0 } else { 0.0 },
        "1 when any sample has negative absorption",
    );
    line(
        "dark_alpha_d_reported_im_chi",
        f.dark_reported_alpha_d,
        &format!(
            "Im chi = {} over the reported thickness; reported exponent 330",
            g(cfg.dark_im_chi)
        ),
    );
    line(
        "dark_im_chi_unpumped",
        f.dark_unpumped_im_chi,
        &format!(
            "closed form without pump; reported {}",
            g(REPORTED_DARK_IM_CHI)
        ),
    );
    line(
        "dark_alpha_d_unpumped",
        f.dark_unpumped_alpha_d,
        "unpumped Im chi over the reported thickness",
    );
    line(
        "bright_alpha_d",
        f.bright_alpha_d,
        &format!(
            "pumped fringe over amplitude_thickness_m = {}",
            g(cfg.amplitude_thickness)
        ),
    );
    line(
        "contrast_log10",
        f.contrast_log10,
        "log10 of T_dark / T_bright over amplitude_thickness_m",
    );
    s
}

/// Slab thickness and the comparison with reported values.
pub fn thickness(cfg: &RunConfig, dir: &Path) -> Result<Written, CliError> {
    let f = findings(cfg)?;
    let mut out = Written::new();
    write_bytes(&dir.join("thickness.txt"), report_text(cfg, &f).as_bytes())?;
    out.push("thickness.txt".into());
    Ok(out)
}

pub fn modulate(cfg: &RunConfig, dir: &Path, mode: ModulationMode) -> Result<Written, CliError> {
    let mut out = Written::new();
    match mode {
        ModulationMode::Phase => {
            let table = response_table(cfg)?;
            let t = required_thickness(&table, cfg.lambda, cfg.delta_l)?;
            let map = phase_modulation_map(&table, t.d, cfg.lambda, &cfg.geometry)?;
            let top = map.intensity.iter().copied().fold(1.0, f64::max);
            pgm(
                dir,
                "phase_map_phase.pgm",
                &map.phase_raster(),
                PgmMapping::Range(0.0, TAU),
                &mut out,
            )?;
            pgm(
                dir,
                "phase_map_intensity.pgm",
                &map.intensity_raster(),
                PgmMapping::Range(0.0, top),
                &mut out,
            )?;
            let profile = transmission_profile(&table, t.d, cfg.lambda)?;
            let rows: Vec<Vec<f64>> = profile
                .rows
                .iter()
                .map(|r| {
                    let phase = PI * t.d / cfg.lambda * (r.re_chi - table.re_chi_start());
                    vec![
                        r.phi,
                        r.omega_c,
                        r.re_chi,
                        r.im_chi,
                        r.alpha,
                        r.transmission,
                        phase,
                    ]
                })
                .collect();
            csv(
                dir,
                "transmission.csv",
                &[
                    "phi",
                    "omega_c",
                    "re_chi",
                    "im_chi",
                    "alpha_per_m",
                    "transmission",
                    "phase_rad",
                ],
                &rows,
                &mut out,
            )?;
        }
        ModulationMode::Amplitude => {
            let mask = render_fork_mask(&cfg.fork, &cfg.geometry)?;
            let dark = cfg.params.with_omega_c(0.0);
            let grating = amplitude_modulation_map(
                &mask,
                &cfg.params,
                &dark,
                &cfg.probe,
                cfg.amplitude_thickness,
                cfg.lambda,
            )?;
            pgm(
                dir,
                "amplitude_map_phase.pgm",
                &grating.map.phase_raster(),
                PgmMapping::Range(0.0, TAU),
                &mut out,
            )?;
            let top = grating.map.intensity.iter().copied().fold(1.0, f64::max);
            pgm(
                dir,
                "amplitude_map_intensity.pgm",
                &grating.map.intensity_raster(),
                PgmMapping::Range(0.0, top),
                &mut out,
            )?;
            let d = cfg.amplitude_thickness;
            let rows: Vec<Vec<f64>> = [(0.0, &grating.dark), (1.0, &grating.bright)]
                .iter()
                .map(|(bright, r)| {
                    vec![
                        *bright,
                        r.omega_c,
                        r.chi.re,
                        r.chi.im,
                        r.alpha,
                        r.alpha * d,
                        r.transmission,
                    ]
                })
                .collect();
            csv(
                dir,
                "amplitude_regions.csv",
                &[
                    "bright",
                    "omega_c",
                    "re_chi",
                    "im_chi",
                    "alpha_per_m",
                    "alpha_d",
                    "transmission",
                ],
                &rows,
                &mut out,
            )?;
        }
    }
    Ok(out)
}

/// Measurements of a propagated field.
#[derive(Debug, Clone)]
pub struct BeamState {
    pub z: f64,
    pub field: FieldGrid,
    pub spectrum: OamSpectrum,
}

impl BeamState {
    fn row(&self) -> Vec<f64> {
        let f = &self.field;
        vec![
            self.z,
            f.power(),
            f.peak_intensity(),
            f.on_axis_intensity(),
            f.on_axis_intensity() / f.peak_intensity(),
            self.spectrum.dominant() as f64,
            self.spectrum.residual,
            f.second_moment_radius(),
        ]
    }
}

/// Gaussian probe through the phase plate, before and after free-space
/// propagation.
pub fn propagated_beam(cfg: &RunConfig) -> Result<(BeamState, BeamState), CliError> {
    let table = response_table(cfg)?;
    let t = required_thickness(&table, cfg.lambda, cfg.delta_l)?;
    let map = phase_modulation_map(&table, t.d, cfg.lambda, &cfg.geometry)?;
    let probe = gaussian_field(&cfg.geometry, cfg.waist)?;
    let near = apply_map(&probe, &map)?;
    let z = cfg
        .distance
        .unwrap_or_else(|| rayleigh_range(cfg.waist, cfg.lambda));
    let far = propagate_angular_spectrum(&near, z, cfg.lambda)?;
    let measure = |z: f64, field: FieldGrid| -> Result<BeamState, CliError> {
        let spectrum = oam_spectrum(&field, cfg.l_max)?;
        Ok(BeamState { z, field, spectrum })
    };
    Ok((measure(0.0, near)?, measure(z, far)?))
}

pub fn propagate(cfg: &RunConfig, dir: &Path) -> Result<Written, CliError> {
    let (near, far) = propagated_beam(cfg)?;
    let mut out = Written::new();
    for (tag, state) in [("z0", &near), ("z", &far)] {
        pgm(
            dir,
            &format!("field_{tag}_intensity.pgm"),
            &state.field.intensity_raster(),
            PgmMapping::Auto,
            &mut out,
        )?;
        pgm(
            dir,
            &format!("field_{tag}_phase.pgm"),
            &state.field.phase_raster(),
            PgmMapping::Range(0.0, TAU),
            &mut out,
        )?;
    }
    let rows: Vec<Vec<f64>> = near
        .spectrum
        .windings()
        .zip(far.spectrum.windings())
        .map(|((l, a), (_, b))| vec![l as f64, a, b])
        .collect();
    csv(
        dir,
        "oam.csv",
        &["l", "fraction_z0", "fraction_z"],
        &rows,
        &mut out,
    )?;
    csv(
        dir,
        "propagation.csv",
        &[
            "z_m",
            "power",
            "peak_intensity",
            "on_axis_intensity",
            "on_axis_ratio",
            "dominant_l",
            "residual",
            "rms_radius_m",
        ],
        &[near.row(), far.row()],
        &mut out,
    )?;
    Ok(out)
}

/// One grid point of the closed-form versus time-domain comparison.
#[derive(Debug, Clone, Copy)]
pub struct OracleRow {
    pub omega_c: f64,
    pub delta_c: f64,
    pub delta_s: f64,
    pub analytic: ComplexSusceptibility,
    pub oracle: ComplexSusceptibility,
}

impl OracleRow {
    pub fn abs_err(&self) -> f64 {
        (self.analytic.as_complex() - self.oracle.as_complex()).norm()
    }

    pub fn tolerance(&self) -> f64 {
        1e-3 * self.analytic.norm().max(1e-3)
    }
}

/// Grid points with a non-zero beat detuning.
pub fn oracle_grid() -> Vec<(f64, f64, f64)> {
    let mut grid = Vec::new();
    for &omega_c in &ORACLE_OMEGA_C {
        for &delta_c in &ORACLE_DELTA_C {
            for &delta_s in &ORACLE_DELTA_S {
                if delta_s + delta_c != 0.0 {
                    grid.push((omega_c, delta_c, delta_s));
                }
            }
        }
    }
    grid
}

pub fn oracle_rows(cfg: &RunConfig) -> Result<Vec<OracleRow>, CliError> {
    oracle_grid()
        .into_par_iter()
        .map(|(omega_c, delta_c, delta_s)| {
            let params = SystemParams {
                omega_c,
                delta_c,
                ..cfg.params
            };
            let probe = ProbeDetuning::new(delta_s)?;
            let analytic = susceptibility(&params, &probe)?;
            let oracle = oracle_susceptibility(&params, &probe, &cfg.oracle)?.chi;
            Ok(OracleRow {
                omega_c,
                delta_c,
                delta_s,
                analytic,
                oracle,
            })
        })
        .collect()
}

pub fn oracle_check(cfg: &RunConfig, dir: &Path) -> Result<Written, CliError> {
    let rows: Vec<Vec<f64>> = oracle_rows(cfg)?
        .iter()
        .map(|r| {
            vec![
                r.omega_c,
                r.delta_c,
                r.delta_s,
                r.analytic.re,
                r.analytic.im,
                r.oracle.re,
                r.oracle.im,
                r.abs_err(),
            ]
        })
        .collect();
    let mut out = Written::new();
    csv(
        dir,
        "oracle.csv",
        &[
            "omega_c",
            "delta_c",
            "delta_s",
            "re_chi_analytic",
            "im_chi_analytic",
            "re_chi_oracle",
            "im_chi_oracle",
            "abs_err",
        ],
        &rows,
        &mut out,
    )?;
    Ok(out)
}

/// Every artifact plus the resolved configuration and a SHA-256 manifest.
pub fn all(cfg: &RunConfig, dir: &Path) -> Result<Written, CliError> {
    let mut out = Written::new();
    write_bytes(&dir.join("config.txt"), cfg.describe().as_bytes())?;
    out.push("config.txt".into());
    out.extend(spectrum(cfg, dir)?);
    out.extend(azimuthal(cfg, dir)?);
    for l in PUMP_IMAGE_WINDINGS {
        out.extend(pump_image(cfg, dir, l)?);
    }
    out.extend(fork(cfg, dir)?);
    out.extend(thickness(cfg, dir)?);
    out.extend(modulate(cfg, dir, ModulationMode::Phase)?);
    out.extend(modulate(cfg, dir, ModulationMode::Amplitude)?);
    out.extend(propagate(cfg, dir)?);
    out.extend(oracle_check(cfg, dir)?);

    let mut names = out.clone();
    names.sort();
    let mut manifest = String::new();
    for name in &names {
        let path = dir.join(name);
        let bytes = std::fs::read(&path).map_err(|e| CliError::io(&path, e))?;
        manifest.push_str(&format!(
            "{}  {name}\n",
            hex::encode(Sha256::digest(&bytes))
        ));
    }
    write_bytes(&dir.join("manifest.txt"), manifest.as_bytes())?;
    out.push("manifest.txt".into());
    Ok(out)
}
