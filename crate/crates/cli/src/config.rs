//! Plain-text `key = value` run configuration.
//!
//! Values come from three layers: built-in defaults, an optional file, and
//! command-line overrides. Each resolved key remembers which layer set it.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use cpo_slm_core::bloch::OracleConfig;
use cpo_slm_core::ensemble::{DetuningConvention, EnsembleSpec};
use cpo_slm_core::masks::{AzimuthalPumpProfile, ForkGratingSpec};
use cpo_slm_core::params::{ProbeDetuning, SystemParams};
use cpo_slm_core::raster::RasterGeometry;

use crate::error::CliError;

/// Where a resolved value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Default,
    File,
    Flag,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Default => "default",
            Provenance::File => "file",
            Provenance::Flag => "flag",
        })
    }
}

/// Known keys, their defaults and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("t1_s", "1.5e-11", "exciton lifetime T1, seconds"),
    ("t2_s", "3e-13", "exciton dephasing time T2, seconds"),
    ("omega_c", "0.3", "pump Rabi frequency (units of 1/T2)"),
    ("delta_c", "0.05", "pump-exciton detuning (units of 1/T2)"),
    ("delta_s", "0", "probe-exciton detuning (units of 1/T2)"),
    (
        "sigma_c",
        "0.05,0.15",
        "comma-separated ensemble half-widths; empty for none",
    ),
    (
        "ensemble_truncation",
        "6",
        "ensemble integration range in half-widths",
    ),
    (
        "ensemble_nodes",
        "257",
        "odd number of Simpson nodes for ensemble averages",
    ),
    (
        "ensemble_convention",
        "fixed-beat",
        "fixed-beat or fixed-probe detuning while averaging",
    ),
    ("a", "1", "pump profile numerator"),
    ("b", "1", "pump profile slope"),
    ("c", "1", "pump profile offset"),
    ("winding_l", "1", "number of pump folds around the axis"),
    ("lambda_m", "530e-9", "probe wavelength, metres"),
    ("fork_p", "1", "fork grating dislocation charge"),
    ("fork_period_m", "400e-6", "fork fringe period, metres"),
    (
        "aperture_m",
        "none",
        "mask aperture radius, metres, or none",
    ),
    ("grid_n", "1024", "raster side in pixels (power of two)"),
    ("grid_pitch_m", "40e-6", "raster pitch, metres"),
    ("waist_m", "1e-3", "probe Gaussian waist, metres"),
    (
        "distance_m",
        "auto",
        "propagation distance, metres; auto is one Rayleigh range",
    ),
    ("delta_l", "1", "phase winding per fold"),
    ("samples", "4096", "azimuth samples in the response table"),
    (
        "amplitude_thickness_m",
        "71e-6",
        "slab thickness for amplitude gratings, metres",
    ),
    (
        "dark_im_chi",
        "0.4",
        "reported dark-fringe Im chi used in the extinction check",
    ),
    ("l_max", "8", "largest winding in the OAM spectrum"),
    (
        "spectrum_min",
        "-5",
        "lower end of the probe detuning sweep",
    ),
    ("spectrum_max", "5", "upper end of the probe detuning sweep"),
    (
        "spectrum_points",
        "4001",
        "points in the probe detuning sweep",
    ),
    (
        "oracle_omega_s",
        "1e-4",
        "probe amplitude in the time-domain oracle",
    ),
    (
        "oracle_settle",
        "auto",
        "oracle settling time (units of T2); auto is 30 T1/T2",
    ),
    (
        "oracle_periods",
        "8",
        "beat periods averaged by the oracle demodulator",
    ),
    (
        "oracle_step",
        "auto",
        "oracle RK4 step (units of T2); auto picks from the beat",
    ),
    ("threads", "0", "worker threads; 0 uses every core"),
];

/// Keys that change how a run executes but not what it writes.
pub const RUNTIME_ONLY: &[&str] = &["threads"];

#[derive(Debug, Clone)]
pub struct RawEntry {
    pub value: String,
    pub provenance: Provenance,
}

/// Unresolved key-value layers.
#[derive(Debug, Clone)]
pub struct RawConfig {
    entries: BTreeMap<&'static str, RawEntry>,
}

fn known(key: &str) -> Result<&'static str, CliError> {
    KEYS.iter()
        .find(|(k, _, _)| *k == key)
        .map(|(k, _, _)| *k)
        .ok_or_else(|| CliError::config(key, "unknown key"))
}

impl Default for RawConfig {
    fn default() -> Self {
        let entries = KEYS
            .iter()
            .map(|&(k, v, _)| {
                (
                    k,
                    RawEntry {
                        value: v.to_string(),
                        provenance: Provenance::Default,
                    },
                )
            })
            .collect();
        Self { entries }
    }
}

impl RawConfig {
    pub fn set(&mut self, key: &str, value: &str, provenance: Provenance) -> Result<(), CliError> {
        let key = known(key)?;
        self.entries.insert(
            key,
            RawEntry {
                value: value.trim().to_string(),
                provenance,
            },
        );
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn merge_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(
                    "<file>",
                    format!("line {}: expected `key = value`", lineno + 1),
                )
            })?;
            self.set(key.trim(), value, Provenance::File)?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.merge_text(&text)
    }

    /// Applies a `key=value` override given on the command line.
    pub fn merge_flag(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::config(assignment, "expected KEY=VALUE"))?;
        self.set(key.trim(), value, Provenance::Flag)
    }

    pub fn entry(&self, key: &str) -> &RawEntry {
        &self.entries[key]
    }

    pub fn entries(&self) -> impl Iterator<Item = (&'static str, &RawEntry)> {
        self.entries.iter().map(|(k, e)| (*k, e))
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        RunConfig::from_raw(self)
    }
}

/// Fully parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: SystemParams,
    pub probe: ProbeDetuning,
    pub sigma_c: Vec<f64>,
    pub ensemble_truncation: f64,
    pub ensemble_nodes: usize,
    pub ensemble_convention: DetuningConvention,
    pub profile: AzimuthalPumpProfile,
    pub lambda: f64,
    pub fork: ForkGratingSpec,
    pub geometry: RasterGeometry,
    pub waist: f64,
    /// `None` means one Rayleigh range of the probe waist.
    pub distance: Option<f64>,
    pub delta_l: u32,
    pub samples: usize,
    pub amplitude_thickness: f64,
    pub dark_im_chi: f64,
    pub l_max: u32,
    pub spectrum_min: f64,
    pub spectrum_max: f64,
    pub spectrum_points: usize,
    pub oracle: OracleConfig,
    pub threads: usize,
    pub raw: RawConfig,
}

struct Reader<'a> {
    raw: &'a RawConfig,
}

impl Reader<'_> {
    fn text(&self, key: &'static str) -> &str {
        &self.raw.entry(key).value
    }

    fn float(&self, key: &'static str) -> Result<f64, CliError> {
        let v: f64 = self
            .text(key)
            .parse()
            .map_err(|_| CliError::config(key, format!("`{}` is not a number", self.text(key))))?;
        if !v.is_finite() {
            return Err(CliError::config(key, "must be finite"));
        }
        Ok(v)
    }

    fn positive(&self, key: &'static str) -> Result<f64, CliError> {
        let v = self.float(key)?;
        if v <= 0.0 {
            return Err(CliError::config(key, format!("must be positive, got {v}")));
        }
        Ok(v)
    }

    fn integer<T: std::str::FromStr>(&self, key: &'static str) -> Result<T, CliError> {
        self.text(key).parse().map_err(|_| {
            CliError::config(key, format!("`{}` is not a valid integer", self.text(key)))
        })
    }

    fn optional(&self, key: &'static str, sentinel: &str) -> Result<Option<f64>, CliError> {
        if self.text(key) == sentinel {
            return Ok(None);
        }
        self.positive(key).map(Some)
    }

    fn list(&self, key: &'static str) -> Result<Vec<f64>, CliError> {
        self.text(key)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                let v: f64 = s
                    .parse()
                    .map_err(|_| CliError::config(key, format!("`{s}` is not a number")))?;
                if !v.is_finite() || v < 0.0 {
                    return Err(CliError::config(
                        key,
                        format!("entries must be finite and >= 0, got {s}"),
                    ));
                }
                Ok(v)
            })
            .collect()
    }
}

impl RunConfig {
    fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        let r = Reader { raw };

        let omega_c = r.float("omega_c")?;
        if omega_c < 0.0 {
            return Err(CliError::config(
                "omega_c",
                format!("must be non-negative, got {omega_c}"),
            ));
        }
        let params = SystemParams {
            t1: r.positive("t1_s")?,
            t2: r.positive("t2_s")?,
            omega_c,
            delta_c: r.float("delta_c")?,
        };
        let probe = ProbeDetuning {
            delta_s: r.float("delta_s")?,
        };

        let sigma_c = r.list("sigma_c")?;
        let ensemble_truncation = r.float("ensemble_truncation")?;
        let ensemble_nodes: usize = r.integer("ensemble_nodes")?;
        let ensemble_convention = match r.text("ensemble_convention") {
            "fixed-beat" => DetuningConvention::FixedBeat,
            "fixed-probe" => DetuningConvention::FixedProbe,
            other => {
                return Err(CliError::config(
                    "ensemble_convention",
                    format!("`{other}` is neither fixed-beat nor fixed-probe"),
                ))
            }
        };
        let probe_spec = EnsembleSpec {
            center: params.delta_c,
            sigma_c: 0.0,
            truncation: ensemble_truncation,
            nodes: ensemble_nodes,
            convention: ensemble_convention,
        };
        if let Err(e) = probe_spec.validate() {
            let key = if ensemble_nodes < 33 || ensemble_nodes.is_multiple_of(2) {
                "ensemble_nodes"
            } else {
                "ensemble_truncation"
            };
            return Err(CliError::config(key, e.to_string()));
        }

        let profile = AzimuthalPumpProfile {
            a: r.float("a")?,
            b: r.float("b")?,
            c: r.float("c")?,
            winding_l: r.integer("winding_l")?,
        };
        if let Err(e) = profile.validate() {
            let key = if profile.a <= 0.0 {
                "a"
            } else if profile.c <= 0.0 {
                "c"
            } else {
                "b"
            };
            return Err(CliError::config(key, e.to_string()));
        }

        let lambda = r.positive("lambda_m")?;
        let aperture = r.optional("aperture_m", "none")?;
        let fork = ForkGratingSpec {
            charge_p: r.integer("fork_p")?,
            period: r.positive("fork_period_m")?,
            aperture_radius: aperture,
        };

        let n: usize = r.integer("grid_n")?;
        if n < 8 || !n.is_power_of_two() {
            return Err(CliError::config(
                "grid_n",
                format!("must be a power of two >= 8, got {n}"),
            ));
        }
        let geometry = RasterGeometry {
            n,
            pitch: r.positive("grid_pitch_m")?,
        };

        let distance = if r.text("distance_m") == "auto" {
            None
        } else {
            Some(r.float("distance_m")?)
        };

        let delta_l: u32 = r.integer("delta_l")?;
        if delta_l == 0 {
            return Err(CliError::config("delta_l", "must be at least 1"));
        }
        let samples: usize = r.integer("samples")?;
        if samples < cpo_slm_core::pipeline::MIN_TABLE_SAMPLES {
            return Err(CliError::config(
                "samples",
                format!(
                    "must be at least {}",
                    cpo_slm_core::pipeline::MIN_TABLE_SAMPLES
                ),
            ));
        }
        for l in std::iter::once(profile.winding_l).chain([1, 2, 4]) {
            if l > 0 && !samples.is_multiple_of(l as usize) {
                return Err(CliError::config(
                    "samples",
                    format!("{samples} is not a multiple of the winding {l}"),
                ));
            }
        }

        let l_max: u32 = r.integer("l_max")?;
        if l_max == 0 || l_max as usize >= cpo_slm_core::oam::ANGULAR_SAMPLES / 2 {
            return Err(CliError::config("l_max", "must lie in 1..256"));
        }

        let spectrum_min = r.float("spectrum_min")?;
        let spectrum_max = r.float("spectrum_max")?;
        if spectrum_max <= spectrum_min {
            return Err(CliError::config("spectrum_max", "must exceed spectrum_min"));
        }
        let spectrum_points: usize = r.integer("spectrum_points")?;
        if spectrum_points < 2 {
            return Err(CliError::config(
                "spectrum_points",
                "need at least 2 points",
            ));
        }

        let oracle_omega_s = r.positive("oracle_omega_s")?;
        let demod_periods: usize = r.integer("oracle_periods")?;
        if demod_periods < 2 {
            return Err(CliError::config("oracle_periods", "must be at least 2"));
        }
        let oracle = OracleConfig {
            omega_s: oracle_omega_s,
            settle_time: r.optional("oracle_settle", "auto")?,
            demod_periods,
            step: r.optional("oracle_step", "auto")?,
        };

        Ok(Self {
            params,
            probe,
            sigma_c,
            ensemble_truncation,
            ensemble_nodes,
            ensemble_convention,
            profile,
            lambda,
            fork,
            geometry,
            waist: r.positive("waist_m")?,
            distance,
            delta_l,
            samples,
            amplitude_thickness: r.positive("amplitude_thickness_m")?,
            dark_im_chi: r.float("dark_im_chi")?,
            l_max,
            spectrum_min,
            spectrum_max,
            spectrum_points,
            oracle,
            threads: r.integer("threads")?,
            raw: raw.clone(),
        })
    }

    pub fn ensemble(&self, sigma_c: f64) -> EnsembleSpec {
        EnsembleSpec {
            center: self.params.delta_c,
            sigma_c,
            truncation: self.ensemble_truncation,
            nodes: self.ensemble_nodes,
            convention: self.ensemble_convention,
        }
    }

    /// Resolved keys with their origin, one `key = value  # origin` per line.
    /// Runtime-only keys are left out so the text depends only on what a run
    /// computes.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (key, entry) in self.raw.entries() {
            if RUNTIME_ONLY.contains(&key) {
                continue;
            }
            out.push_str(&format!(
                "{key} = {}  # {}\n",
                entry.value, entry.provenance
            ));
        }
        out
    }
}
