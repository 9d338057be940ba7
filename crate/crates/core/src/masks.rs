//! Pump patterns: azimuthal intensity masks and forked binary gratings.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::raster::{RasterGeometry, RasterGrid};

/// Pump Rabi profile `Omega_c(phi) = sqrt(a / (b psi + c))` with the fold
/// angle `psi = (l phi) mod 2pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AzimuthalPumpProfile {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Number of folds (target winding number); 0 gives uniform illumination.
    pub winding_l: u32,
}

impl AzimuthalPumpProfile {
    pub fn new(a: f64, b: f64, c: f64, winding_l: u32) -> Result<Self> {
        let p = Self { a, b, c, winding_l };
        p.validate()?;
        Ok(p)
    }

    /// a = b = c = 1, a strong pump over the whole turn.
    pub fn reference(winding_l: u32) -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            winding_l,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("a", self.a)?;
        ensure_finite("b", self.b)?;
        ensure_finite("c", self.c)?;
        if self.a <= 0.0 {
            return Err(invalid("a", format!("must be positive, got {}", self.a)));
        }
        if self.c <= 0.0 {
            return Err(Error::ProfileDomain { value: self.c });
        }
        let end = self.b * TAU + self.c;
        if end <= 0.0 {
            return Err(Error::ProfileDomain { value: end });
        }
        Ok(())
    }

    /// Position within the current fold, in `[0, 2pi)`.
    pub fn fold_angle(&self, phi: f64) -> f64 {
        if self.winding_l == 0 {
            return 0.0;
        }
        let psi = (self.winding_l as f64 * phi).rem_euclid(TAU);
        if psi >= TAU {
            0.0
        } else {
            psi
        }
    }

    /// Rabi frequency at fold angle `psi`; accepts the closed end `psi = 2pi`.
    pub fn rabi_at_fold_angle(&self, psi: f64) -> Result<f64> {
        let denom = self.b * psi + self.c;
        if !(denom > 0.0) {
            return Err(Error::ProfileDomain { value: denom });
        }
        Ok((self.a / denom).sqrt())
    }

    /// Left limit of the Rabi frequency at the end of a fold (`psi -> 2pi`).
    pub fn fold_end_rabi(&self) -> Result<f64> {
        if self.winding_l == 0 {
            self.rabi_at_fold_angle(0.0)
        } else {
            self.rabi_at_fold_angle(TAU)
        }
    }
}

/// Pump Rabi frequency at azimuth `phi`.
pub fn azimuthal_rabi(profile: &AzimuthalPumpProfile, phi: f64) -> Result<f64> {
    profile.validate()?;
    ensure_finite("phi", phi)?;
    profile.rabi_at_fold_angle(profile.fold_angle(phi))
}

fn render<F>(geometry: &RasterGeometry, pixel: F) -> Result<RasterGrid>
where
    F: Fn(usize, usize) -> Result<f64> + Sync,
{
    geometry.validate()?;
    let n = geometry.n;
    let mut grid = RasterGrid::zeros(*geometry);
    grid.values
        .par_chunks_mut(n)
        .enumerate()
        .try_for_each(|(row, out)| {
            for (col, v) in out.iter_mut().enumerate() {
                *v = pixel(col, row)?;
            }
            Ok::<(), Error>(())
        })?;
    Ok(grid)
}

fn inside(aperture: Option<f64>, r: f64) -> bool {
    aperture.is_none_or(|radius| r <= radius)
}

/// Pump Rabi frequency per pixel (zero outside the aperture).
pub fn render_pump_rabi(
    profile: &AzimuthalPumpProfile,
    geometry: &RasterGeometry,
    aperture: Option<f64>,
) -> Result<RasterGrid> {
    profile.validate()?;
    render(geometry, |col, row| {
        let (r, phi) = geometry.polar(col, row);
        if inside(aperture, r) {
            profile.rabi_at_fold_angle(profile.fold_angle(phi))
        } else {
            Ok(0.0)
        }
    })
}

/// Pump intensity (Rabi frequency squared) normalised to a maximum of one.
pub fn render_pump_intensity(
    profile: &AzimuthalPumpProfile,
    geometry: &RasterGeometry,
    aperture: Option<f64>,
) -> Result<RasterGrid> {
    let mut grid = render_pump_rabi(profile, geometry, aperture)?;
    for v in &mut grid.values {
        *v *= *v;
    }
    let peak = grid.max();
    if peak > 0.0 {
        for v in &mut grid.values {
            *v /= peak;
        }
    }
    Ok(grid)
}

/// Forked binary amplitude grating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForkGratingSpec {
    /// Topological charge of the dislocation.
    pub charge_p: i32,
    /// Fringe period far from the fork centre, metres.
    pub period: f64,
    /// Opaque outside this radius when set, metres.
    pub aperture_radius: Option<f64>,
}

impl ForkGratingSpec {
    /// Minimum fringe period in pixels.
    pub const MIN_PERIOD_PIXELS: usize = 4;

    pub fn validate(&self) -> Result<()> {
        ensure_finite("period", self.period)?;
        if self.period <= 0.0 {
            return Err(invalid(
                "period",
                format!("must be positive, got {}", self.period),
            ));
        }
        if let Some(radius) = self.aperture_radius {
            ensure_finite("aperture_radius", radius)?;
            if radius <= 0.0 {
                return Err(invalid("aperture_radius", "must be positive"));
            }
        }
        Ok(())
    }
}

/// `f(r, phi) = p phi / pi - (2 r / D) cos phi`; fringe boundaries are the
/// integer level sets of `f`.
pub fn fork_phase_function(spec: &ForkGratingSpec, r: f64, phi: f64) -> f64 {
    spec.charge_p as f64 * phi / PI - 2.0 * r / spec.period * phi.cos()
}

/// Transparent (1) where `floor(f)` is even, opaque (0) otherwise.
pub fn render_fork_mask(spec: &ForkGratingSpec, geometry: &RasterGeometry) -> Result<RasterGrid> {
    spec.validate()?;
    geometry.validate()?;
    let min = ForkGratingSpec::MIN_PERIOD_PIXELS as f64 * geometry.pitch;
    if spec.period < min {
        return Err(Error::Sampling {
            what: "fork period",
            length: spec.period,
            pitch: geometry.pitch,
            min_pixels: ForkGratingSpec::MIN_PERIOD_PIXELS,
        });
    }
    render(geometry, |col, row| {
        let (r, phi) = geometry.polar(col, row);
        if !inside(spec.aperture_radius, r) {
            return Ok(0.0);
        }
        let fringe = fork_phase_function(spec, r, phi).floor();
        Ok(if fringe.rem_euclid(2.0) == 0.0 {
            1.0
        } else {
            0.0
        })
    })
}

/// Number of value changes along a raster row.
pub fn row_transitions(grid: &RasterGrid, row: usize) -> usize {
    grid.row(row).windows(2).filter(|w| w[0] != w[1]).count()
}

/// Value changes along `row` between the columns whose centres lie within
/// `half_cols + 0.5` pixels of the axis.
pub fn window_transitions(grid: &RasterGrid, row: usize, half_cols: usize) -> usize {
    let mid = grid.width() / 2;
    let lo = mid.saturating_sub(half_cols + 1);
    let hi = (mid + half_cols + 1).min(grid.width());
    grid.row(row)[lo..hi]
        .windows(2)
        .filter(|w| w[0] != w[1])
        .count()
}

/// Largest symmetric scan window, in columns either side of the axis, whose
/// edge pixel centres sit half-way between fork boundaries of the straight
/// fringes (`2 X / D` a half-integer).
///
/// Along a row `f = p phi / pi - 2x / D`, so across such a window the two rows
/// at `+y` and `-y` differ by exactly `2p` boundary crossings; other windows
/// can lose one crossing at either edge.
pub fn balanced_half_window(spec: &ForkGratingSpec, geometry: &RasterGeometry) -> Option<usize> {
    (0..geometry.n / 2).rev().find(|&k| {
        let half_periods = (2 * k + 1) as f64 * geometry.pitch / spec.period;
        (half_periods - half_periods.floor() - 0.5).abs() < 1e-9
    })
}
