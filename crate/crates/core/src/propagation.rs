//! Scalar free-space propagation by the angular-spectrum method.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::pipeline::ModulationMap;
use crate::raster::{RasterGeometry, RasterGrid};

/// Complex scalar field on a square, power-of-two grid centred on the axis.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub geometry: RasterGeometry,
    pub amplitudes: Vec<Complex64>,
}

impl FieldGrid {
    pub fn new(geometry: RasterGeometry, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_geometry(&geometry)?;
        if amplitudes.len() != geometry.len() {
            return Err(Error::Geometry(format!(
                "{} amplitudes for a {}x{} grid",
                amplitudes.len(),
                geometry.n,
                geometry.n
            )));
        }
        Ok(Self {
            geometry,
            amplitudes,
        })
    }

    /// Builds a field by evaluating `f(x, y)` at every pixel centre.
    pub fn from_fn<F>(geometry: RasterGeometry, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        check_geometry(&geometry)?;
        let n = geometry.n;
        let amplitudes = (0..geometry.len())
            .into_par_iter()
            .map(|k| {
                let (x, y) = geometry.center(k % n, k / n);
                f(x, y)
            })
            .collect();
        Ok(Self {
            geometry,
            amplitudes,
        })
    }

    /// Integrated intensity, `sum |E|^2 * pitch^2`.
    pub fn power(&self) -> f64 {
        let sum: f64 = self.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        sum * self.geometry.pitch * self.geometry.pitch
    }

    pub fn peak_intensity(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .fold(0.0, f64::max)
    }

    /// Intensity on the optical axis, interpolated from the four central pixels.
    pub fn on_axis_intensity(&self) -> f64 {
        let n = self.geometry.n;
        let (a, b) = (n / 2 - 1, n / 2);
        let e = self.amplitudes[a * n + a]
            + self.amplitudes[a * n + b]
            + self.amplitudes[b * n + a]
            + self.amplitudes[b * n + b];
        (e / 4.0).norm_sqr()
    }

    /// Beam radius from the second intensity moment about the centroid,
    /// `w = sqrt(2 <r^2>)`; equals the 1/e^2 radius for a Gaussian.
    pub fn second_moment_radius(&self) -> f64 {
        let n = self.geometry.n;
        let (mut total, mut sx, mut sy) = (0.0, 0.0, 0.0);
        for (k, a) in self.amplitudes.iter().enumerate() {
            let (x, y) = self.geometry.center(k % n, k / n);
            let i = a.norm_sqr();
            total += i;
            sx += i * x;
            sy += i * y;
        }
        let (cx, cy) = (sx / total, sy / total);
        let mut r2 = 0.0;
        for (k, a) in self.amplitudes.iter().enumerate() {
            let (x, y) = self.geometry.center(k % n, k / n);
            r2 += a.norm_sqr() * ((x - cx).powi(2) + (y - cy).powi(2));
        }
        (2.0 * r2 / total).sqrt()
    }

    pub fn intensity_raster(&self) -> RasterGrid {
        RasterGrid {
            geometry: self.geometry,
            values: self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// Phase in `[0, 2pi)`.
    pub fn phase_raster(&self) -> RasterGrid {
        RasterGrid {
            geometry: self.geometry,
            values: self
                .amplitudes
                .iter()
                .map(|a| {
                    let p = a.arg().rem_euclid(TAU);
                    if p >= TAU {
                        0.0
                    } else {
                        p
                    }
                })
                .collect(),
        }
    }
}

fn check_geometry(geometry: &RasterGeometry) -> Result<()> {
    geometry.validate()?;
    if !geometry.n.is_power_of_two() {
        return Err(Error::Geometry(format!(
            "grid side {} is not a power of two",
            geometry.n
        )));
    }
    Ok(())
}

/// Flat-phase Gaussian `exp(-r^2 / waist^2)` with unit peak.
pub fn gaussian_field(geometry: &RasterGeometry, waist: f64) -> Result<FieldGrid> {
    check_geometry(geometry)?;
    ensure_finite("waist", waist)?;
    if waist < 4.0 * geometry.pitch {
        return Err(Error::Sampling {
            what: "probe waist",
            length: waist,
            pitch: geometry.pitch,
            min_pixels: 4,
        });
    }
    if waist > geometry.extent() / 4.0 {
        return Err(Error::Geometry(format!(
            "waist {waist:e} m exceeds a quarter of the {:e} m window",
            geometry.extent()
        )));
    }
    FieldGrid::from_fn(*geometry, |x, y| {
        Complex64::new((-(x * x + y * y) / (waist * waist)).exp(), 0.0)
    })
}

/// Rayleigh range `pi w0^2 / lambda`.
pub fn rayleigh_range(waist: f64, lambda: f64) -> f64 {
    PI * waist * waist / lambda
}

/// Pointwise product of the field with the map's complex transmittance.
pub fn apply_map(field: &FieldGrid, map: &ModulationMap) -> Result<FieldGrid> {
    if field.geometry != map.geometry {
        return Err(Error::Geometry(format!(
            "field {:?} vs map {:?}",
            field.geometry, map.geometry
        )));
    }
    let amplitudes = field
        .amplitudes
        .iter()
        .zip(&map.transmittance)
        .map(|(e, t)| e * t)
        .collect();
    Ok(FieldGrid {
        geometry: field.geometry,
        amplitudes,
    })
}

fn transpose(data: &mut [Complex64], n: usize) {
    for r in 0..n {
        for c in r + 1..n {
            data.swap(r * n + c, c * n + r);
        }
    }
}

/// Unnormalised 2-D DFT in place.
fn fft2(data: &mut [Complex64], n: usize, direction: FftDirection) {
    let fft = FftPlanner::new().plan_fft(n, direction);
    let pass = |data: &mut [Complex64]| {
        data.par_chunks_mut(n).for_each_init(
            || vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
    };
    pass(data);
    transpose(data, n);
    pass(data);
    transpose(data, n);
}

/// Angular frequency of DFT bin `k` on `n` samples of spacing `pitch`.
fn wavenumber(k: usize, n: usize, pitch: f64) -> f64 {
    let signed = if k < n.div_ceil(2) {
        k as f64
    } else {
        k as f64 - n as f64
    };
    TAU * signed / (n as f64 * pitch)
}

fn check_wavelength(lambda: f64) -> Result<()> {
    ensure_finite("lambda", lambda)?;
    if lambda <= 0.0 {
        return Err(invalid("lambda", "wavelength must be positive"));
    }
    Ok(())
}

/// Share of the field's power carried by evanescent plane waves.
pub fn evanescent_fraction(field: &FieldGrid, lambda: f64) -> Result<f64> {
    check_wavelength(lambda)?;
    let n = field.geometry.n;
    let pitch = field.geometry.pitch;
    let k = TAU / lambda;
    let mut spectrum = field.amplitudes.clone();
    fft2(&mut spectrum, n, FftDirection::Forward);
    let (mut total, mut lost) = (0.0, 0.0);
    for (idx, s) in spectrum.iter().enumerate() {
        let kx = wavenumber(idx % n, n, pitch);
        let ky = wavenumber(idx / n, n, pitch);
        let p = s.norm_sqr();
        total += p;
        if kx * kx + ky * ky > k * k {
            lost += p;
        }
    }
    Ok(if total > 0.0 { lost / total } else { 0.0 })
}

/// Propagates the field a distance `distance` (may be negative) with the
/// exact scalar transfer function `exp(i z sqrt(k^2 - kx^2 - ky^2))`;
/// evanescent components are dropped.
pub fn propagate_angular_spectrum(
    field: &FieldGrid,
    distance: f64,
    lambda: f64,
) -> Result<FieldGrid> {
    check_geometry(&field.geometry)?;
    check_wavelength(lambda)?;
    ensure_finite("distance", distance)?;
    let n = field.geometry.n;
    let pitch = field.geometry.pitch;
    let k2 = (TAU / lambda).powi(2);

    let mut data = field.amplitudes.clone();
    fft2(&mut data, n, FftDirection::Forward);
    data.par_chunks_mut(n).enumerate().for_each(|(row, line)| {
        let ky = wavenumber(row, n, pitch);
        for (col, s) in line.iter_mut().enumerate() {
            let kx = wavenumber(col, n, pitch);
            let kz2 = k2 - kx * kx - ky * ky;
            *s = if kz2 >= 0.0 {
                *s * Complex64::cis(distance * kz2.sqrt())
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
    });
    fft2(&mut data, n, FftDirection::Inverse);
    let scale = 1.0 / (n * n) as f64;
    for s in &mut data {
        *s *= scale;
    }
    Ok(FieldGrid {
        geometry: field.geometry,
        amplitudes: data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: f64 = 530e-9;

    fn scene(n: usize) -> RasterGeometry {
        RasterGeometry::new(n, 40e-6).unwrap()
    }

    #[test]
    fn gaussian_profile() {
        let g = scene(256);
        let waist = 1e-3;
        let f = gaussian_field(&g, waist).unwrap();
        let n = g.n;
        // pixel centres sit half a pitch off axis
        let (x, y) = g.center(n / 2, n / 2);
        let expected = (-(x * x + y * y) / (waist * waist)).exp();
        assert!((f.amplitudes[n / 2 * n + n / 2].re - expected).abs() < 1e-15);
        let probe = FieldGrid::from_fn(g, |x, y| {
            Complex64::new((-(x * x + y * y) / (waist * waist)).exp(), 0.0)
        })
        .unwrap();
        assert_eq!(probe, f);
        let at_waist = (-(waist * waist) / (waist * waist)).exp();
        assert!((at_waist - (-1.0f64).exp()).abs() < 1e-15);
        assert!((f.second_moment_radius() - waist).abs() < 1e-9);
    }

    #[test]
    fn sampling_guards() {
        let g = scene(256);
        assert!(matches!(
            gaussian_field(&g, 100e-6),
            Err(Error::Sampling { .. })
        ));
        assert!(matches!(gaussian_field(&g, 3e-3), Err(Error::Geometry(_))));
        let odd = RasterGeometry::new(96, 40e-6).unwrap();
        assert!(gaussian_field(&odd, 1e-3).is_err());
    }

    #[test]
    fn zero_distance_is_identity() {
        let f = gaussian_field(&scene(128), 0.5e-3).unwrap();
        let g = propagate_angular_spectrum(&f, 0.0, LAMBDA).unwrap();
        let worst = f
            .amplitudes
            .iter()
            .zip(&g.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn power_and_reciprocity() {
        let g = scene(256);
        let f = FieldGrid::from_fn(g, |x, y| {
            let r2 = x * x + y * y;
            Complex64::from_polar((-r2 / 1e-6).exp(), y.atan2(x))
        })
        .unwrap();
        assert!(evanescent_fraction(&f, LAMBDA).unwrap() < 1e-12);
        let z = rayleigh_range(1e-3, LAMBDA);
        let out = propagate_angular_spectrum(&f, z, LAMBDA).unwrap();
        assert!((out.power() - f.power()).abs() < 1e-9 * f.power());
        let back = propagate_angular_spectrum(&out, -z, LAMBDA).unwrap();
        let worst = f
            .amplitudes
            .iter()
            .zip(&back.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn gaussian_spreads_as_expected() {
        let g = scene(256);
        let waist = 0.5e-3;
        let f = gaussian_field(&g, waist).unwrap();
        let zr = rayleigh_range(waist, LAMBDA);
        for &m in &[0.5, 1.0, 2.0] {
            let out = propagate_angular_spectrum(&f, m * zr, LAMBDA).unwrap();
            let expected = waist * (1.0 + m * m).sqrt();
            let got = out.second_moment_radius();
            assert!(
                (got / expected - 1.0).abs() < 0.01,
                "{m}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn evanescent_waves_are_dropped() {
        // a checkerboard sits at the Nyquist corner, beyond k for a coarse wavelength
        let g = RasterGeometry::new(16, 1e-7).unwrap();
        let f = FieldGrid::from_fn(g, |x, y| {
            let s = ((x / 1e-7).floor() + (y / 1e-7).floor()) as i64;
            Complex64::new(if s % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        })
        .unwrap();
        assert!(evanescent_fraction(&f, 530e-9).unwrap() > 0.99);
        let out = propagate_angular_spectrum(&f, 1e-6, 530e-9).unwrap();
        assert!(out.power() < 1e-20);
    }

    #[test]
    fn map_geometry_must_match() {
        let g = scene(64);
        let f = gaussian_field(&g, 0.3e-3).unwrap();
        let map = ModulationMap {
            geometry: scene(32),
            transmittance: vec![Complex64::new(1.0, 0.0); 32 * 32],
            phase: vec![0.0; 32 * 32],
            intensity: vec![1.0; 32 * 32],
            gain_pixels: 0,
        };
        assert!(matches!(apply_map(&f, &map), Err(Error::Geometry(_))));
        let identity = ModulationMap {
            geometry: g,
            transmittance: vec![Complex64::new(1.0, 0.0); g.len()],
            phase: vec![0.0; g.len()],
            intensity: vec![1.0; g.len()],
            gain_pixels: 0,
        };
        assert_eq!(apply_map(&f, &identity).unwrap(), f);
    }
}
