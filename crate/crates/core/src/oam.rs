//! Azimuthal (orbital angular momentum) decomposition of a field.
//!
//! The field is resampled on concentric rings of radius `(k + 1/2) pitch` by
//! bilinear interpolation, each ring is Fourier analysed in azimuth, and the
//! ring powers are weighted by radius.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};
use crate::propagation::FieldGrid;

pub const ANGULAR_SAMPLES: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct OamSpectrum {
    pub l_max: u32,
    /// `fractions[l + l_max]` is the power share of winding `l`.
    pub fractions: Vec<f64>,
    /// Power outside `[-l_max, l_max]`.
    pub residual: f64,
}

impl OamSpectrum {
    pub fn fraction(&self, l: i32) -> f64 {
        let idx = l + self.l_max as i32;
        if idx < 0 || idx as usize >= self.fractions.len() {
            0.0
        } else {
            self.fractions[idx as usize]
        }
    }

    /// Winding number carrying the most power.
    pub fn dominant(&self) -> i32 {
        let (idx, _) =
            self.fractions
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, &p)| {
                    if p > best.1 {
                        (i, p)
                    } else {
                        best
                    }
                });
        idx as i32 - self.l_max as i32
    }

    pub fn windings(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        let l_max = self.l_max as i32;
        self.fractions
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as i32 - l_max, p))
    }
}

fn bilinear(field: &FieldGrid, x: f64, y: f64) -> Complex64 {
    let n = field.geometry.n;
    let u = x / field.geometry.pitch + 0.5 * n as f64 - 0.5;
    let v = y / field.geometry.pitch + 0.5 * n as f64 - 0.5;
    let c0 = (u.floor() as usize).min(n - 2);
    let r0 = (v.floor() as usize).min(n - 2);
    let fu = u - c0 as f64;
    let fv = v - r0 as f64;
    let at = |r: usize, c: usize| field.amplitudes[r * n + c];
    at(r0, c0) * ((1.0 - fu) * (1.0 - fv))
        + at(r0, c0 + 1) * (fu * (1.0 - fv))
        + at(r0 + 1, c0) * ((1.0 - fu) * fv)
        + at(r0 + 1, c0 + 1) * (fu * fv)
}

/// Power shares of azimuthal windings `-l_max..=l_max`, normalised by the
/// total power on the sampled rings.
pub fn oam_spectrum(field: &FieldGrid, l_max: u32) -> Result<OamSpectrum> {
    if l_max < 1 {
        return Err(invalid("l_max", "must be at least 1"));
    }
    let n = field.geometry.n;
    let pitch = field.geometry.pitch;
    let m = ANGULAR_SAMPLES;
    if l_max as usize >= m / 2 {
        return Err(invalid("l_max", format!("must stay below {}", m / 2)));
    }
    let fft = FftPlanner::new().plan_fft_forward(m);
    let rings = n / 2 - 1;
    let trig: Vec<(f64, f64)> = (0..m)
        .map(|j| (std::f64::consts::TAU * j as f64 / m as f64).sin_cos())
        .map(|(s, c)| (c, s))
        .collect();

    // per ring: (radius-weighted harmonic powers, radius-weighted ring power)
    let per_ring: Vec<(Vec<f64>, f64)> = (0..rings)
        .into_par_iter()
        .map(|k| {
            let r = (k as f64 + 0.5) * pitch;
            let mut samples: Vec<Complex64> = trig
                .iter()
                .map(|&(c, s)| bilinear(field, r * c, r * s))
                .collect();
            let ring_power = samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / m as f64;
            fft.process(&mut samples);
            let harmonics = (-(l_max as i64)..=l_max as i64)
                .map(|l| {
                    let c = samples[l.rem_euclid(m as i64) as usize] / m as f64;
                    c.norm_sqr() * r
                })
                .collect();
            (harmonics, ring_power * r)
        })
        .collect();

    let mut fractions = vec![0.0; 2 * l_max as usize + 1];
    let mut total = 0.0;
    for (harmonics, ring) in &per_ring {
        for (acc, h) in fractions.iter_mut().zip(harmonics) {
            *acc += h;
        }
        total += ring;
    }
    if total > 0.0 {
        for f in &mut fractions {
            *f /= total;
        }
    }
    let captured: f64 = fractions.iter().sum();
    Ok(OamSpectrum {
        l_max,
        fractions,
        residual: (1.0 - captured).max(0.0),
    })
}
