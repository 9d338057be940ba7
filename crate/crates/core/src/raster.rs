//! Square rasters centred on the optical axis.
//!
//! Pixel `(i, j)` (column `i`, row `j`) has its centre at
//! `x = (i + 0.5 - N/2) pitch`, `y = (j + 0.5 - N/2) pitch`; the polar angle is
//! `atan2(y, x)` mapped to `[0, 2pi)`, so the azimuthal branch cut runs along
//! the +x axis and no pixel centre lies on it.

use std::f64::consts::TAU;

use crate::error::{ensure_finite, invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterGeometry {
    /// Pixels per side.
    pub n: usize,
    /// Metres per pixel.
    pub pitch: f64,
}

impl RasterGeometry {
    pub fn new(n: usize, pitch: f64) -> Result<Self> {
        let g = Self { n, pitch };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("pitch", self.pitch)?;
        if self.n == 0 || !self.n.is_multiple_of(2) {
            return Err(invalid(
                "n",
                format!("grid side must be even and positive, got {}", self.n),
            ));
        }
        if self.pitch <= 0.0 {
            return Err(invalid(
                "pitch",
                format!("must be positive, got {}", self.pitch),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Full side length in metres.
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.pitch
    }

    pub fn coordinate(&self, index: usize) -> f64 {
        (index as f64 + 0.5 - 0.5 * self.n as f64) * self.pitch
    }

    pub fn center(&self, col: usize, row: usize) -> (f64, f64) {
        (self.coordinate(col), self.coordinate(row))
    }

    /// Radius and azimuth in `[0, 2pi)` of a pixel centre.
    pub fn polar(&self, col: usize, row: usize) -> (f64, f64) {
        let (x, y) = self.center(col, row);
        (x.hypot(y), azimuth(x, y))
    }
}

/// `atan2(y, x)` folded into `[0, 2pi)`.
pub fn azimuth(x: f64, y: f64) -> f64 {
    let phi = y.atan2(x);
    if phi < 0.0 {
        let wrapped = phi + TAU;
        // -0.0 and tiny negatives would otherwise round up to 2pi
        if wrapped >= TAU {
            0.0
        } else {
            wrapped
        }
    } else {
        phi
    }
}

/// Real-valued raster, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    pub geometry: RasterGeometry,
    pub values: Vec<f64>,
}

impl RasterGrid {
    pub fn zeros(geometry: RasterGeometry) -> Self {
        Self {
            geometry,
            values: vec![0.0; geometry.len()],
        }
    }

    pub fn width(&self) -> usize {
        self.geometry.n
    }

    pub fn height(&self) -> usize {
        self.geometry.n
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.geometry.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let n = self.geometry.n;
        &self.values[row * n..(row + 1) * n]
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}
