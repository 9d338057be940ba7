//! Fixtures shared by the kernel benchmarks.

use cpo_slm_core::pipeline::{azimuthal_response, phase_modulation_map, required_thickness};
use cpo_slm_core::propagation::{apply_map, gaussian_field};
use cpo_slm_core::{
    AzimuthalPumpProfile, AzimuthalResponseTable, FieldGrid, ProbeDetuning, RasterGeometry,
    SystemParams, REFERENCE_WAVELENGTH,
};

pub const PITCH: f64 = 40e-6;
pub const WAIST: f64 = 1e-3;

pub fn geometry(n: usize) -> RasterGeometry {
    RasterGeometry::new(n, PITCH).expect("valid bench geometry")
}

/// Single-winding response table at the reference point.
pub fn reference_table(samples: usize) -> AzimuthalResponseTable {
    azimuthal_response(
        &AzimuthalPumpProfile::reference(1),
        &SystemParams::reference(),
        &ProbeDetuning::default(),
        None,
        samples,
    )
    .expect("reference table")
}

/// Gaussian probe behind the reference vortex plate.
pub fn modulated_beam(n: usize) -> FieldGrid {
    let table = reference_table(4096);
    let d = required_thickness(&table, REFERENCE_WAVELENGTH, 1)
        .expect("thickness")
        .d;
    let g = geometry(n);
    let map = phase_modulation_map(&table, d, REFERENCE_WAVELENGTH, &g).expect("map");
    apply_map(&gaussian_field(&g, WAIST).expect("probe"), &map).expect("beam")
}
