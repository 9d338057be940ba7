use std::f64::consts::TAU;

use cpo_slm_core::bloch::oracle_susceptibility;
use cpo_slm_core::ensemble::averaged_susceptibility;
use cpo_slm_core::masks::render_pump_rabi;
use cpo_slm_core::oam::oam_spectrum;
use cpo_slm_core::pipeline::{azimuthal_response, phase_modulation_map, required_thickness};
use cpo_slm_core::propagation::{
    apply_map, gaussian_field, propagate_angular_spectrum, rayleigh_range,
};
use cpo_slm_core::{
    susceptibility, AzimuthalPumpProfile, EnsembleSpec, OracleConfig, ProbeDetuning,
    RasterGeometry, SystemParams, REFERENCE_WAVELENGTH,
};

#[test]
fn closed_form_agrees_with_time_domain() {
    let params = SystemParams::reference();
    let probe = ProbeDetuning::new(0.3).unwrap();
    let analytic = susceptibility(&params, &probe).unwrap();
    let oracle = oracle_susceptibility(&params, &probe, &OracleConfig::default()).unwrap();
    let err = (analytic.as_complex() - oracle.chi.as_complex()).norm();
    assert!(err < 1e-3 * analytic.norm().max(1e-3), "err {err}");
}

#[test]
fn narrow_ensemble_reduces_to_point_value() {
    let params = SystemParams::reference();
    let probe = ProbeDetuning::new(0.0).unwrap();
    let spec = EnsembleSpec::new(params.delta_c, 1e-9).unwrap();
    let avg = averaged_susceptibility(&params, &spec, &probe).unwrap();
    let point = susceptibility(&params, &probe).unwrap();
    let rel = (avg.as_complex() - point.as_complex()).norm() / point.norm();
    assert!(rel < 1e-6, "relative deviation {rel}");
}

#[test]
fn pump_image_and_table_agree() {
    let profile = AzimuthalPumpProfile::reference(2);
    let geometry = RasterGeometry::new(64, 40e-6).unwrap();
    let image = render_pump_rabi(&profile, &geometry, None).unwrap();
    let table = azimuthal_response(
        &profile,
        &SystemParams::reference(),
        &ProbeDetuning::default(),
        None,
        512,
    )
    .unwrap();
    for (k, &rabi) in image.values.iter().enumerate() {
        let (_, phi) = geometry.polar(k % 64, k / 64);
        let psi = (2.0 * phi).rem_euclid(TAU);
        assert!((rabi - (1.0 / (psi + 1.0)).sqrt()).abs() < 1e-12);
    }
    assert!(table
        .samples
        .iter()
        .all(|s| s.omega_c <= 1.0 && s.omega_c > 0.37));
}

#[test]
fn vortex_plate_imprints_unit_winding() {
    let params = SystemParams::reference();
    let profile = AzimuthalPumpProfile::reference(1);
    let table =
        azimuthal_response(&profile, &params, &ProbeDetuning::default(), None, 1024).unwrap();
    let thickness = required_thickness(&table, REFERENCE_WAVELENGTH, 1).unwrap();
    assert_eq!(thickness.ramp_sign, 1);

    let geometry = RasterGeometry::new(256, 40e-6).unwrap();
    let map = phase_modulation_map(&table, thickness.d, REFERENCE_WAVELENGTH, &geometry).unwrap();
    assert_eq!(map.gain_pixels, 0);
    assert!(map.intensity.iter().all(|&t| t <= 1.0));

    let beam = apply_map(&gaussian_field(&geometry, 1e-3).unwrap(), &map).unwrap();
    let zr = rayleigh_range(1e-3, REFERENCE_WAVELENGTH);
    let far = propagate_angular_spectrum(&beam, zr, REFERENCE_WAVELENGTH).unwrap();
    assert!((far.power() - beam.power()).abs() < 1e-9 * beam.power());
    let spectrum = oam_spectrum(&far, 6).unwrap();
    assert_eq!(spectrum.dominant(), 1);
    let total: f64 = spectrum.fractions.iter().sum();
    assert!(total <= 1.0 + 1e-9);
}
