use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cpo_slm_bench::{geometry, modulated_beam, reference_table, WAIST};
use cpo_slm_core::bloch::oracle_susceptibility;
use cpo_slm_core::ensemble::averaged_susceptibility;
use cpo_slm_core::masks::{render_fork_mask, render_pump_intensity};
use cpo_slm_core::oam::oam_spectrum;
use cpo_slm_core::propagation::{propagate_angular_spectrum, rayleigh_range};
use cpo_slm_core::{
    susceptibility, AzimuthalPumpProfile, EnsembleSpec, ForkGratingSpec, OracleConfig,
    ProbeDetuning, SystemParams, REFERENCE_WAVELENGTH,
};

fn closed_form(c: &mut Criterion) {
    let params = SystemParams::reference();
    let probe = ProbeDetuning::new(0.1).unwrap();
    c.bench_function("susceptibility", |b| {
        b.iter(|| susceptibility(black_box(&params), black_box(&probe)).unwrap())
    });
    let spec = EnsembleSpec::new(params.delta_c, 0.15).unwrap();
    c.bench_function("ensemble_average_257", |b| {
        b.iter(|| averaged_susceptibility(black_box(&params), &spec, &probe).unwrap())
    });
    c.bench_function("response_table_4096", |b| {
        b.iter(|| reference_table(black_box(4096)))
    });
}

fn oracle(c: &mut Criterion) {
    let params = SystemParams::reference();
    let probe = ProbeDetuning::new(1.0).unwrap();
    let cfg = OracleConfig::default();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("reference_point", |b| {
        b.iter(|| oracle_susceptibility(black_box(&params), &probe, &cfg).unwrap())
    });
    group.finish();
}

fn masks(c: &mut Criterion) {
    let g = geometry(1024);
    let profile = AzimuthalPumpProfile::reference(4);
    let fork = ForkGratingSpec {
        charge_p: 1,
        period: 400e-6,
        aperture_radius: None,
    };
    let mut group = c.benchmark_group("render_1024");
    group.sample_size(20);
    group.bench_function("pump", |b| {
        b.iter(|| render_pump_intensity(&profile, &g, None).unwrap())
    });
    group.bench_function("fork", |b| b.iter(|| render_fork_mask(&fork, &g).unwrap()));
    group.finish();
}

fn propagation(c: &mut Criterion) {
    let zr = rayleigh_range(WAIST, REFERENCE_WAVELENGTH);
    let mut group = c.benchmark_group("propagation");
    group.sample_size(10);
    for n in [256usize, 1024] {
        let beam = modulated_beam(n);
        group.bench_with_input(BenchmarkId::new("angular_spectrum", n), &beam, |b, f| {
            b.iter(|| propagate_angular_spectrum(f, zr, REFERENCE_WAVELENGTH).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("oam_spectrum", n), &beam, |b, f| {
            b.iter(|| oam_spectrum(f, 8).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, closed_form, oracle, masks, propagation);
criterion_main!(benches);
