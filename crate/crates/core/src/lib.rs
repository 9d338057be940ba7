//! Pump-probe response of a driven two-level exciton and its use as an
//! optically addressed spatial light modulator.
//!
//! The crate covers the closed-form steady-state susceptibility
//! ([`susceptibility`]), a time-domain Bloch integrator that checks it
//! ([`bloch`]), Gaussian inhomogeneous averaging ([`ensemble`]), azimuthal
//! pump profiles and forked gratings ([`masks`]), the conversion of a pump
//! pattern into a per-pixel probe transmittance ([`pipeline`]), and
//! free-space propagation with azimuthal mode analysis ([`propagation`],
//! [`oam`]).
//!
//! All frequencies are dimensionless in units of `1/T2`; lengths are metres.

// `!(x <= limit)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod ensemble;
pub mod error;
pub mod masks;
pub mod oam;
pub mod params;
pub mod pipeline;
pub mod propagation;
pub mod raster;
pub mod susceptibility;

pub use bloch::{oracle_susceptibility, OracleConfig, OracleEstimate};
pub use ensemble::{averaged_susceptibility, DetuningConvention, EnsembleSpec};
pub use error::{Error, Result};
pub use masks::{AzimuthalPumpProfile, ForkGratingSpec};
pub use oam::OamSpectrum;
pub use params::{
    ComplexSusceptibility, OpticalConstants, ProbeDetuning, SystemParams, REFERENCE_DELTA_C,
    REFERENCE_OMEGA_C, REFERENCE_T1, REFERENCE_T2, REFERENCE_WAVELENGTH,
};
pub use pipeline::{AzimuthalResponseTable, ModulationMap, ThicknessResult};
pub use propagation::FieldGrid;
pub use raster::{RasterGeometry, RasterGrid};
pub use susceptibility::{population_inversion, susceptibility};
