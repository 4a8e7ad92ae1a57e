//! Explicit reconstruction of parallel line currents, positions and complex
//! amplitudes, from phasor magnetic-field samples on a closed contour.
//!
//! Pipeline: [`forward`] simulates samples, [`moments`] integrates the
//! harmonic-kernel contour moments, [`prony`] inverts them. [`silent`] holds
//! executable non-uniqueness oracles and [`harness`] the studies, file
//! formats and CLI plumbing.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod forward;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod moments;
pub mod prony;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod silent;

pub use error::{Error, Result};
pub use forward::{add_noise, derive_seed, field_at, noise_sigma, sample_circle, sample_circle_with, NoiseSpec};
pub use model::{
    circle_points, validate_scenario, Conductor, FieldSample, MeasurementSet, MomentVector, Phasor, Point2,
    ReconParams, Scenario, ValidationReport, Violation,
};
pub use moments::{
    contour_moments, exact_moments, extrapolated_moments, richardson, segment_moment, HarmonicKernel, MomentTable,
};
pub use prony::{currents_only, match_to_truth, reconstruct, ReconstructionResult};
pub use quadrature::GaussLegendre;
pub use scalar::Real;
pub use silent::{
    build_canceller, coaxial_moment_contribution, verify_silent_moments, CoaxialProfile, SurfaceCanceller,
};

pub type Point2f64 = Point2<f64>;
pub type Point2f32 = Point2<f32>;
pub type Phasor64 = Phasor<f64>;
pub type Phasor32 = Phasor<f32>;
pub type Conductor64 = Conductor<f64>;
pub type Conductor32 = Conductor<f32>;
pub type FieldSample64 = FieldSample<f64>;
pub type FieldSample32 = FieldSample<f32>;
pub type MeasurementSet64 = MeasurementSet<f64>;
pub type MeasurementSet32 = MeasurementSet<f32>;
pub type MomentVector64 = MomentVector<f64>;
pub type MomentVector32 = MomentVector<f32>;
pub type HarmonicKernel64 = HarmonicKernel<f64>;
pub type HarmonicKernel32 = HarmonicKernel<f32>;
pub type Scenario64 = Scenario<f64>;
pub type Reconstruction64 = ReconstructionResult<f64>;
pub type Reconstruction32 = ReconstructionResult<f32>;
