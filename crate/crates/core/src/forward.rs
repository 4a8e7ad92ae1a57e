//! Forward model: the transverse field of line currents, sampled on a
//! contour, with optional seeded Gaussian measurement noise.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::{circle_points, Conductor, FieldSample, MeasurementSet, Phasor, Point2, Scenario};
use crate::scalar::{mu0_over_2pi, Real};

/// Distance below which the field is treated as evaluated on a conductor.
pub const AT_CONDUCTOR_TOL: f64 = 1e-12;

/// Noise level relative to the mean field magnitude, and the generator seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec<T> {
    pub sigma_ref: T,
    pub seed: u64,
}

impl<T: Real> NoiseSpec<T> {
    pub fn new(sigma_ref: T, seed: u64) -> Result<Self> {
        if !(sigma_ref >= T::zero() && sigma_ref.is_finite()) {
            return Err(Error::InvalidScenario("sigma_ref must be non-negative".into()));
        }
        Ok(Self { sigma_ref, seed })
    }
}

/// B(r) = (μ0/2π) Σ I_n ẑ×(r − r_n)/|r − r_n|².
pub fn field_at<T: Real>(conductors: &[Conductor<T>], r: Point2<T>) -> Result<(Phasor<T>, Phasor<T>)> {
    let zero = Complex::new(T::zero(), T::zero());
    let (mut bx, mut by) = (zero, zero);
    for (index, c) in conductors.iter().enumerate() {
        let dx = r.x() - c.position.x();
        let dy = r.y() - c.position.y();
        let d2 = dx * dx + dy * dy;
        if d2.sqrt() < T::lit(AT_CONDUCTOR_TOL) {
            return Err(Error::EvaluationAtConductor { index, distance: d2.sqrt().to_f64().unwrap_or(0.0) });
        }
        bx += c.current * (-dy / d2);
        by += c.current * (dx / d2);
    }
    let k = mu0_over_2pi::<T>();
    Ok((bx * k, by * k))
}

/// Field samples at arbitrary points.
pub fn sample_points<T: Real>(conductors: &[Conductor<T>], points: &[Point2<T>]) -> Result<Vec<FieldSample<T>>> {
    points
        .iter()
        .map(|&p| {
            let (bx, by) = field_at(conductors, p)?;
            FieldSample::new(p, bx, by)
        })
        .collect()
}

/// Samples the field of internal and external conductors at `n` uniform
/// angles `2πk/n` on the circle of radius `r_meas`.
pub fn sample_circle_with<T: Real>(conductors: &[Conductor<T>], r_meas: T, n: usize) -> Result<MeasurementSet<T>> {
    if n < 3 {
        return Err(Error::InvalidMeasurementSet(format!("need at least 3 samples, got {n}")));
    }
    let samples = sample_points(conductors, &circle_points(r_meas, n))?;
    MeasurementSet::circular(samples, r_meas)
}

/// Samples a scenario on its measurement circle.
pub fn sample_circle<T: Real>(scenario: &Scenario<T>) -> Result<MeasurementSet<T>> {
    let all: Vec<_> = scenario.internal.iter().chain(&scenario.external).copied().collect();
    sample_circle_with(&all, scenario.r_meas, scenario.n_meas)
}

/// σ = σ_ref · mean_k sqrt(|B_x,k|² + |B_y,k|²).
pub fn noise_sigma<T: Real>(ms: &MeasurementSet<T>, sigma_ref: T) -> T {
    let mean = ms.samples().iter().map(|s| s.magnitude()).sum::<T>() / T::from_usize_lossy(ms.n_meas());
    sigma_ref * mean
}

/// Generator used for all noise draws: ChaCha8 seeded from a u64.
pub fn noise_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Adds independent N(0, σ²) deviates to Re/Im of Bx and By at every sample,
/// drawn in the order (Re Bx, Im Bx, Re By, Im By) per sample.
pub fn add_noise<T: Real>(ms: &MeasurementSet<T>, spec: NoiseSpec<T>) -> Result<MeasurementSet<T>>
where
    StandardNormal: Distribution<T>,
{
    if spec.sigma_ref == T::zero() {
        return Ok(ms.clone());
    }
    let sigma = noise_sigma(ms, spec.sigma_ref);
    let mut rng = noise_rng(spec.seed);
    let mut draw = || -> T { sigma * StandardNormal.sample(&mut rng) };
    let noisy: Vec<_> = ms
        .samples()
        .iter()
        .map(|s| {
            let bx = s.bx + Complex::new(draw(), draw());
            let by = s.by + Complex::new(draw(), draw());
            FieldSample::new(s.position, bx, by)
        })
        .collect::<Result<_>>()?;
    ms.with_samples(noisy)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-run seed: splitmix64(master ⊕ splitmix64(run + 1)).
pub fn derive_seed(master: u64, run: u64) -> u64 {
    splitmix64(master ^ splitmix64(run.wrapping_add(1)))
}
