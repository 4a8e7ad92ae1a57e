//! Silent (non-radiating) sources: current distributions with no field
//! outside their support. They are invisible to contour moments, which is
//! why the inversion is restricted to finitely many line currents.
//!
//! Two constructions are provided:
//! - a coaxial volume density `J0(ρ)` on a disk with `∫₀^a J0 ρ dρ = 0`;
//! - a line current inside a circle together with the surface density
//!   `K0 = (1/μ0) ∂A0/∂n` that cancels its field outside the circle, with
//!   `A0` from the image solution of the disk Dirichlet problem.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::forward::field_at;
use crate::model::{Conductor, FieldSample, MeasurementSet, MomentVector, Phasor, Point2};
use crate::moments::{contour_moments, exact_moments, HarmonicKernel};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;

/// Radial quadrature order used for profile checks and moment integrals.
pub const RADIAL_ORDER: usize = 48;
/// Uniform angular points for disk integrals.
pub const ANGULAR_POINTS: usize = 96;

/// Gradient of a test function `G`, as a complex 2-vector `(∂G/∂x, ∂G/∂y)`.
pub type Gradient<T> = [Phasor<T>; 2];

fn zero<T: Real>() -> Phasor<T> {
    Complex::new(T::zero(), T::zero())
}

/// Coaxial current density `J0(ρ)` on the disk `|r − center| ≤ radius`.
#[derive(Clone)]
pub struct CoaxialProfile<T> {
    center: Point2<T>,
    radius: T,
    density: Arc<dyn Fn(T) -> T + Send + Sync>,
}

impl<T: Real> std::fmt::Debug for CoaxialProfile<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoaxialProfile").field("center", &self.center).field("radius", &self.radius).finish()
    }
}

impl<T: Real> CoaxialProfile<T> {
    /// Rejects profiles whose net current `2π ∫ J0 ρ dρ` is not zero within
    /// 1e-12 of `∫ |J0| ρ dρ`.
    pub fn new(center: Point2<T>, radius: T, density: impl Fn(T) -> T + Send + Sync + 'static) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(Error::InvalidScenario("profile radius must be positive".into()));
        }
        let p = Self { center, radius, density: Arc::new(density) };
        let (net, scale) = p.net_and_scale();
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(100.0));
        if net.abs() > tol * scale.max(T::min_positive_value()) {
            return Err(Error::InvalidScenario(format!("coaxial profile carries net current {net}")));
        }
        Ok(p)
    }

    pub fn center(&self) -> Point2<T> {
        self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn density(&self, rho: T) -> T {
        (self.density)(rho)
    }

    /// (∫₀^a J0 ρ dρ, ∫₀^a |J0| ρ dρ)
    fn net_and_scale(&self) -> (T, T) {
        let q = GaussLegendre::<T>::new(RADIAL_ORDER);
        let a = self.radius;
        q.iter().fold((T::zero(), T::zero()), |(n, s), (t, w)| {
            let rho = a * t;
            let j = (self.density)(rho);
            (n + w * a * j * rho, s + w * a * j.abs() * rho)
        })
    }

    /// ∫∫ |J0| dS.
    pub fn absolute_current(&self) -> T {
        self.net_and_scale().1 * T::TAU()
    }

    /// `∫ J0 ∇G dS` over the disk, radial Gauss–Legendre × uniform angle.
    pub fn gradient_integral<G>(&self, grad: G, radial: usize, angular: usize) -> Gradient<T>
    where
        G: Fn(Point2<T>) -> Gradient<T>,
    {
        let q = GaussLegendre::<T>::new(radial.max(1));
        let a = self.radius;
        let dphi = T::TAU() / T::from_usize_lossy(angular);
        let mut acc = [zero::<T>(), zero::<T>()];
        for (t, w) in q.iter() {
            let rho = a * t;
            let weight = w * a * rho * dphi * (self.density)(rho);
            if weight == T::zero() {
                continue;
            }
            for k in 0..angular {
                let phi = dphi * T::from_usize_lossy(k);
                let g = grad(Point2::polar(self.center, rho, phi));
                acc[0] += g[0] * weight;
                acc[1] += g[1] * weight;
            }
        }
        acc
    }

    /// Discretizes the profile into concentric rings of `angular` line
    /// currents each, carrying `w_i J0(ρ_i) ρ_i · 2π / angular`.
    pub fn as_rings(&self, rule: RadialRule, rings: usize, angular: usize) -> Vec<Conductor<T>> {
        let a = self.radius;
        let nodes: Vec<(T, T)> = match rule {
            RadialRule::Midpoint => {
                let h = a / T::from_usize_lossy(rings);
                (0..rings).map(|i| ((T::from_usize_lossy(i) + T::lit(0.5)) * h, h)).collect()
            }
            RadialRule::GaussLegendre => {
                GaussLegendre::<T>::new(rings.max(1)).iter().map(|(t, w)| (a * t, a * w)).collect()
            }
        };
        let dphi = T::TAU() / T::from_usize_lossy(angular);
        let mut out = Vec::with_capacity(rings * angular);
        for (i, (rho, w)) in nodes.into_iter().enumerate() {
            let current = w * (self.density)(rho) * rho * dphi;
            // stagger alternate rings to avoid radial alignment
            let shift = if i % 2 == 0 { T::zero() } else { dphi * T::lit(0.5) };
            for k in 0..angular {
                let pos = Point2::polar(self.center, rho, dphi * T::from_usize_lossy(k) + shift);
                out.push(Conductor { position: pos, current: Complex::new(current, T::zero()) });
            }
        }
        out
    }
}

/// Radial rule for ring discretization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadialRule {
    Midpoint,
    GaussLegendre,
}

/// ∇G_m = f^m · (1, j) for the exponential kernel (G_m' = f^m in `w = x + jy`).
pub fn kernel_gradient<T: Real>(k: HarmonicKernel<T>, m: usize) -> impl Fn(Point2<T>) -> Gradient<T> {
    move |p| {
        let f = k.eval(p).powu(m as u32);
        [f, f * Complex::new(T::zero(), T::one())]
    }
}

/// Both components of `∫ J0 ∇G_m dS` for a coaxial profile.
pub fn coaxial_moment_contribution<T: Real>(p: &CoaxialProfile<T>, k: &HarmonicKernel<T>, m: usize) -> Gradient<T> {
    p.gradient_integral(kernel_gradient(*k, m), RADIAL_ORDER, ANGULAR_POINTS)
}

/// sup over the disk of |f|^m · |(1, j)|.
pub fn disk_kernel_sup<T: Real>(k: &HarmonicKernel<T>, center: Point2<T>, radius: T, m: usize) -> T {
    let ymin = center.y() - radius;
    let fmax = (-ymin / k.r_scale()).exp();
    fmax.powi(m as i32) * T::SQRT_2()
}

/// A line current inside a circle plus the surface density on that circle
/// that cancels its exterior field.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceCanceller<T> {
    pub center: Point2<T>,
    pub radius: T,
    pub inner: Conductor<T>,
    /// `(angle, K0)` at uniform angles `2πk/n`, K0 in A/m.
    pub samples: Vec<(T, Phasor<T>)>,
}

/// Surface density for a unit-free current `current` at offset `d` from the
/// center of a circle of radius `a`, evaluated at angle `theta`, from the
/// image-line solution `A0 ∝ −ln|r − r_s| + ln|r − r_s'| + ln(|d|/a)`.
fn image_density<T: Real>(current: Phasor<T>, d: Point2<T>, a: T, theta: T) -> Phasor<T> {
    let (nx, ny) = (theta.cos(), theta.sin());
    let (rx, ry) = (a * nx, a * ny);
    let d2 = d.x() * d.x() + d.y() * d.y();
    let src = {
        let (dx, dy) = (rx - d.x(), ry - d.y());
        (dx * nx + dy * ny) / (dx * dx + dy * dy)
    };
    let img = if d2 > T::zero() {
        let s = a * a / d2;
        let (ix, iy) = (d.x() * s, d.y() * s);
        let (dx, dy) = (rx - ix, ry - iy);
        (dx * nx + dy * ny) / (dx * dx + dy * dy)
    } else {
        T::zero()
    };
    current * ((img - src) / T::TAU())
}

/// Builds the canceller for `inner` on the circle of radius `a0` about `center`.
pub fn build_canceller<T: Real>(
    inner: Conductor<T>,
    center: Point2<T>,
    a0: T,
    n_samples: usize,
) -> Result<SurfaceCanceller<T>> {
    let d = Point2::new(inner.position.x() - center.x(), inner.position.y() - center.y())?;
    if !(d.norm() < a0) || n_samples == 0 {
        return Err(Error::ConductorOutsideCircle);
    }
    let dtheta = T::TAU() / T::from_usize_lossy(n_samples);
    let samples = (0..n_samples)
        .map(|k| {
            let theta = dtheta * T::from_usize_lossy(k);
            (theta, image_density(inner.current, d, a0, theta))
        })
        .collect();
    Ok(SurfaceCanceller { center, radius: a0, inner, samples })
}

impl<T: Real> SurfaceCanceller<T> {
    fn arc(&self) -> T {
        self.radius * T::TAU() / T::from_usize_lossy(self.samples.len())
    }

    /// Trapezoid estimate of ∮ K0 dl.
    pub fn total_surface_current(&self) -> Phasor<T> {
        let arc = self.arc();
        self.samples.iter().fold(zero(), |acc, (_, k)| acc + *k * arc)
    }

    /// The surface density as `n_samples` line currents on the circle.
    pub fn surface_line_currents(&self) -> Vec<Conductor<T>> {
        let arc = self.arc();
        self.samples
            .iter()
            .map(|&(theta, k)| Conductor { position: Point2::polar(self.center, self.radius, theta), current: k * arc })
            .collect()
    }

    /// Inner conductor followed by the discretized surface.
    pub fn scene(&self) -> Vec<Conductor<T>> {
        let mut v = vec![self.inner];
        v.extend(self.surface_line_currents());
        v
    }

    /// `I f^m(r_s) + ∮ K0 f^m dl`, the left-hand-side moment of the pair.
    pub fn moment_contribution(&self, k: &HarmonicKernel<T>, m_max: usize) -> MomentVector<T> {
        exact_moments(&self.scene(), k, m_max)
    }
}

/// A source whose moment contributions should vanish.
pub enum SilentSource<'a, T> {
    Coaxial(&'a CoaxialProfile<T>),
    Canceller(&'a SurfaceCanceller<T>),
    /// Bare line currents; not silent unless their currents cancel.
    Lines(&'a [Conductor<T>]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SilentCheck<T> {
    pub m: usize,
    /// Largest component magnitude of the contribution.
    pub magnitude: T,
    /// Characteristic moment scale of the source for this `m`.
    pub scale: T,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SilentReport<T> {
    pub tolerance: T,
    pub checks: Vec<SilentCheck<T>>,
}

impl<T: Real> SilentReport<T> {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn any_pass(&self) -> bool {
        self.checks.iter().any(|c| c.pass)
    }
}

/// Per-`m` moment contributions compared against `tolerance × scale`.
pub fn verify_silent_moments<T: Real>(
    source: SilentSource<'_, T>,
    k: &HarmonicKernel<T>,
    m_max: usize,
    tolerance: T,
) -> SilentReport<T> {
    let checks = (0..=m_max)
        .map(|m| {
            let (magnitude, scale) = match &source {
                SilentSource::Coaxial(p) => {
                    let g = coaxial_moment_contribution(p, k, m);
                    let mag = g[0].norm().max(g[1].norm());
                    (mag, p.absolute_current() * disk_kernel_sup(k, p.center(), p.radius(), m))
                }
                SilentSource::Canceller(c) => {
                    let b = c.moment_contribution(k, m);
                    let sup = disk_kernel_sup(k, c.center, c.radius, m);
                    (b[m].norm() * T::SQRT_2(), c.inner.current.norm() * sup)
                }
                SilentSource::Lines(lines) => {
                    let b = exact_moments(lines, k, m);
                    let scale: T =
                        lines.iter().map(|c| c.current.norm() * k.eval(c.position).norm().powi(m as i32)).sum();
                    (b[m].norm() * T::SQRT_2(), scale * T::SQRT_2())
                }
            };
            SilentCheck { m, magnitude, scale, pass: magnitude <= tolerance * scale }
        })
        .collect();
    SilentReport { tolerance, checks }
}

/// Contour moments of the discretized canceller field sampled on a circle
/// of radius `contour_radius` about the canceller center.
pub fn canceller_contour_moments<T: Real>(
    c: &SurfaceCanceller<T>,
    k: &HarmonicKernel<T>,
    m_max: usize,
    contour_radius: T,
    n_meas: usize,
    quad_order: usize,
) -> Result<MomentVector<T>> {
    let scene = c.scene();
    let dtheta = T::TAU() / T::from_usize_lossy(n_meas);
    let samples = (0..n_meas)
        .map(|i| {
            let p = Point2::polar(c.center, contour_radius, dtheta * T::from_usize_lossy(i));
            let (bx, by) = field_at(&scene, p)?;
            FieldSample::new(p, bx, by)
        })
        .collect::<Result<Vec<_>>>()?;
    let ms = MeasurementSet::new(samples, contour_radius)?;
    contour_moments(&ms, k, m_max, quad_order)
}

/// Largest field magnitude sqrt(|Bx|²+|By|²) of `scene` over `n` points on
/// the circle of radius `r` about `center`.
pub fn max_field_on_circle<T: Real>(scene: &[Conductor<T>], center: Point2<T>, r: T, n: usize) -> Result<T> {
    let dtheta = T::TAU() / T::from_usize_lossy(n);
    let mut best = T::zero();
    for i in 0..n {
        let p = Point2::polar(center, r, dtheta * T::from_usize_lossy(i) + dtheta * T::lit(0.37));
        let (bx, by) = field_at(scene, p)?;
        best = best.max((bx.norm_sqr() + by.norm_sqr()).sqrt());
    }
    Ok(best)
}
