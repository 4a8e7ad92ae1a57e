//! Harmonic-kernel contour moments.
//!
//! For a counterclockwise contour `C` and the analytic kernel
//! `f(x, y) = exp((jx − y)/R)`, the moments
//!
//! ```text
//! b_m = (1/μ0) ∮_C [ j n̂·B + t̂·B ] f^m dl
//! ```
//!
//! equal `Σ I_n f(r_n)^m` over the line currents enclosed by `C`; currents
//! outside `C` contribute nothing. On a polygon through the samples the
//! field is interpolated linearly along each chord and the chord integral
//! is evaluated by Gauss–Legendre quadrature.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{finite_phasor, Conductor, FieldSample, MeasurementSet, MomentVector, Phasor, Point2};
use crate::quadrature::GaussLegendre;
use crate::scalar::{mu0, Real};

/// Default Gauss–Legendre order per contour segment.
pub const DEFAULT_QUAD_ORDER: usize = 8;

/// The kernel `f(x, y) = exp((jx − y)/r_scale)`, i.e. `exp(j w / r_scale)`
/// with `w = x + jy`. Invertible on the strip `|x| < π r_scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicKernel<T> {
    r_scale: T,
}

impl<T: Real> HarmonicKernel<T> {
    pub fn new(r_scale: T) -> Result<Self> {
        if !(r_scale.is_finite() && r_scale > T::zero()) {
            return Err(Error::InvalidScenario("kernel scale must be positive".into()));
        }
        Ok(Self { r_scale })
    }

    pub fn r_scale(&self) -> T {
        self.r_scale
    }

    /// Orientation sign in `k = α(x̂ + j s ŷ)`; fixed to +1 together with
    /// counterclockwise contours.
    pub const fn sign(&self) -> i8 {
        1
    }

    #[inline]
    pub fn eval(&self, r: Point2<T>) -> Phasor<T> {
        let mag = (-r.y() / self.r_scale).exp();
        let arg = r.x() / self.r_scale;
        Complex::new(mag * arg.cos(), mag * arg.sin())
    }

    /// Principal-branch inverse: x = R·Im ln f, y = −R·Re ln f.
    pub fn invert(&self, value: Phasor<T>) -> Result<Point2<T>> {
        if !finite_phasor(value) || value.norm() == T::zero() {
            return Err(Error::ZeroArgument);
        }
        let arg = value.arg();
        // the branch cut |x| = πR is the boundary of the open strip
        if T::PI() - arg.abs() <= T::epsilon() * T::lit(4.0) * T::PI() {
            return Err(Error::OutsideStrip {
                re: value.re.to_f64().unwrap_or(f64::NAN),
                im: value.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        Point2::new(self.r_scale * arg, -self.r_scale * value.norm().ln())
    }

    /// Whether `r` lies in the open invertibility strip.
    pub fn in_strip(&self, r: &Point2<T>) -> bool {
        r.x().abs() < T::PI() * self.r_scale
    }
}

pub fn kernel_eval<T: Real>(k: &HarmonicKernel<T>, r: Point2<T>) -> Phasor<T> {
    k.eval(r)
}

pub fn kernel_invert<T: Real>(k: &HarmonicKernel<T>, value: Phasor<T>) -> Result<Point2<T>> {
    k.invert(value)
}

/// `b_m = Σ_n I_n f(r_n)^m` for `m = 0..=m_max`.
pub fn exact_moments<T: Real>(conductors: &[Conductor<T>], k: &HarmonicKernel<T>, m_max: usize) -> MomentVector<T> {
    let mut b = MomentVector::zeros(m_max);
    for c in conductors {
        let f = k.eval(c.position);
        let mut term = c.current;
        for bm in b.values_mut().iter_mut() {
            *bm += term;
            term *= f;
        }
    }
    b
}

/// Moments `m = 0..=m_max` of one straight chord from `s1` to `s2`, with
/// the field interpolated linearly between the two samples.
pub fn segment_moments<T: Real>(
    s1: &FieldSample<T>,
    s2: &FieldSample<T>,
    k: &HarmonicKernel<T>,
    m_max: usize,
    quad: &GaussLegendre<T>,
) -> Result<Vec<Phasor<T>>> {
    let (r1, r2) = (s1.position, s2.position);
    let len = r1.dist(&r2);
    if !(len > T::zero()) {
        return Err(Error::DegenerateSegment(0, 1));
    }
    let tx = (r2.x() - r1.x()) / len;
    let ty = (r2.y() - r1.y()) / len;
    // s = +1
    let wx = Complex::new(tx, ty);
    let wy = Complex::new(ty, -tx);
    let scale = len / mu0::<T>();
    let mut out = vec![Complex::new(T::zero(), T::zero()); m_max + 1];
    for (t, w) in quad.iter() {
        let bx = s1.bx * (T::one() - t) + s2.bx * t;
        let by = s1.by * (T::one() - t) + s2.by * t;
        let g = (bx * wx + by * wy) * (w * scale);
        let f = k.eval(r1.lerp(&r2, t));
        let mut term = g;
        for o in out.iter_mut() {
            *o += term;
            term *= f;
        }
    }
    Ok(out)
}

/// Single-`m` chord moment
/// `(|r2 − r1|/μ0) ∫₀¹ [B_x(t)(t_x + j t_y) + B_y(t)(t_y − j t_x)] f(r(t))^m dt`.
pub fn segment_moment<T: Real>(
    s1: &FieldSample<T>,
    s2: &FieldSample<T>,
    k: &HarmonicKernel<T>,
    m: usize,
    quad_order: usize,
) -> Result<Phasor<T>> {
    let quad = GaussLegendre::new(quad_order.max(1));
    Ok(segment_moments(s1, s2, k, m, &quad)?[m])
}

/// Sum of chord moments over the closed polygon of a measurement set.
pub fn contour_moments<T: Real>(
    ms: &MeasurementSet<T>,
    k: &HarmonicKernel<T>,
    m_max: usize,
    quad_order: usize,
) -> Result<MomentVector<T>> {
    let quad = GaussLegendre::new(quad_order.max(1));
    contour_moments_with(ms, k, m_max, &quad)
}

pub fn contour_moments_with<T: Real>(
    ms: &MeasurementSet<T>,
    k: &HarmonicKernel<T>,
    m_max: usize,
    quad: &GaussLegendre<T>,
) -> Result<MomentVector<T>> {
    let s = ms.samples();
    let n = s.len();
    let mut b = MomentVector::zeros(m_max);
    for i in 0..n {
        let j = (i + 1) % n;
        let seg = segment_moments(&s[i], &s[j], k, m_max, quad).map_err(|e| match e {
            Error::DegenerateSegment(..) => Error::DegenerateSegment(i, j),
            e => e,
        })?;
        for (acc, v) in b.values_mut().iter_mut().zip(seg) {
            *acc += v;
        }
    }
    MomentVector::new(b.values().to_vec())
}

/// Elementwise `(8·b_all − b_even − b_odd)/6`, cancelling the O(h²) term
/// shared by the full set and the two interleaved half sets.
pub fn richardson<T: Real>(
    all: &MomentVector<T>,
    even: &MomentVector<T>,
    odd: &MomentVector<T>,
) -> Result<MomentVector<T>> {
    if all.len() != even.len() {
        return Err(Error::LengthMismatch(all.len(), even.len()));
    }
    if all.len() != odd.len() {
        return Err(Error::LengthMismatch(all.len(), odd.len()));
    }
    let six = T::lit(6.0);
    let eight = T::lit(8.0);
    let v = all
        .values()
        .iter()
        .zip(even.values())
        .zip(odd.values())
        .map(|((&a, &e), &o)| (a * eight - e - o) / six)
        .collect();
    MomentVector::new(v)
}

/// The moment columns of a Richardson-extrapolated measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<T> {
    pub even: MomentVector<T>,
    pub odd: MomentVector<T>,
    pub all: MomentVector<T>,
    pub extrapolated: MomentVector<T>,
}

/// Splits `ms` by index parity, integrates all three contours and extrapolates.
pub fn extrapolated_moments<T: Real>(
    ms: &MeasurementSet<T>,
    k: &HarmonicKernel<T>,
    m_max: usize,
    quad_order: usize,
) -> Result<MomentTable<T>> {
    let quad = GaussLegendre::new(quad_order.max(1));
    let (even_set, odd_set) = ms.split_parity()?;
    let all = contour_moments_with(ms, k, m_max, &quad)?;
    let even = contour_moments_with(&even_set, k, m_max, &quad)?;
    let odd = contour_moments_with(&odd_set, k, m_max, &quad)?;
    let extrapolated = richardson(&all, &even, &odd)?;
    Ok(MomentTable { even, odd, all, extrapolated })
}
