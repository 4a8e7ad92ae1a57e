//! Domain types shared by the forward model, the moment integrals and the
//! inversion. Quantities are SI: meters, amperes, tesla.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Complex amplitude of a time-harmonic quantity, `exp(jωt)` suppressed.
pub type Phasor<T> = Complex<T>;

#[inline]
pub(crate) fn finite_phasor<T: Real>(z: Phasor<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Builds a phasor, rejecting NaN and infinities.
pub fn phasor<T: Real>(re: T, im: T) -> Result<Phasor<T>> {
    let z = Complex::new(re, im);
    if finite_phasor(z) {
        Ok(z)
    } else {
        Err(Error::NonFinite("phasor"))
    }
}

/// A point in the transverse plane.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point2<T> {
    x: T,
    y: T,
}

impl<T: Real> Point2<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFinite("point"))
        }
    }

    /// Caller guarantees finiteness.
    #[inline]
    pub(crate) fn raw(x: T, y: T) -> Self {
        debug_assert!(x.is_finite() && y.is_finite());
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self { x: T::zero(), y: T::zero() }
    }

    /// Point at radius `r` and angle `theta` around `center`.
    pub fn polar(center: Self, r: T, theta: T) -> Self {
        Self::raw(center.x + r * theta.cos(), center.y + r * theta.sin())
    }

    #[inline]
    pub fn x(&self) -> T {
        self.x
    }

    #[inline]
    pub fn y(&self) -> T {
        self.y
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    #[inline]
    pub fn lerp(&self, other: &Self, t: T) -> Self {
        Self::raw(self.x * (T::one() - t) + other.x * t, self.y * (T::one() - t) + other.y * t)
    }

    /// Scales both coordinates; used when scenario files are given in units of r_meas.
    pub fn scaled(&self, s: T) -> Self {
        Self::raw(self.x * s, self.y * s)
    }
}

impl<T: Real> fmt::Display for Point2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An infinitely long line conductor along ẑ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conductor<T> {
    pub position: Point2<T>,
    pub current: Phasor<T>,
}

impl<T: Real> Conductor<T> {
    pub fn new(position: Point2<T>, current: Phasor<T>) -> Result<Self> {
        if !finite_phasor(current) {
            return Err(Error::NonFinite("conductor current"));
        }
        Ok(Self { position, current })
    }

    /// Convenience constructor from raw coordinates and current parts.
    pub fn at(x: T, y: T, re: T, im: T) -> Result<Self> {
        Self::new(Point2::new(x, y)?, phasor(re, im)?)
    }
}

/// Sorts conductors by ascending x, ties by ascending y.
pub fn canonical_order<T: Real>(conductors: &mut [Conductor<T>]) {
    conductors.sort_by(|a, b| canonical_cmp(&a.position, &b.position));
}

pub(crate) fn canonical_cmp<T: Real>(a: &Point2<T>, b: &Point2<T>) -> Ordering {
    a.x().partial_cmp(&b.x()).unwrap_or(Ordering::Equal).then(a.y().partial_cmp(&b.y()).unwrap_or(Ordering::Equal))
}

/// The transverse magnetic field measured at one contour point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample<T> {
    pub position: Point2<T>,
    pub bx: Phasor<T>,
    pub by: Phasor<T>,
}

impl<T: Real> FieldSample<T> {
    pub fn new(position: Point2<T>, bx: Phasor<T>, by: Phasor<T>) -> Result<Self> {
        if !finite_phasor(bx) || !finite_phasor(by) {
            return Err(Error::NonFinite("field sample"));
        }
        Ok(Self { position, bx, by })
    }

    /// sqrt(|Bx|² + |By|²)
    pub fn magnitude(&self) -> T {
        (self.bx.norm_sqr() + self.by.norm_sqr()).sqrt()
    }
}

/// Twice the signed area of the polygon through `points`; positive when counterclockwise.
pub fn signed_area2<T: Real>(points: impl IntoIterator<Item = Point2<T>>) -> T {
    let pts: Vec<Point2<T>> = points.into_iter().collect();
    let n = pts.len();
    (0..n)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            a.x * b.y - b.x * a.y
        })
        .sum()
}

/// Winding-number test for a point against a closed polygon.
pub fn point_in_polygon<T: Real>(p: &Point2<T>, polygon: &[Point2<T>]) -> bool {
    let n = polygon.len();
    let mut winding = 0i32;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
        if a.y <= p.y {
            if b.y > p.y && cross > T::zero() {
                winding += 1;
            }
        } else if b.y <= p.y && cross < T::zero() {
            winding -= 1;
        }
    }
    winding != 0
}

/// Counterclockwise closed loop of field samples. Segment `i` runs from
/// sample `i` to sample `(i + 1) % n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSet<T> {
    samples: Vec<FieldSample<T>>,
    r_meas: T,
    circular: bool,
}

impl<T: Real> MeasurementSet<T> {
    /// A general polygonal contour. `r_meas` is the length scale reported with it.
    pub fn new(samples: Vec<FieldSample<T>>, r_meas: T) -> Result<Self> {
        let n = samples.len();
        if n < 3 {
            return Err(Error::InvalidMeasurementSet(format!("need at least 3 samples, got {n}")));
        }
        if !(r_meas.is_finite() && r_meas > T::zero()) {
            return Err(Error::InvalidMeasurementSet("r_meas must be positive".into()));
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if samples[i].position == samples[j].position {
                return Err(Error::InvalidMeasurementSet(format!("samples {i} and {j} coincide")));
            }
        }
        if signed_area2(samples.iter().map(|s| s.position)) <= T::zero() {
            return Err(Error::InvalidMeasurementSet("contour is not counterclockwise".into()));
        }
        Ok(Self { samples, r_meas, circular: false })
    }

    /// Samples on the circle of radius `r_meas` about the origin.
    pub fn circular(samples: Vec<FieldSample<T>>, r_meas: T) -> Result<Self> {
        let tol = r_meas * T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        for (i, s) in samples.iter().enumerate() {
            if (s.position.norm() - r_meas).abs() > tol {
                return Err(Error::InvalidMeasurementSet(format!("sample {i} is off the circle of radius {r_meas}")));
            }
        }
        let mut ms = Self::new(samples, r_meas)?;
        ms.circular = true;
        Ok(ms)
    }

    pub fn samples(&self) -> &[FieldSample<T>] {
        &self.samples
    }

    pub fn n_meas(&self) -> usize {
        self.samples.len()
    }

    pub fn r_meas(&self) -> T {
        self.r_meas
    }

    pub fn is_circular(&self) -> bool {
        self.circular
    }

    pub fn positions(&self) -> Vec<Point2<T>> {
        self.samples.iter().map(|s| s.position).collect()
    }

    /// Replaces the field values, keeping the geometry.
    pub fn with_samples(&self, samples: Vec<FieldSample<T>>) -> Result<Self> {
        if samples.len() != self.samples.len() {
            return Err(Error::LengthMismatch(samples.len(), self.samples.len()));
        }
        Ok(Self { samples, r_meas: self.r_meas, circular: self.circular })
    }

    /// The subsets at even and odd sample indices.
    pub fn split_parity(&self) -> Result<(Self, Self)> {
        let n = self.n_meas();
        if !n.is_multiple_of(2) {
            return Err(Error::OddSampleCount(n));
        }
        let pick = |parity: usize| {
            let s: Vec<_> = self.samples.iter().skip(parity).step_by(2).copied().collect();
            let ms = Self::new(s, self.r_meas)?;
            Ok::<_, Error>(Self { circular: self.circular, ..ms })
        };
        Ok((pick(0)?, pick(1)?))
    }
}

/// Contour moments `b_m`, indexed by `m = 0..=m_max`, in amperes.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector<T> {
    values: Vec<Phasor<T>>,
}

impl<T: Real> MomentVector<T> {
    pub fn new(values: Vec<Phasor<T>>) -> Result<Self> {
        if values.iter().all(|&z| finite_phasor(z)) {
            Ok(Self { values })
        } else {
            Err(Error::NonFinite("moment vector"))
        }
    }

    pub fn zeros(m_max: usize) -> Self {
        Self { values: vec![Complex::new(T::zero(), T::zero()); m_max + 1] }
    }

    pub fn values(&self) -> &[Phasor<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn m_max(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn get(&self, m: usize) -> Result<Phasor<T>> {
        self.values.get(m).copied().ok_or(Error::TooFewMoments { needed: m, available: self.values.len() })
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Phasor<T>] {
        &mut self.values
    }
}

impl<T: Real> std::ops::Index<usize> for MomentVector<T> {
    type Output = Phasor<T>;
    fn index(&self, m: usize) -> &Phasor<T> {
        &self.values[m]
    }
}

/// Inversion parameters: number of conductors and the two moment offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReconParams {
    pub n: usize,
    pub m_offset: usize,
    pub l_offset: usize,
    pub quadrature_order: usize,
}

impl Default for ReconParams {
    fn default() -> Self {
        Self { n: 3, m_offset: 1, l_offset: 1, quadrature_order: 8 }
    }
}

impl ReconParams {
    /// Highest moment index the inversion reads.
    pub fn m_max(&self) -> usize {
        (self.l_offset + 2 * self.n).max(self.m_offset + self.n).saturating_sub(1)
    }
}

/// A complete experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<T> {
    pub internal: Vec<Conductor<T>>,
    pub external: Vec<Conductor<T>>,
    pub r_meas: T,
    pub n_meas: usize,
    pub noise_sigma_ref: T,
    pub seed: u64,
    pub runs: usize,
    pub recon: ReconParams,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NonPositiveRadius,
    TooFewSamples(usize),
    InternalOutsideContour(usize),
    InternalOutsideHalfContour(usize),
    ExternalNotOutside(usize),
    KernelStrip(usize),
    NegativeSigma,
    ZeroQuadratureOrder,
    ConductorCountMismatch { declared: usize, internal: usize },
    NoRuns,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveRadius => write!(f, "r_meas must be positive"),
            Violation::TooFewSamples(n) => write!(f, "n_meas = {n} < 3"),
            Violation::InternalOutsideContour(i) => {
                write!(f, "internal conductor {i}: conductor outside contour")
            }
            Violation::InternalOutsideHalfContour(i) => {
                write!(f, "internal conductor {i}: outside the half-sampled contour")
            }
            Violation::ExternalNotOutside(i) => {
                write!(f, "external conductor {i}: not strictly outside contour")
            }
            Violation::KernelStrip(i) => {
                write!(f, "internal conductor {i}: kernel invertibility |x| < πR violated")
            }
            Violation::NegativeSigma => write!(f, "sigma_ref must be non-negative"),
            Violation::ZeroQuadratureOrder => write!(f, "quadrature order must be at least 1"),
            Violation::ConductorCountMismatch { declared, internal } => {
                write!(f, "declared N = {declared} but {internal} internal conductors given")
            }
            Violation::NoRuns => write!(f, "runs must be at least 1"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

/// Uniform counterclockwise grid on the circle, starting at angle 0.
pub fn circle_points<T: Real>(r: T, n: usize) -> Vec<Point2<T>> {
    let step = T::TAU() / T::from_usize_lossy(n);
    (0..n).map(|k| Point2::polar(Point2::origin(), r, step * T::from_usize_lossy(k))).collect()
}

/// Checks every scenario invariant and reports all violations.
pub fn validate_scenario<T: Real>(s: &Scenario<T>) -> ValidationReport {
    let mut v = Vec::new();
    if !(s.r_meas > T::zero()) {
        v.push(Violation::NonPositiveRadius);
    }
    if s.n_meas < 3 {
        v.push(Violation::TooFewSamples(s.n_meas));
    }
    let polygon = if s.n_meas >= 3 && s.r_meas > T::zero() { circle_points(s.r_meas, s.n_meas) } else { Vec::new() };
    let half: Vec<_> = if s.n_meas.is_multiple_of(2) && s.n_meas >= 6 {
        polygon.iter().step_by(2).copied().collect()
    } else {
        Vec::new()
    };
    for (i, c) in s.internal.iter().enumerate() {
        let p = c.position;
        if !polygon.is_empty() && !point_in_polygon(&p, &polygon) {
            v.push(Violation::InternalOutsideContour(i));
        } else if !half.is_empty() && !point_in_polygon(&p, &half) {
            v.push(Violation::InternalOutsideHalfContour(i));
        }
        if p.x().abs() >= T::PI() * s.r_meas {
            v.push(Violation::KernelStrip(i));
        }
    }
    for (i, c) in s.external.iter().enumerate() {
        if c.position.norm() <= s.r_meas {
            v.push(Violation::ExternalNotOutside(i));
        }
    }
    if s.noise_sigma_ref < T::zero() || !s.noise_sigma_ref.is_finite() {
        v.push(Violation::NegativeSigma);
    }
    if s.recon.quadrature_order == 0 {
        v.push(Violation::ZeroQuadratureOrder);
    }
    if s.recon.n != s.internal.len() {
        v.push(Violation::ConductorCountMismatch { declared: s.recon.n, internal: s.internal.len() });
    }
    if s.runs == 0 {
        v.push(Violation::NoRuns);
    }
    ValidationReport { violations: v }
}
