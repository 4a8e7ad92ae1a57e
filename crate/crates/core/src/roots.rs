//! All roots of a monic complex polynomial by Aberth–Ehrlich iteration.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::Phasor;
use crate::scalar::Real;

pub const MAX_ITERATIONS: usize = 100;
pub const TOLERANCE: f64 = 1e-12;

/// Roots of `z^n + c_{n−1} z^{n−1} + … + c_0` and how they were found.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet<T> {
    pub roots: Vec<Phasor<T>>,
    pub iterations: usize,
    /// Iteration reached the step tolerance (clusters may stop on residual instead).
    pub converged: bool,
    /// Some pair of roots is closer than 1e-8 · max(|root|).
    pub clustered: bool,
    /// max |p(root)|.
    pub max_residual: T,
}

/// p(z) and p'(z) for the monic polynomial with low-order coefficients `c`.
fn eval_monic<T: Real>(c: &[Phasor<T>], z: Phasor<T>) -> (Phasor<T>, Phasor<T>) {
    let mut p = Complex::new(T::one(), T::zero());
    let mut dp = Complex::new(T::zero(), T::zero());
    for &ci in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

fn residual_bound<T: Real>(c: &[Phasor<T>]) -> T {
    let cmax = c.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let tol = T::lit(1e-8).max(T::epsilon() * T::lit(1e3));
    tol * cmax.max(T::one())
}

/// Minimum pairwise distance, or infinity for fewer than two roots.
pub fn min_separation<T: Real>(roots: &[Phasor<T>]) -> T {
    let mut best = T::infinity();
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    best
}

/// Whether any two entries are within `1e-8 · max|root|` of each other.
pub fn is_clustered<T: Real>(roots: &[Phasor<T>]) -> bool {
    let scale = roots.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let tol = T::lit(1e-8).max(T::epsilon() * T::lit(10.0));
    roots.len() > 1 && min_separation(roots) <= tol * scale
}

/// Fujiwara-type bound on root magnitudes.
fn root_radius<T: Real>(c: &[Phasor<T>]) -> T {
    let n = c.len();
    c.iter().enumerate().map(|(k, ck)| ck.norm().powf(T::one() / T::from_usize_lossy(n - k))).fold(T::zero(), T::max)
}

fn aberth_pass<T: Real>(c: &[Phasor<T>], z: &mut [Phasor<T>], tol: T) -> (usize, bool) {
    let n = z.len();
    for it in 1..=MAX_ITERATIONS {
        let mut max_step = T::zero();
        for i in 0..n {
            let (p, dp) = eval_monic(c, z[i]);
            if p == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex::new(T::one(), T::zero()) - ratio * s);
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[i] -= w;
            max_step = max_step.max(w.norm() / z[i].norm().max(T::one()));
        }
        if max_step <= tol {
            return (it, true);
        }
    }
    (MAX_ITERATIONS, false)
}

/// Newton steps accepted only while they reduce |p|.
fn polish<T: Real>(c: &[Phasor<T>], z: &mut Phasor<T>) {
    for _ in 0..3 {
        let (p, dp) = eval_monic(c, *z);
        if dp.norm() == T::zero() {
            return;
        }
        let cand = *z - p / dp;
        if eval_monic(c, cand).0.norm() < p.norm() {
            *z = cand;
        } else {
            return;
        }
    }
}

/// Finds all `c.len()` roots of the monic polynomial `z^n + Σ c_k z^k`.
pub fn roots_of_monic<T: Real>(c: &[Phasor<T>]) -> Result<RootSet<T>> {
    let n = c.len();
    if n == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            iterations: 0,
            converged: true,
            clustered: false,
            max_residual: T::zero(),
        });
    }
    if c.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("polynomial coefficients"));
    }
    let radius = root_radius(c);
    if radius == T::zero() {
        // z^n: every root is exactly zero
        return Ok(RootSet {
            roots: vec![Complex::new(T::zero(), T::zero()); n],
            iterations: 0,
            converged: true,
            clustered: n > 1,
            max_residual: T::zero(),
        });
    }
    let tol = T::lit(TOLERANCE).max(T::epsilon() * T::lit(8.0));
    let bound = residual_bound(c);
    let mut total = 0;
    // restart from rotated initial circles if the first attempt stalls
    for attempt in 0..4 {
        let offset = T::lit(0.4 + 0.7 * attempt as f64);
        let mut z: Vec<Phasor<T>> = (0..n)
            .map(|k| {
                let theta = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n) + offset;
                Complex::from_polar(radius, theta)
            })
            .collect();
        let (its, converged) = aberth_pass(c, &mut z, tol);
        total += its;
        for zi in z.iter_mut() {
            polish(c, zi);
        }
        let max_residual = z.iter().map(|&zi| eval_monic(c, zi).0.norm()).fold(T::zero(), T::max);
        if max_residual <= bound {
            let clustered = is_clustered(&z);
            return Ok(RootSet { roots: z, iterations: total, converged, clustered, max_residual });
        }
    }
    Err(Error::NoConvergence(total))
}

/// Coefficients `c_0..c_{n−1}` of the monic polynomial with the given roots.
pub fn monic_from_roots<T: Real>(roots: &[Phasor<T>]) -> Vec<Phasor<T>> {
    let mut poly = vec![Complex::new(T::one(), T::zero())];
    for &r in roots {
        let mut next = vec![Complex::new(T::zero(), T::zero()); poly.len() + 1];
        for (k, &a) in poly.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        poly = next;
    }
    poly.pop();
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Phasor<f64> {
        Complex::new(re, im)
    }

    fn sorted(mut v: Vec<Phasor<f64>>) -> Vec<Phasor<f64>> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn unit_square_roots() {
        let r = roots_of_monic(&[c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let r = sorted(r.roots);
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn kernel_value_cubic_round_trip() {
        let truth = vec![c(1.44689, -0.79044), c(1.64872, 0.0), c(1.44689, 0.79044)];
        let coeffs = monic_from_roots(&truth);
        let found = roots_of_monic(&coeffs).unwrap();
        assert!(found.converged && !found.clustered);
        for t in &truth {
            let d = found.roots.iter().map(|r| (r - t).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-9, "{t}: {d}");
        }
    }

    #[test]
    fn triple_zero_flagged() {
        let r = roots_of_monic(&[c(0.0, 0.0); 3]).unwrap();
        assert_eq!(r.roots, vec![c(0.0, 0.0); 3]);
        assert!(r.clustered);
    }

    #[test]
    fn double_root_passes_residual() {
        // (z - 1)^2 (z + 2)
        let coeffs = monic_from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)]);
        let r = roots_of_monic(&coeffs).unwrap();
        assert!(r.max_residual <= 1e-8 * 3.0);
    }

    #[test]
    fn linear_case() {
        let r = roots_of_monic(&[c(-1.6487, 0.0)]).unwrap();
        assert!((r.roots[0] - c(1.6487, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn expanded_coefficients() {
        let coeffs = monic_from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(coeffs, vec![c(-1.0, 0.0), c(0.0, 0.0)]);
    }
}
