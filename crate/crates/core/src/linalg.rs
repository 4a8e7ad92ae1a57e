//! Dense complex Gaussian elimination with partial pivoting for the small
//! Hankel and Vandermonde systems of the inversion.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::Phasor;
use crate::scalar::Real;

/// Smallest admissible ratio min|pivot| / max|pivot|.
pub fn singular_threshold<T: Real>() -> T {
    T::lit(1e-13).max(T::epsilon() * T::lit(10.0))
}

/// Solution of `A x = b` with pivot diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSolve<T> {
    pub x: Vec<Phasor<T>>,
    /// min|pivot| / max|pivot|.
    pub pivot_ratio: T,
    /// max|pivot| / min|pivot|, a cheap condition estimate.
    pub cond_estimate: T,
}

/// Solves the row-major `n × n` system `a x = b`.
pub fn solve_dense<T: Real>(mut a: Vec<Phasor<T>>, n: usize, mut b: Vec<Phasor<T>>) -> Result<DenseSolve<T>> {
    if a.len() != n * n {
        return Err(Error::LengthMismatch(a.len(), n * n));
    }
    if b.len() != n {
        return Err(Error::LengthMismatch(b.len(), n));
    }
    if n == 0 {
        return Ok(DenseSolve { x: Vec::new(), pivot_ratio: T::one(), cond_estimate: T::one() });
    }
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let (prow, pmag) = (col..n).map(|r| (r, a[r * n + col].norm())).fold((col, -T::one()), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
        if prow != col {
            for k in 0..n {
                a.swap(col * n + k, prow * n + k);
            }
            b.swap(col, prow);
        }
        pivots.push(pmag);
        let p = a[col * n + col];
        if pmag == T::zero() {
            continue;
        }
        for r in (col + 1)..n {
            let factor = a[r * n + col] / p;
            if factor == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= factor * v;
            }
            let bv = b[col];
            b[r] -= factor * bv;
        }
    }
    let pmax = pivots.iter().copied().fold(T::zero(), T::max);
    let pmin = pivots.iter().copied().fold(T::infinity(), T::min);
    let ratio = if pmax > T::zero() { pmin / pmax } else { T::zero() };
    if !(ratio >= singular_threshold::<T>()) {
        return Err(Error::SingularSystem { ratio: ratio.to_f64().unwrap_or(0.0) });
    }
    let mut x = vec![Complex::new(T::zero(), T::zero()); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for k in (r + 1)..n {
            acc -= a[r * n + k] * x[k];
        }
        x[r] = acc / a[r * n + r];
    }
    Ok(DenseSolve { x, pivot_ratio: ratio, cond_estimate: pmax / pmin })
}
