//! Explicit recovery of line-current positions and currents from moments.
//!
//! With `b_m = Σ_n I_n f_n^m`, the kernel values `f_n` are the roots of the
//! monic polynomial whose coefficients `c` solve the Hankel system
//! `C_L c = −(b_{L+N}, …, b_{L+2N−1})`, row `i` of `C_L` being
//! `(b_{L+i}, …, b_{L+i+N−1})`. The currents then solve the Vandermonde-type
//! system `F_M I = (b_M, …, b_{M+N−1})` with `(F_M)_{i,n} = f_n^{M+i}`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::solve_dense;
use crate::model::{canonical_cmp, Conductor, MomentVector, Phasor, Point2};
use crate::moments::HarmonicKernel;
use crate::roots::{self, min_separation, RootSet};
use crate::scalar::Real;

/// Polynomial coefficients `c_0..c_{N−1}` with the conditioning of `C_L`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficients<T> {
    pub c: Vec<Phasor<T>>,
    pub cond: T,
}

/// Currents with the conditioning of `F_M`.
#[derive(Clone, Debug, PartialEq)]
pub struct Currents<T> {
    pub currents: Vec<Phasor<T>>,
    pub cond: T,
}

/// Recovered conductors and diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult<T> {
    /// Canonically ordered: ascending x, then y.
    pub conductors: Vec<Conductor<T>>,
    /// Kernel values `f_n`, in the same order as `conductors`.
    pub root_values: Vec<Phasor<T>>,
    pub cond_c: T,
    pub cond_f: T,
    /// max over the moments used of |Σ I_n f_n^m − b_m|.
    pub moment_residual: T,
    pub root_iterations: usize,
}

fn moment<T: Real>(b: &MomentVector<T>, m: usize) -> Result<Phasor<T>> {
    b.get(m)
}

/// Solves `C_L c = −b_{L+N}` for the monic-polynomial coefficients.
pub fn solve_coefficients<T: Real>(b: &MomentVector<T>, n: usize, l_offset: usize) -> Result<Coefficients<T>> {
    if n == 0 {
        return Ok(Coefficients { c: Vec::new(), cond: T::one() });
    }
    let needed = l_offset + 2 * n - 1;
    if b.len() <= needed {
        return Err(Error::TooFewMoments { needed, available: b.len() });
    }
    let mut a = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(moment(b, l_offset + i + j)?);
        }
    }
    let rhs = (0..n).map(|i| moment(b, l_offset + n + i).map(|v| -v)).collect::<Result<Vec<_>>>()?;
    let s = solve_dense(a, n, rhs)?;
    Ok(Coefficients { c: s.x, cond: s.cond_estimate })
}

pub fn roots_of_monic<T: Real>(c: &[Phasor<T>]) -> Result<RootSet<T>> {
    roots::roots_of_monic(c)
}

/// Solves `F_M I = b_M` for the currents given the kernel values.
pub fn solve_currents<T: Real>(roots: &[Phasor<T>], b: &MomentVector<T>, m_offset: usize) -> Result<Currents<T>> {
    let n = roots.len();
    if n == 0 {
        return Ok(Currents { currents: Vec::new(), cond: T::one() });
    }
    let needed = m_offset + n - 1;
    if b.len() <= needed {
        return Err(Error::TooFewMoments { needed, available: b.len() });
    }
    let scale = roots.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let sep = min_separation(roots);
    let tol = T::lit(1e-8).max(T::epsilon() * T::lit(10.0));
    if n > 1 && !(sep > tol * scale) {
        return Err(Error::ClusteredRoots { separation: sep.to_f64().unwrap_or(0.0) });
    }
    let mut a = vec![Complex::new(T::zero(), T::zero()); n * n];
    for (col, &f) in roots.iter().enumerate() {
        let mut pow = f.powu(m_offset as u32);
        for row in 0..n {
            a[row * n + col] = pow;
            pow *= f;
        }
    }
    let rhs = (0..n).map(|i| moment(b, m_offset + i)).collect::<Result<Vec<_>>>()?;
    let s = solve_dense(a, n, rhs)?;
    Ok(Currents { currents: s.x, cond: s.cond_estimate })
}

/// max over `m` in `range` of |Σ I_n f_n^m − b_m|.
pub fn moment_residual<T: Real>(
    roots: &[Phasor<T>],
    currents: &[Phasor<T>],
    b: &MomentVector<T>,
    range: std::ops::RangeInclusive<usize>,
) -> T {
    range
        .filter_map(|m| {
            let bm = b.get(m).ok()?;
            let model: Phasor<T> = roots
                .iter()
                .zip(currents)
                .map(|(f, i)| *i * f.powu(m as u32))
                .fold(Complex::new(T::zero(), T::zero()), |a, v| a + v);
            Some((model - bm).norm())
        })
        .fold(T::zero(), T::max)
}

/// Full inversion: coefficients → roots → currents → positions.
pub fn reconstruct<T: Real>(
    b: &MomentVector<T>,
    k: &HarmonicKernel<T>,
    n: usize,
    m_offset: usize,
    l_offset: usize,
) -> Result<ReconstructionResult<T>> {
    if n == 0 {
        return Ok(ReconstructionResult {
            conductors: Vec::new(),
            root_values: Vec::new(),
            cond_c: T::one(),
            cond_f: T::one(),
            moment_residual: T::zero(),
            root_iterations: 0,
        });
    }
    let coeffs = solve_coefficients(b, n, l_offset)?;
    let rs = roots::roots_of_monic(&coeffs.c)?;
    if rs.clustered {
        return Err(Error::ClusteredRoots { separation: min_separation(&rs.roots).to_f64().unwrap_or(0.0) });
    }
    let currents = solve_currents(&rs.roots, b, m_offset)?;
    let lo = m_offset.min(l_offset);
    let hi = (l_offset + 2 * n - 1).max(m_offset + n - 1);
    let residual = moment_residual(&rs.roots, &currents.currents, b, lo..=hi);

    let mut pairs: Vec<(Conductor<T>, Phasor<T>)> = rs
        .roots
        .iter()
        .zip(&currents.currents)
        .map(|(&f, &i)| Ok((Conductor::new(k.invert(f)?, i)?, f)))
        .collect::<Result<_>>()?;
    pairs.sort_by(|a, b| canonical_cmp(&a.0.position, &b.0.position));
    let (conductors, root_values) = pairs.into_iter().unzip();
    Ok(ReconstructionResult {
        conductors,
        root_values,
        cond_c: coeffs.cond,
        cond_f: currents.cond,
        moment_residual: residual,
        root_iterations: rs.iterations,
    })
}

/// Currents at known positions: `f_n` from the kernel, then `F_M I = b_M`.
pub fn currents_only<T: Real>(
    positions: &[Point2<T>],
    b: &MomentVector<T>,
    k: &HarmonicKernel<T>,
    m_offset: usize,
) -> Result<Vec<Phasor<T>>> {
    let f: Vec<_> = positions
        .iter()
        .map(|p| {
            if k.in_strip(p) {
                Ok(k.eval(*p))
            } else {
                let v = k.eval(*p);
                Err(Error::OutsideStrip {
                    re: v.re.to_f64().unwrap_or(f64::NAN),
                    im: v.im.to_f64().unwrap_or(f64::NAN),
                })
            }
        })
        .collect::<Result<_>>()?;
    Ok(solve_currents(&f, b, m_offset)?.currents)
}

/// Assignment `perm` minimizing `Σ_i |recovered[perm[i]] − truth[i]|`,
/// exhaustive over permutations. Requires equal lengths.
pub fn match_to_truth<T: Real>(recovered: &[Point2<T>], truth: &[Point2<T>]) -> Result<Vec<usize>> {
    if recovered.len() != truth.len() {
        return Err(Error::LengthMismatch(recovered.len(), truth.len()));
    }
    let n = truth.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = perm.clone();
    let mut best_cost = T::infinity();
    permute(&mut perm, 0, &mut |p| {
        let cost: T = p.iter().enumerate().map(|(i, &j)| recovered[j].dist(&truth[i])).sum();
        if cost < best_cost {
            best_cost = cost;
            best = p.to_vec();
        }
    });
    Ok(best)
}

fn permute(v: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}
