//! End-to-end pipelines: clean-data study, Monte Carlo noise study and the
//! moment table.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::{add_noise, derive_seed, sample_circle_with, NoiseSpec};
use crate::model::{Conductor, MeasurementSet, Phasor, Point2, ReconParams, Scenario};
use crate::moments::{exact_moments, extrapolated_moments, HarmonicKernel, MomentTable};
use crate::prony::{match_to_truth, reconstruct, ReconstructionResult};

/// Sample counts of the clean-data study.
pub const CLEAN_STUDY_COUNTS: [usize; 3] = [72, 36, 18];

fn all_conductors(s: &Scenario<f64>) -> Vec<Conductor<f64>> {
    s.internal.iter().chain(&s.external).copied().collect()
}

/// Moments (even, odd, all, extrapolated) and inversion of one measurement.
pub fn pipeline(
    ms: &MeasurementSet<f64>,
    k: &HarmonicKernel<f64>,
    recon: &ReconParams,
) -> Result<(MomentTable<f64>, ReconstructionResult<f64>)> {
    let table = extrapolated_moments(ms, k, recon.m_max(), recon.quadrature_order)?;
    let result = reconstruct(&table.extrapolated, k, recon.n, recon.m_offset, recon.l_offset)?;
    Ok((table, result))
}

/// A reconstruction aligned with the true internal conductors.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSuccess {
    /// `conductors[i]` is matched to true internal conductor `i`.
    pub conductors: Vec<Conductor<f64>>,
    /// Displacement (x, y) from the truth as a fraction of r_meas.
    pub displacements: Vec<(f64, f64)>,
    /// |Δr| / r_meas.
    pub position_errors: Vec<f64>,
    /// |ΔI| in amperes.
    pub current_errors: Vec<f64>,
    pub cond_c: f64,
    pub cond_f: f64,
    pub moment_residual: f64,
}

fn align(result: &ReconstructionResult<f64>, truth: &[Conductor<f64>], r_meas: f64) -> Result<RunSuccess> {
    let rec: Vec<Point2<f64>> = result.conductors.iter().map(|c| c.position).collect();
    let tru: Vec<Point2<f64>> = truth.iter().map(|c| c.position).collect();
    let perm = match_to_truth(&rec, &tru)?;
    let conductors: Vec<_> = perm.iter().map(|&j| result.conductors[j]).collect();
    let displacements: Vec<_> = conductors
        .iter()
        .zip(truth)
        .map(|(c, t)| ((c.position.x() - t.position.x()) / r_meas, (c.position.y() - t.position.y()) / r_meas))
        .collect();
    Ok(RunSuccess {
        position_errors: displacements.iter().map(|(dx, dy)| dx.hypot(*dy)).collect(),
        current_errors: conductors.iter().zip(truth).map(|(c, t)| (c.current - t.current).norm()).collect(),
        conductors,
        displacements,
        cond_c: result.cond_c,
        cond_f: result.cond_f,
        moment_residual: result.moment_residual,
    })
}

/// Matches a reconstruction against the scenario's internal conductors.
pub fn align_to_truth(result: &ReconstructionResult<f64>, s: &Scenario<f64>) -> Result<RunSuccess> {
    align(result, &s.internal, s.r_meas)
}

fn run_once(s: &Scenario<f64>, ms: &MeasurementSet<f64>, k: &HarmonicKernel<f64>) -> Result<RunSuccess> {
    let (_, result) = pipeline(ms, k, &s.recon)?;
    align_to_truth(&result, s)
}

/// Samples at the scenario's `n_meas`, adding noise seeded directly with
/// `s.seed` when `noise_sigma_ref > 0`.
pub fn measure(s: &Scenario<f64>) -> Result<MeasurementSet<f64>> {
    let clean = sample_circle_with(&all_conductors(s), s.r_meas, s.n_meas)?;
    add_noise(&clean, NoiseSpec::new(s.noise_sigma_ref, s.seed)?)
}

/// Noise-free reconstruction at the scenario's own `n_meas`.
pub fn clean_reconstruction(s: &Scenario<f64>) -> Result<RunSuccess> {
    let k = HarmonicKernel::new(s.r_meas)?;
    let ms = sample_circle_with(&all_conductors(s), s.r_meas, s.n_meas)?;
    run_once(s, &ms, &k)
}

/// One row of the clean-data study; failures stay in their row.
#[derive(Clone, Debug, PartialEq)]
pub struct CleanRow {
    pub n_meas: usize,
    pub outcome: std::result::Result<RunSuccess, Error>,
}

/// Clean-data reconstruction for each of [`CLEAN_STUDY_COUNTS`]. Empty when
/// the scenario declares no internal conductors.
pub fn run_clean_study(s: &Scenario<f64>) -> Result<Vec<CleanRow>> {
    if s.recon.n == 0 {
        return Ok(Vec::new());
    }
    let k = HarmonicKernel::new(s.r_meas)?;
    let scene = all_conductors(s);
    Ok(CLEAN_STUDY_COUNTS
        .iter()
        .map(|&n_meas| {
            let outcome = sample_circle_with(&scene, s.r_meas, n_meas).and_then(|ms| run_once(s, &ms, &k));
            CleanRow { n_meas, outcome }
        })
        .collect())
}

/// One Monte Carlo run: the noise seed and either a result or the error.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub outcome: std::result::Result<RunSuccess, Error>,
}

/// Ensemble statistics for one true conductor over the successful runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub mean_position: (f64, f64),
    /// sqrt(mean |r − mean r|²).
    pub rms_position: f64,
    pub mean_current: Phasor<f64>,
    pub rms_current: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarlo {
    pub records: Vec<RunRecord>,
    /// Per true internal conductor; empty if no run succeeded.
    pub summary: Vec<Summary>,
}

impl MonteCarlo {
    pub fn successes(&self) -> impl Iterator<Item = &RunSuccess> {
        self.records.iter().filter_map(|r| r.outcome.as_ref().ok())
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.outcome.is_err()).count()
    }
}

fn summarize(ok: &[&RunSuccess], n: usize) -> Vec<Summary> {
    if ok.is_empty() {
        return Vec::new();
    }
    let count = ok.len() as f64;
    (0..n)
        .map(|i| {
            let (sx, sy, si) = ok.iter().fold((0.0, 0.0, Phasor::new(0.0, 0.0)), |(x, y, c), r| {
                let k = &r.conductors[i];
                (x + k.position.x(), y + k.position.y(), c + k.current)
            });
            let (mx, my, mi) = (sx / count, sy / count, si / count);
            let (vp, vi) = ok.iter().fold((0.0, 0.0), |(p, c), r| {
                let k = &r.conductors[i];
                let dp = (k.position.x() - mx).powi(2) + (k.position.y() - my).powi(2);
                (p + dp, c + (k.current - mi).norm_sqr())
            });
            Summary {
                mean_position: (mx, my),
                rms_position: (vp / count).sqrt(),
                mean_current: mi,
                rms_current: (vi / count).sqrt(),
            }
        })
        .collect()
}

/// `s.runs` noisy reconstructions at `s.n_meas`, run `i` seeded with
/// `derive_seed(s.seed, i)`. Records are ordered by run index.
pub fn run_montecarlo(s: &Scenario<f64>) -> Result<MonteCarlo> {
    let k = HarmonicKernel::new(s.r_meas)?;
    let clean = sample_circle_with(&all_conductors(s), s.r_meas, s.n_meas)?;
    let records: Vec<RunRecord> = (0..s.runs)
        .into_par_iter()
        .map(|run| {
            let seed = derive_seed(s.seed, run as u64);
            let outcome = NoiseSpec::new(s.noise_sigma_ref, seed)
                .and_then(|spec| add_noise(&clean, spec))
                .and_then(|ms| run_once(s, &ms, &k));
            RunRecord { run, seed, outcome }
        })
        .collect();
    let ok: Vec<&RunSuccess> = records.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
    let summary = summarize(&ok, s.internal.len());
    Ok(MonteCarlo { records, summary })
}

/// One row of the moment table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentRow {
    pub m: usize,
    pub even: Phasor<f64>,
    pub odd: Phasor<f64>,
    pub all: Phasor<f64>,
    pub extrapol: Phasor<f64>,
    pub exact: Phasor<f64>,
}

/// Even/odd/all/extrapolated contour moments of the full scene and exact
/// moments of the internal conductors for `m` in `ms`.
pub fn emit_moment_table(s: &Scenario<f64>, ms: RangeInclusive<usize>) -> Result<Vec<MomentRow>> {
    if !s.n_meas.is_multiple_of(2) {
        return Err(Error::OddSampleCount(s.n_meas));
    }
    let k = HarmonicKernel::new(s.r_meas)?;
    let m_max = *ms.end();
    let set = sample_circle_with(&all_conductors(s), s.r_meas, s.n_meas)?;
    let t = extrapolated_moments(&set, &k, m_max, s.recon.quadrature_order)?;
    let exact = exact_moments(&s.internal, &k, m_max);
    Ok(ms
        .map(|m| MomentRow {
            m,
            even: t.even[m],
            odd: t.odd[m],
            all: t.all[m],
            extrapol: t.extrapolated[m],
            exact: exact[m],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::scenario::reference_scenario;

    #[test]
    fn moment_row4_values() {
        let rows = emit_moment_table(&reference_scenario(), 1..=6).unwrap();
        let r = rows[3];
        assert_eq!(r.m, 4);
        let want = [(8.215, -4.648), (8.248, -4.612), (10.331, -3.934), (11.031, -3.702), (11.134, -3.644)];
        for (got, w) in [r.even, r.odd, r.all, r.extrapol, r.exact].iter().zip(want) {
            assert!((got.re - w.0).abs() <= 0.002 && (got.im - w.1).abs() <= 0.002, "{got} vs {w:?}");
        }
    }

    #[test]
    fn moment_rows_wider_range_keeps_rows() {
        let s = reference_scenario();
        let a = emit_moment_table(&s, 1..=6).unwrap();
        let b = emit_moment_table(&s, 1..=8).unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(&b[..6], &a[..]);
    }

    #[test]
    fn moment_rows_odd_count_rejected() {
        let mut s = reference_scenario();
        s.n_meas = 35;
        assert_eq!(emit_moment_table(&s, 1..=6), Err(Error::OddSampleCount(35)));
    }

    #[test]
    fn clean_study_row_36_current() {
        let rows = run_clean_study(&reference_scenario()).unwrap();
        assert_eq!(rows.iter().map(|r| r.n_meas).collect::<Vec<_>>(), vec![72, 36, 18]);
        let r36 = rows[1].outcome.as_ref().unwrap();
        let i1 = r36.conductors[0].current;
        assert!((i1.re - 0.0274).abs() < 0.002 && (i1.im + 1.0091).abs() < 0.002, "{i1}");
    }

    #[test]
    fn clean_study_empty_scene() {
        let mut s = reference_scenario();
        s.internal.clear();
        s.recon.n = 0;
        assert!(run_clean_study(&s).unwrap().is_empty());
    }

    #[test]
    fn zero_noise_runs_identical_to_clean() {
        let mut s = reference_scenario();
        s.runs = 5;
        let mc = run_montecarlo(&s).unwrap();
        let clean = clean_reconstruction(&s).unwrap();
        assert_eq!(mc.records.len(), 5);
        for r in &mc.records {
            assert_eq!(r.outcome.as_ref().unwrap(), &clean);
        }
        assert!(mc.summary[0].rms_position == 0.0);
    }

    #[test]
    fn failures_are_recorded() {
        let mut s = reference_scenario();
        s.runs = 4;
        s.noise_sigma_ref = 50.0;
        s.n_meas = 18;
        let mc = run_montecarlo(&s).unwrap();
        assert_eq!(mc.records.len(), 4);
        assert_eq!(mc.records.iter().map(|r| r.run).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }
}
