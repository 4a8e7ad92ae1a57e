//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use linecurrent::forward::sample_circle_with;
use linecurrent::harness::silent_check::{reference_canceller, reference_coaxial, SILENT_TOLERANCE};
use linecurrent::harness::{emit_moment_table, reference_scenario, run_clean_study, run_montecarlo, RunSuccess};
use linecurrent::scalar::mu0_over_2pi;
use linecurrent::silent::{max_field_on_circle, verify_silent_moments, SilentSource, ANGULAR_POINTS, RADIAL_ORDER};
use linecurrent::{
    contour_moments, exact_moments, reconstruct, Conductor, HarmonicKernel, MomentVector, Phasor, Scenario,
};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT_TOL: f64 = 0.001;
const TABLE_TOL: f64 = 0.002;
const POSITION_TOL_PCT: f64 = 0.05;
const CURRENT_TOL: f64 = 0.002;
const SLOPE: f64 = -2.0;
const SLOPE_TOL: f64 = 0.2;
const ROUND_TRIP_SCENES: usize = 200;
const ROUND_TRIP_TOL: f64 = 1e-8;
const EXTERNAL_RATIO: f64 = 1e4;
const EXTERNAL_N: usize = 4608;
const FIELD_TOL: f64 = 1e-5;
const CANCELLER_SAMPLES: usize = 3600;
const MC_RUNS: usize = 50;
const CONVERGENCE_NS: [usize; 4] = [18, 36, 72, 144];

/// Printed moment table: (even, odd, all, extrapol, exact) for m = 1..6.
const MOMENT_VALUES: [[(f64, f64); 5]; 6] = [
    [(1.027, -2.132), (1.027, -2.133), (1.052, -2.211), (1.060, -2.237), (1.060, -2.237)],
    [(1.494, -3.575), (1.494, -3.573), (1.630, -3.711), (1.675, -3.757), (1.681, -3.756)],
    [(3.302, -4.793), (3.312, -4.779), (3.937, -4.797), (4.147, -4.801), (4.176, -4.787)],
    [(8.215, -4.648), (8.248, -4.612), (10.331, -3.934), (11.031, -3.702), (11.134, -3.644)],
    [(19.169, -1.171), (19.238, -1.112), (24.727, 1.457), (26.568, 2.324), (26.834, 2.469)],
    [(40.514, 8.492), (40.608, 8.565), (52.670, 14.760), (56.706, 16.837), (57.221, 17.050)],
];

/// Printed displacements in % of r_meas: (Δx₁, Δx₂, Δx₃, Δy₁, Δy₂, Δy₃) per n_meas.
const POSITION_ERRORS: [(usize, [f64; 6]); 3] = [
    (72, [0.01, 0.04, -0.02, 0.05, -0.03, 0.04]),
    (36, [0.16, 0.60, -0.24, 0.65, -0.40, 0.64]),
    (18, [1.79, 4.25, -1.30, 6.08, -3.52, 5.91]),
];

/// Printed currents per n_meas.
const CURRENT_ERRORS: [(usize, [(f64, f64); 3]); 3] = [
    (72, [(0.0019, -1.0008), (1.9993, -0.0009), (-1.0012, 0.0017)]),
    (36, [(0.0274, -1.0091), (1.9874, -0.0149), (-1.0145, 0.0243)]),
    (18, [(0.2489, -1.0419), (1.7706, -0.1944), (-1.0187, 0.2384)]),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn component_dev(z: Phasor<f64>, want: (f64, f64)) -> f64 {
    (z.re - want.0).abs().max((z.im - want.1).abs())
}

fn slope(ns: &[usize], ys: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ls.iter().sum::<f64>() / ls.len() as f64;
    let num: f64 = xs.iter().zip(&ls).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

fn scene(s: &Scenario<f64>) -> Vec<Conductor<f64>> {
    s.internal.iter().chain(&s.external).copied().collect()
}

fn contour(conductors: &[Conductor<f64>], n: usize, m_max: usize) -> MomentVector<f64> {
    let k = HarmonicKernel::new(1.0).unwrap();
    contour_moments(&sample_circle_with(conductors, 1.0, n).unwrap(), &k, m_max, 8).unwrap()
}

fn c1_exact_moments() -> Outcome {
    let s = reference_scenario();
    let k = HarmonicKernel::new(s.r_meas).unwrap();
    let b = exact_moments(&s.internal, &k, 6);
    let dev = (1..=6).map(|m| component_dev(b[m], MOMENT_VALUES[m - 1][4])).fold(0.0, f64::max);
    Outcome { pass: dev <= EXACT_TOL, detail: format!("max deviation {dev:.2e} A, tol {EXACT_TOL:e} A") }
}

fn c2_discretized_moments() -> Outcome {
    let rows = emit_moment_table(&reference_scenario(), 1..=6).unwrap();
    let dev = rows
        .iter()
        .flat_map(|r| {
            let want = MOMENT_VALUES[r.m - 1];
            [component_dev(r.even, want[0]), component_dev(r.odd, want[1]), component_dev(r.all, want[2])]
        })
        .fold(0.0, f64::max);
    Outcome { pass: dev <= TABLE_TOL, detail: format!("18 values, max deviation {dev:.2e} A, tol {TABLE_TOL:e} A") }
}

fn c3_richardson() -> Outcome {
    let rows = emit_moment_table(&reference_scenario(), 1..=6).unwrap();
    let identity = rows.iter().all(|r| r.extrapol == (r.all * 8.0 - r.even - r.odd) / 6.0);
    let dev = rows.iter().map(|r| component_dev(r.extrapol, MOMENT_VALUES[r.m - 1][3])).fold(0.0, f64::max);
    Outcome {
        pass: identity && dev <= TABLE_TOL,
        detail: format!("identity exact: {identity}, max deviation {dev:.2e} A, tol {TABLE_TOL:e} A"),
    }
}

fn c4_clean_reconstruction() -> Outcome {
    let rows = run_clean_study(&reference_scenario()).unwrap();
    let mut pos_dev: f64 = 0.0;
    let mut cur_dev: f64 = 0.0;
    let mut failed = 0;
    for row in &rows {
        let Ok(r) = &row.outcome else {
            failed += 1;
            continue;
        };
        let (_, want_pos) = POSITION_ERRORS.iter().find(|(n, _)| *n == row.n_meas).unwrap();
        let (_, want_cur) = CURRENT_ERRORS.iter().find(|(n, _)| *n == row.n_meas).unwrap();
        for i in 0..3 {
            let (dx, dy) = r.displacements[i];
            pos_dev = pos_dev.max((dx * 100.0 - want_pos[i]).abs()).max((dy * 100.0 - want_pos[3 + i]).abs());
            cur_dev = cur_dev.max(component_dev(r.conductors[i].current, want_cur[i]));
        }
    }
    Outcome {
        pass: failed == 0 && rows.len() == 3 && pos_dev <= POSITION_TOL_PCT && cur_dev <= CURRENT_TOL,
        detail: format!(
            "position max deviation {pos_dev:.3} pp (tol {POSITION_TOL_PCT}), current {cur_dev:.2e} A (tol {CURRENT_TOL:e}), failed rows {failed}"
        ),
    }
}

fn c5_convergence_rate() -> Outcome {
    let s = reference_scenario();
    let k = HarmonicKernel::new(s.r_meas).unwrap();
    let exact = exact_moments(&s.internal, &k, 6);
    let table: Vec<_> = CONVERGENCE_NS.iter().map(|&n| contour(&scene(&s), n, 6)).collect();
    let slopes: Vec<f64> = (0..=6)
        .map(|m| {
            let errs: Vec<f64> = table.iter().map(|b| (b[m] - exact[m]).norm()).collect();
            slope(&CONVERGENCE_NS, &errs)
        })
        .collect();
    let worst = slopes.iter().map(|s| (s - SLOPE).abs()).fold(0.0, f64::max);
    Outcome {
        pass: worst <= SLOPE_TOL,
        detail: format!(
            "slopes m=0..6 {:?}, max |slope + 2| {worst:.3}, tol {SLOPE_TOL}",
            slopes.iter().map(|s| (s * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        ),
    }
}

fn c6_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_pos: f64 = 0.0;
    let mut worst_cur: f64 = 0.0;
    let mut failures = 0;
    let mut scenes = 0;
    while scenes < ROUND_TRIP_SCENES {
        let r = 0.5 + 2.5 * rng.random::<f64>();
        let n = rng.random_range(1..=4);
        let truth: Vec<Conductor<f64>> = (0..n)
            .map(|_| {
                let rho = 0.7 * r * rng.random::<f64>().sqrt();
                let th = rng.random::<f64>() * std::f64::consts::TAU;
                let cur =
                    Complex::from_polar(0.5 + 1.5 * rng.random::<f64>(), rng.random::<f64>() * std::f64::consts::TAU);
                Conductor::at(rho * th.cos(), rho * th.sin(), cur.re, cur.im).unwrap()
            })
            .collect();
        let separated = truth
            .iter()
            .enumerate()
            .all(|(i, a)| truth[i + 1..].iter().all(|b| a.position.dist(&b.position) >= 0.2 * r));
        if !separated {
            continue;
        }
        scenes += 1;
        let k = HarmonicKernel::new(r).unwrap();
        let Ok(res) = reconstruct(&exact_moments(&truth, &k, 2 * n + 1), &k, n, 1, 1) else {
            failures += 1;
            continue;
        };
        for t in &truth {
            let got = res
                .conductors
                .iter()
                .min_by(|a, b| a.position.dist(&t.position).total_cmp(&b.position.dist(&t.position)))
                .unwrap();
            worst_pos = worst_pos.max(got.position.dist(&t.position) / r);
            worst_cur = worst_cur.max((got.current - t.current).norm() / t.current.norm());
        }
    }
    Outcome {
        pass: failures == 0 && worst_pos <= ROUND_TRIP_TOL && worst_cur <= ROUND_TRIP_TOL,
        detail: format!(
            "{scenes} scenes, worst position {worst_pos:.1e} r_meas, worst current {worst_cur:.1e} rel, tol {ROUND_TRIP_TOL:e}, failures {failures}"
        ),
    }
}

fn c7_external_cancellation() -> Outcome {
    let s = reference_scenario();
    let far = contour(&s.external, EXTERNAL_N, 6);
    let inner = contour(&scene(&s), EXTERNAL_N, 6);
    let min_ratio = (0..=6).map(|m| inner[m].norm() / far[m].norm()).fold(f64::INFINITY, f64::min);
    let mags: Vec<Vec<f64>> = CONVERGENCE_NS
        .iter()
        .map(|&n| {
            let b = contour(&s.external, n, 6);
            (0..=6).map(|m| b[m].norm()).collect()
        })
        .collect();
    let slopes: Vec<f64> =
        (0..=6).map(|m| slope(&CONVERGENCE_NS, &mags.iter().map(|v| v[m]).collect::<Vec<_>>())).collect();
    let worst = slopes.iter().map(|s| (s - SLOPE).abs()).fold(0.0, f64::max);
    let ratio_ok = min_ratio >= EXTERNAL_RATIO;
    Outcome {
        pass: ratio_ok && worst <= SLOPE_TOL,
        detail: format!(
            "min ratio at n={EXTERNAL_N} {min_ratio:.1e} (need {EXTERNAL_RATIO:e}): {}; slopes m=0..6 {:?} (need {SLOPE} +/- {SLOPE_TOL}): {}",
            if ratio_ok { "ok" } else { "fails" },
            slopes.iter().map(|s| (s * 10.0).round() / 10.0).collect::<Vec<_>>(),
            if worst <= SLOPE_TOL { "ok" } else { "fails, decay is geometric" }
        ),
    }
}

fn c8_silent_sources() -> Outcome {
    let k = HarmonicKernel::new(1.0).unwrap();
    let coax = reference_coaxial(1.0).unwrap();
    let coax_report = verify_silent_moments(SilentSource::Coaxial(&coax), &k, 6, SILENT_TOLERANCE);
    let canc = reference_canceller(1.0).unwrap();
    assert_eq!(canc.samples.len(), CANCELLER_SAMPLES);
    let a0 = canc.radius;
    let bound = FIELD_TOL * mu0_over_2pi::<f64>() / a0;
    let field = max_field_on_circle(&canc.scene(), canc.center, 2.0 * a0, 720).unwrap();
    let cubic = coax.gradient_integral(
        |p| [Complex::new(3.0 * p.x() * p.x(), 0.0), Complex::new(0.0, 0.0)],
        RADIAL_ORDER,
        ANGULAR_POINTS,
    );
    let xmax = coax.center().x().abs() + coax.radius();
    let cubic_scale = coax.absolute_current() * 3.0 * xmax * xmax;
    let cubic_silent = cubic[0].norm() <= SILENT_TOLERANCE * cubic_scale;
    let bare = verify_silent_moments(SilentSource::Lines(std::slice::from_ref(&canc.inner)), &k, 6, SILENT_TOLERANCE);
    let bare_silent = bare.any_pass();
    let worst_coax = coax_report.checks.iter().map(|c| c.magnitude / c.scale).fold(0.0, f64::max);
    Outcome {
        pass: coax_report.all_pass() && field < bound && !cubic_silent && !bare_silent,
        detail: format!(
            "coaxial worst {worst_coax:.1e} rel (tol {SILENT_TOLERANCE:e}); canceller field {field:.1e} T < {bound:.1e} T: {}; x^3 control silent: {cubic_silent}; bare conductor silent: {bare_silent}",
            field < bound
        ),
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn mean_error(r: &std::result::Result<RunSuccess, linecurrent::Error>) -> f64 {
    match r {
        Ok(s) => s.position_errors.iter().sum::<f64>() / s.position_errors.len() as f64,
        Err(_) => f64::INFINITY,
    }
}

fn c9_noise_study() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    let mut mean_gap = Vec::new();
    for n in [18, 72] {
        let mut medians = Vec::new();
        for sigma in [0.01, 0.05] {
            let mut s = reference_scenario();
            s.n_meas = n;
            s.noise_sigma_ref = sigma;
            s.runs = MC_RUNS;
            s.seed = 20_240_601;
            let mc = run_montecarlo(&s).unwrap();
            medians.push(median(mc.records.iter().map(|r| mean_error(&r.outcome)).collect()));
            if sigma == 0.01 {
                let mut clean = s.clone();
                clean.noise_sigma_ref = 0.0;
                clean.runs = 1;
                let reference = linecurrent::harness::clean_reconstruction(&clean).unwrap();
                let gap = mc
                    .summary
                    .iter()
                    .zip(&reference.conductors)
                    .map(|(m, c)| {
                        (m.mean_position.0 - c.position.x()).hypot(m.mean_position.1 - c.position.y()) / s.r_meas
                    })
                    .fold(0.0, f64::max);
                mean_gap.push(gap);
            }
        }
        let ordered = medians[1] > medians[0];
        pass &= ordered;
        detail.push(format!("n={n} median error 0.01: {:.2e}, 0.05: {:.2e}", medians[0], medians[1]));
    }
    let closer = mean_gap[1] < mean_gap[0];
    pass &= closer;
    detail.push(format!("ensemble mean to clean, n=18: {:.2e}, n=72: {:.2e}", mean_gap[0], mean_gap[1]));
    Outcome { pass, detail: detail.join("; ") }
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join("noise18.toml");
    let outs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("run{i}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_linecurrent"))
                .args(["montecarlo", "--config", cfg.to_str().unwrap(), "--seed", "7"])
                .args(["--out", out.to_str().unwrap()])
                .status()
                .unwrap();
            assert!(status.success());
            std::fs::read(out).unwrap()
        })
        .collect();
    let same = outs[0] == outs[1] && !outs[0].is_empty();
    Outcome { pass: same, detail: format!("two invocations, {} bytes each, identical: {same}", outs[0].len()) }
}

type Criterion = (u8, &'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "exact moments", None, c1_exact_moments),
        (2, "discretized moments", Some(Duration::from_secs(1)), c2_discretized_moments),
        (3, "Richardson identity", None, c3_richardson),
        (4, "clean-data reconstruction", Some(Duration::from_secs(5)), c4_clean_reconstruction),
        (5, "convergence rate", None, c5_convergence_rate),
        (6, "exact-input round trip", Some(Duration::from_secs(10)), c6_round_trip),
        (7, "external-disturbance cancellation", None, c7_external_cancellation),
        (8, "silent sources", Some(Duration::from_secs(10)), c8_silent_sources),
        (9, "noise study", Some(Duration::from_secs(30)), c9_noise_study),
        (10, "determinism", None, c10_determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let pass = out.pass && in_time;
        let budget_note = budget.map(|b| format!(", budget {} s", b.as_secs())).unwrap_or_default();
        println!(
            "criterion {id:>2} {name}: {} ({}; {:.2} s{budget_note})",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
