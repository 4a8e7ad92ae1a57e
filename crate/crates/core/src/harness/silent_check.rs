//! The `silent-check` pipeline: silent-source oracles, negative controls and
//! the effect of adding silent sources to a scenario.

use crate::error::Result;
use crate::forward::sample_circle_with;
use crate::model::{Conductor, Point2, Scenario};
use crate::moments::{extrapolated_moments, HarmonicKernel};
use crate::prony::reconstruct;
use crate::scalar::mu0_over_2pi;
use crate::silent::{
    build_canceller, canceller_contour_moments, disk_kernel_sup, max_field_on_circle, verify_silent_moments,
    CoaxialProfile, RadialRule, SilentSource, SurfaceCanceller, ANGULAR_POINTS, RADIAL_ORDER,
};

/// Relative tolerance for silent moment contributions.
pub const SILENT_TOLERANCE: f64 = 1e-8;
/// Relative tolerance for the exterior canceller field.
pub const FIELD_TOLERANCE: f64 = 1e-5;
pub const CANCELLER_SAMPLES: usize = 3600;
/// Sample count for the scenario-perturbation checks.
pub const DENSE_SAMPLES: usize = 720;

/// One check: `pass` is `magnitude <= tolerance · scale`; `ok` compares it
/// with the expectation (negative controls are expected not to pass).
#[derive(Clone, Debug, PartialEq)]
pub struct SilentRow {
    pub check: &'static str,
    pub m: Option<usize>,
    pub magnitude: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub expect_silent: bool,
}

impl SilentRow {
    pub fn pass(&self) -> bool {
        self.magnitude <= self.tolerance * self.scale
    }

    pub fn ok(&self) -> bool {
        self.pass() == self.expect_silent
    }
}

/// `J0 = 1 − 2ρ²/a²` on the disk of radius `0.3 R` about `(0.2 R, 0.1 R)`.
pub fn reference_coaxial(r: f64) -> Result<CoaxialProfile<f64>> {
    let a = 0.3 * r;
    CoaxialProfile::new(Point2::new(0.2 * r, 0.1 * r)?, a, move |rho: f64| 1.0 - 2.0 * rho * rho / (a * a))
}

/// Unit current at `0.3 a0` from the center of the same disk.
pub fn reference_canceller(r: f64) -> Result<SurfaceCanceller<f64>> {
    let a = 0.3 * r;
    let center = Point2::new(0.2 * r, 0.1 * r)?;
    let inner = Conductor::at(center.x() + 0.3 * a, center.y(), 1.0, 0.0)?;
    build_canceller(inner, center, a, CANCELLER_SAMPLES)
}

fn moment_rows(check: &'static str, report: crate::silent::SilentReport<f64>, expect_silent: bool) -> Vec<SilentRow> {
    report
        .checks
        .into_iter()
        .map(|c| SilentRow {
            check,
            m: Some(c.m),
            magnitude: c.magnitude,
            scale: c.scale,
            tolerance: report.tolerance,
            expect_silent,
        })
        .collect()
}

/// Changes in extrapolated moments and reconstruction when `extra` is added
/// to the scenario's conductors.
fn perturbation_rows(
    s: &Scenario<f64>,
    k: &HarmonicKernel<f64>,
    extra: &[Conductor<f64>],
    moments_check: &'static str,
    recon_check: &'static str,
) -> Result<Vec<SilentRow>> {
    let base: Vec<_> = s.internal.iter().chain(&s.external).copied().collect();
    let mut with = base.clone();
    with.extend_from_slice(extra);
    let m_max = s.recon.m_max().max(6);
    let q = s.recon.quadrature_order;
    let b0 = extrapolated_moments(&sample_circle_with(&base, s.r_meas, DENSE_SAMPLES)?, k, m_max, q)?.extrapolated;
    let b1 = extrapolated_moments(&sample_circle_with(&with, s.r_meas, DENSE_SAMPLES)?, k, m_max, q)?.extrapolated;
    let scale = b0.max_abs();
    let mut rows: Vec<SilentRow> = (0..=6)
        .map(|m| SilentRow {
            check: moments_check,
            m: Some(m),
            magnitude: (b1[m] - b0[m]).norm(),
            scale,
            tolerance: SILENT_TOLERANCE,
            expect_silent: true,
        })
        .collect();
    if s.recon.n > 0 {
        let r0 = reconstruct(&b0, k, s.recon.n, s.recon.m_offset, s.recon.l_offset)?;
        let r1 = reconstruct(&b1, k, s.recon.n, s.recon.m_offset, s.recon.l_offset)?;
        let current_scale = r0.conductors.iter().map(|c| c.current.norm()).fold(0.0, f64::max);
        let change = r0
            .conductors
            .iter()
            .zip(&r1.conductors)
            .map(|(a, b)| (a.position.dist(&b.position) / s.r_meas).max((a.current - b.current).norm() / current_scale))
            .fold(0.0, f64::max);
        rows.push(SilentRow {
            check: recon_check,
            m: None,
            magnitude: change,
            scale: 1.0,
            tolerance: 10.0 * SILENT_TOLERANCE,
            expect_silent: true,
        });
    }
    Ok(rows)
}

/// Every silent-source check, sized to the scenario's measurement radius.
pub fn run_silent_check(s: &Scenario<f64>) -> Result<Vec<SilentRow>> {
    let r = s.r_meas;
    let k = HarmonicKernel::new(r)?;
    let mut rows = Vec::new();

    let coax = reference_coaxial(r)?;
    rows.extend(moment_rows(
        "coaxial_moments",
        verify_silent_moments(SilentSource::Coaxial(&coax), &k, 6, SILENT_TOLERANCE),
        true,
    ));
    let cubic = coax.gradient_integral(
        |p| [num_complex::Complex::new(3.0 * p.x() * p.x(), 0.0), num_complex::Complex::new(0.0, 0.0)],
        RADIAL_ORDER,
        ANGULAR_POINTS,
    );
    let xmax = coax.center().x().abs() + coax.radius();
    rows.push(SilentRow {
        check: "coaxial_cubic_control",
        m: None,
        magnitude: cubic[0].norm(),
        scale: coax.absolute_current() * 3.0 * xmax * xmax,
        tolerance: SILENT_TOLERANCE,
        expect_silent: false,
    });

    let canc = reference_canceller(r)?;
    let a0 = canc.radius;
    rows.extend(moment_rows(
        "canceller_moments",
        verify_silent_moments(SilentSource::Canceller(&canc), &k, 6, SILENT_TOLERANCE),
        true,
    ));
    let b = canceller_contour_moments(&canc, &k, 6, 3.0 * a0, DENSE_SAMPLES, s.recon.quadrature_order)?;
    for m in 0..=6 {
        rows.push(SilentRow {
            check: "canceller_contour_moments",
            m: Some(m),
            magnitude: b[m].norm(),
            scale: canc.inner.current.norm() * disk_kernel_sup(&k, canc.center, 3.0 * a0, m),
            tolerance: SILENT_TOLERANCE,
            expect_silent: true,
        });
    }
    let field_scale = mu0_over_2pi::<f64>() * canc.inner.current.norm() / a0;
    rows.push(SilentRow {
        check: "canceller_field",
        m: None,
        magnitude: max_field_on_circle(&canc.scene(), canc.center, 2.0 * a0, 720)?,
        scale: field_scale,
        tolerance: FIELD_TOLERANCE,
        expect_silent: true,
    });
    rows.push(SilentRow {
        check: "bare_conductor_field",
        m: None,
        magnitude: max_field_on_circle(&[canc.inner], canc.center, 2.0 * a0, 720)?,
        scale: field_scale,
        tolerance: FIELD_TOLERANCE,
        expect_silent: false,
    });
    rows.extend(moment_rows(
        "bare_conductor_moments",
        verify_silent_moments(SilentSource::Lines(std::slice::from_ref(&canc.inner)), &k, 6, SILENT_TOLERANCE),
        false,
    ));

    let rings = coax.as_rings(RadialRule::GaussLegendre, 24, 360);
    rows.extend(perturbation_rows(s, &k, &rings, "scenario_plus_coaxial_moments", "scenario_plus_coaxial_recon")?);
    rows.extend(perturbation_rows(
        s,
        &k,
        &canc.scene(),
        "scenario_plus_canceller_moments",
        "scenario_plus_canceller_recon",
    )?);
    Ok(rows)
}
