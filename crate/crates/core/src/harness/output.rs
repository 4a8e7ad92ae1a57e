//! CSV writers. Every file has one header row; complex values take two
//! columns (`_re`, `_im`). Floats use shortest round-trip scientific
//! notation (`{:e}`) except the moment table, which prints 3 decimals.

use std::io::Write;

use crate::error::{Error, Result};
use crate::harness::silent_check::SilentRow;
use crate::harness::study::{CleanRow, MomentRow, MonteCarlo, RunSuccess, Summary};
use crate::model::{MeasurementSet, MomentVector, Phasor};
use crate::moments::MomentTable;

fn e(v: f64) -> String {
    format!("{v:e}")
}

fn f3(v: f64) -> String {
    let s = format!("{v:.3}");
    // avoid "-0.000"
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(Error::from)
}

/// `index,x,y,bx_re,bx_im,by_re,by_im`
pub fn write_samples<W: Write>(w: W, ms: &MeasurementSet<f64>) -> Result<()> {
    let mut w = writer(w);
    w.write_record(["index", "x", "y", "bx_re", "bx_im", "by_re", "by_im"])?;
    for (i, s) in ms.samples().iter().enumerate() {
        w.write_record([
            i.to_string(),
            e(s.position.x()),
            e(s.position.y()),
            e(s.bx.re),
            e(s.bx.im),
            e(s.by.re),
            e(s.by.im),
        ])?;
    }
    finish(w)
}

/// `m,even_re,even_im,odd_re,odd_im,all_re,all_im,extrapol_re,extrapol_im,exact_re,exact_im`
/// for `m = 0..=m_max`.
pub fn write_moments<W: Write>(w: W, t: &MomentTable<f64>, exact: &MomentVector<f64>) -> Result<()> {
    let mut w = writer(w);
    w.write_record(MOMENT_HEADER)?;
    for m in 0..t.all.len() {
        let mut rec = vec![m.to_string()];
        for z in [t.even[m], t.odd[m], t.all[m], t.extrapolated[m], exact[m]] {
            rec.push(e(z.re));
            rec.push(e(z.im));
        }
        w.write_record(rec)?;
    }
    finish(w)
}

const MOMENT_HEADER: [&str; 11] = [
    "m",
    "even_re",
    "even_im",
    "odd_re",
    "odd_im",
    "all_re",
    "all_im",
    "extrapol_re",
    "extrapol_im",
    "exact_re",
    "exact_im",
];

/// Same columns as [`write_moments`], fixed to 3 decimals.
pub fn write_moment_table<W: Write>(w: W, rows: &[MomentRow]) -> Result<()> {
    let mut w = writer(w);
    w.write_record(MOMENT_HEADER)?;
    for r in rows {
        let mut rec = vec![r.m.to_string()];
        for z in [r.even, r.odd, r.all, r.extrapol, r.exact] {
            rec.push(f3(z.re));
            rec.push(f3(z.im));
        }
        w.write_record(rec)?;
    }
    finish(w)
}

fn success_fields(r: &RunSuccess, i: usize, r_meas: f64) -> Vec<String> {
    let c = &r.conductors[i];
    let (dx, dy) = r.displacements[i];
    vec![
        i.to_string(),
        e(c.position.x()),
        e(c.position.y()),
        e(c.position.x() / r_meas * 100.0),
        e(c.position.y() / r_meas * 100.0),
        e(dx * 100.0),
        e(dy * 100.0),
        e(c.current.re),
        e(c.current.im),
        e(r.position_errors[i]),
        e(r.current_errors[i]),
        e(r.cond_c),
        e(r.cond_f),
        e(r.moment_residual),
    ]
}

const SUCCESS_HEADER: [&str; 14] = [
    "conductor",
    "x",
    "y",
    "x_pct",
    "y_pct",
    "dx_pct",
    "dy_pct",
    "current_re",
    "current_im",
    "position_error",
    "current_error",
    "cond_c",
    "cond_f",
    "moment_residual",
];

fn header(prefix: &[&'static str]) -> Vec<&'static str> {
    let mut h = prefix.to_vec();
    h.extend(SUCCESS_HEADER);
    h.push("error");
    h
}

fn outcome_rows(
    prefix: Vec<String>,
    outcome: &std::result::Result<RunSuccess, Error>,
    r_meas: f64,
) -> Vec<Vec<String>> {
    match outcome {
        Ok(r) => (0..r.conductors.len())
            .map(|i| {
                let mut rec = prefix.clone();
                rec.push("ok".into());
                rec.extend(success_fields(r, i, r_meas));
                rec.push(String::new());
                rec
            })
            .collect(),
        Err(err) => {
            let mut rec = prefix;
            rec.push("error".into());
            rec.extend(std::iter::repeat_n(String::new(), SUCCESS_HEADER.len()));
            rec.push(err.kind().into());
            vec![rec]
        }
    }
}

/// `status,conductor,x,y,x_pct,y_pct,dx_pct,dy_pct,current_re,current_im,
/// position_error,current_error,cond_c,cond_f,moment_residual,error`
pub fn write_reconstruction<W: Write>(
    w: W,
    outcome: &std::result::Result<RunSuccess, Error>,
    r_meas: f64,
) -> Result<()> {
    let mut w = writer(w);
    w.write_record(header(&["status"]))?;
    for rec in outcome_rows(Vec::new(), outcome, r_meas) {
        w.write_record(rec)?;
    }
    finish(w)
}

/// `n_meas,` followed by the reconstruction columns.
pub fn write_clean_study<W: Write>(w: W, rows: &[CleanRow], r_meas: f64) -> Result<()> {
    let mut w = writer(w);
    w.write_record(header(&["n_meas", "status"]))?;
    for row in rows {
        for rec in outcome_rows(vec![row.n_meas.to_string()], &row.outcome, r_meas) {
            w.write_record(rec)?;
        }
    }
    finish(w)
}

/// `run,seed,` followed by the reconstruction columns.
pub fn write_montecarlo<W: Write>(w: W, mc: &MonteCarlo, r_meas: f64) -> Result<()> {
    let mut w = writer(w);
    w.write_record(header(&["run", "seed", "status"]))?;
    for r in &mc.records {
        for rec in outcome_rows(vec![r.run.to_string(), r.seed.to_string()], &r.outcome, r_meas) {
            w.write_record(rec)?;
        }
    }
    finish(w)
}

/// `conductor,mean_x,mean_y,rms_position,mean_current_re,mean_current_im,rms_current`
pub fn write_summary<W: Write>(w: W, summary: &[Summary]) -> Result<()> {
    let mut w = writer(w);
    w.write_record([
        "conductor",
        "mean_x",
        "mean_y",
        "rms_position",
        "mean_current_re",
        "mean_current_im",
        "rms_current",
    ])?;
    for (i, s) in summary.iter().enumerate() {
        let Phasor { re, im } = s.mean_current;
        w.write_record([
            i.to_string(),
            e(s.mean_position.0),
            e(s.mean_position.1),
            e(s.rms_position),
            e(re),
            e(im),
            e(s.rms_current),
        ])?;
    }
    finish(w)
}

/// `check,m,magnitude,scale,tolerance,expect_silent,pass,ok`
pub fn write_silent<W: Write>(w: W, rows: &[SilentRow]) -> Result<()> {
    let mut w = writer(w);
    w.write_record(["check", "m", "magnitude", "scale", "tolerance", "expect_silent", "pass", "ok"])?;
    for r in rows {
        w.write_record([
            r.check.to_string(),
            r.m.map(|m| m.to_string()).unwrap_or_default(),
            e(r.magnitude),
            e(r.scale),
            e(r.tolerance),
            r.expect_silent.to_string(),
            r.pass().to_string(),
            r.ok().to_string(),
        ])?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_decimals() {
        assert_eq!(f3(8.2149), "8.215");
        assert_eq!(f3(-0.0001), "0.000");
        assert_eq!(f3(-1.0), "-1.000");
    }

    #[test]
    fn failure_row_keeps_width() {
        let mut buf = Vec::new();
        write_reconstruction(&mut buf, &Err(Error::SingularSystem { ratio: 0.0 }), 1.0).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
        assert!(lines[1].starts_with("error,") && lines[1].ends_with(",singular_system"));
    }
}
