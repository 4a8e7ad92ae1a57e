use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use linecurrent::harness::{self, output};
use linecurrent::{exact_moments, Error, HarmonicKernel, Result, Scenario};

/// Line-current reconstruction from contour field samples.
#[derive(Parser, Debug)]
#[command(name = "linecurrent", version)]
struct Cli {
    /// Scenario file (TOML). Defaults to the built-in reference scene.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed, overriding the scenario file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Gauss–Legendre order per contour segment.
    #[arg(long = "quad-order", global = true)]
    quad_order: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field samples on the measurement circle.
    Simulate,
    /// Even, odd, all, extrapolated and exact moments up to the inversion's m_max.
    Moments,
    /// One reconstruction at the scenario's n_meas.
    Reconstruct,
    /// Clean-data reconstruction at 72, 36 and 18 samples.
    CleanStudy,
    /// Seeded noisy reconstructions, one block of rows per run.
    Montecarlo {
        /// Also write per-conductor ensemble statistics here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Moment table to 3 decimals for m = 1..=m_max.
    Table2 {
        #[arg(long, default_value_t = 6)]
        m_max: usize,
    },
    /// Silent-source oracles and negative controls.
    SilentCheck,
}

fn scenario(cli: &Cli) -> Result<Scenario<f64>> {
    let mut s = match &cli.config {
        Some(p) => harness::load_scenario(p)?,
        None => harness::reference_scenario(),
    };
    if let Some(seed) = cli.seed {
        s.seed = seed;
    }
    if let Some(q) = cli.quad_order {
        if q == 0 {
            return Err(Error::InvalidScenario("quadrature order must be at least 1".into()));
        }
        s.recon.quadrature_order = q;
    }
    Ok(s)
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: &Cli) -> Result<()> {
    let s = scenario(cli)?;
    let out = sink(&cli.out)?;
    match &cli.command {
        Command::Simulate => output::write_samples(out, &harness::measure(&s)?),
        Command::Moments => {
            let k = HarmonicKernel::new(s.r_meas)?;
            let m_max = s.recon.m_max();
            let t = linecurrent::extrapolated_moments(&harness::measure(&s)?, &k, m_max, s.recon.quadrature_order)?;
            output::write_moments(out, &t, &exact_moments(&s.internal, &k, m_max))
        }
        Command::Reconstruct => {
            let k = HarmonicKernel::new(s.r_meas)?;
            let (_, result) = harness::pipeline(&harness::measure(&s)?, &k, &s.recon)?;
            let aligned = harness::study::align_to_truth(&result, &s);
            output::write_reconstruction(out, &aligned, s.r_meas)
        }
        Command::CleanStudy => output::write_clean_study(out, &harness::run_clean_study(&s)?, s.r_meas),
        Command::Montecarlo { summary } => {
            let mc = harness::run_montecarlo(&s)?;
            output::write_montecarlo(out, &mc, s.r_meas)?;
            match summary {
                Some(p) => output::write_summary(BufWriter::new(File::create(p)?), &mc.summary),
                None => Ok(()),
            }
        }
        Command::Table2 { m_max } => output::write_moment_table(out, &harness::emit_moment_table(&s, 1..=*m_max)?),
        Command::SilentCheck => {
            let rows = harness::run_silent_check(&s)?;
            output::write_silent(out, &rows)?;
            match rows.iter().find(|r| !r.ok()) {
                Some(r) => Err(Error::InvalidScenario(format!("silent check {} did not meet expectation", r.check))),
                None => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error\t{}\t{}", e.kind(), e);
            ExitCode::FAILURE
        }
    }
}
