//! TOML scenario files.
//!
//! ```toml
//! r_meas = 1.0
//! n_meas = 36
//! units = "m"            # or "r_meas": positions given as fractions of r_meas
//!
//! [[internal]]
//! x = -0.5
//! y = -0.5
//! re = 0.0
//! im = -1.0
//!
//! [[external]]
//! x = 1.0
//! y = 1.0
//! re = 0.0
//! im = 2.0
//!
//! [noise]
//! sigma_ref = 0.01
//! seed = 1
//! runs = 50
//!
//! [recon]
//! n = 3
//! m = 1
//! l = 1
//! quadrature_order = 8
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_scenario, Conductor, ReconParams, Scenario};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    #[default]
    #[serde(rename = "m")]
    Meters,
    RMeas,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConductorEntry {
    pub x: f64,
    pub y: f64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseEntry {
    #[serde(default)]
    pub sigma_ref: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_runs")]
    pub runs: usize,
}

impl Default for NoiseEntry {
    fn default() -> Self {
        Self { sigma_ref: 0.0, seed: 0, runs: default_runs() }
    }
}

fn default_runs() -> usize {
    1
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconEntry {
    /// Defaults to the number of internal conductors.
    pub n: Option<usize>,
    #[serde(rename = "m")]
    pub m_offset: Option<usize>,
    #[serde(rename = "l")]
    pub l_offset: Option<usize>,
    pub quadrature_order: Option<usize>,
}

/// On-disk form of a [`Scenario`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub r_meas: f64,
    pub n_meas: usize,
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub internal: Vec<ConductorEntry>,
    #[serde(default)]
    pub external: Vec<ConductorEntry>,
    #[serde(default)]
    pub noise: NoiseEntry,
    #[serde(default)]
    pub recon: ReconEntry,
}

impl ScenarioFile {
    /// Converts to meters and validates every invariant.
    pub fn to_scenario(&self) -> Result<Scenario<f64>> {
        let scale = match self.units {
            Units::Meters => 1.0,
            Units::RMeas => self.r_meas,
        };
        let conv = |e: &ConductorEntry| Conductor::at(e.x * scale, e.y * scale, e.re, e.im);
        let internal = self.internal.iter().map(conv).collect::<Result<Vec<_>>>()?;
        let external = self.external.iter().map(conv).collect::<Result<Vec<_>>>()?;
        let d = ReconParams::default();
        let recon = ReconParams {
            n: self.recon.n.unwrap_or(internal.len()),
            m_offset: self.recon.m_offset.unwrap_or(d.m_offset),
            l_offset: self.recon.l_offset.unwrap_or(d.l_offset),
            quadrature_order: self.recon.quadrature_order.unwrap_or(d.quadrature_order),
        };
        let s = Scenario {
            internal,
            external,
            r_meas: self.r_meas,
            n_meas: self.n_meas,
            noise_sigma_ref: self.noise.sigma_ref,
            seed: self.noise.seed,
            runs: self.noise.runs,
            recon,
        };
        let report = validate_scenario(&s);
        if !report.is_valid() {
            return Err(Error::InvalidScenario(report.to_string()));
        }
        Ok(s)
    }

    pub fn from_scenario(s: &Scenario<f64>) -> Self {
        let entry = |c: &Conductor<f64>| ConductorEntry {
            x: c.position.x(),
            y: c.position.y(),
            re: c.current.re,
            im: c.current.im,
        };
        Self {
            r_meas: s.r_meas,
            n_meas: s.n_meas,
            units: Units::Meters,
            internal: s.internal.iter().map(entry).collect(),
            external: s.external.iter().map(entry).collect(),
            noise: NoiseEntry { sigma_ref: s.noise_sigma_ref, seed: s.seed, runs: s.runs },
            recon: ReconEntry {
                n: Some(s.recon.n),
                m_offset: Some(s.recon.m_offset),
                l_offset: Some(s.recon.l_offset),
                quadrature_order: Some(s.recon.quadrature_order),
            },
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario<f64>> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
    file.to_scenario()
}

pub fn load_scenario(path: &Path) -> Result<Scenario<f64>> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

/// The reference scene: three internal and two external conductors, unit
/// measurement radius, 36 samples, noise-free.
pub fn reference_scenario() -> Scenario<f64> {
    let c = |x, y, re, im| Conductor::at(x, y, re, im).expect("finite literals");
    Scenario {
        internal: vec![c(-0.5, -0.5, 0.0, -1.0), c(0.0, -0.5, 2.0, 0.0), c(0.5, -0.5, -1.0, 0.0)],
        external: vec![c(-1.5, -0.5, 1.0, 0.0), c(1.0, 1.0, 0.0, 2.0)],
        r_meas: 1.0,
        n_meas: 36,
        noise_sigma_ref: 0.0,
        seed: 1,
        runs: 50,
        recon: ReconParams::default(),
    }
}
