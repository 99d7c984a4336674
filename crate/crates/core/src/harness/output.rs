use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use super::HarnessError;

/// One CSV line; column order is fixed by field order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub architecture: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub t: Option<usize>,
    pub estimator: String,
    pub state: String,
    pub noise_p: f64,
    pub mode: String,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    #[serde(rename = "R")]
    pub r: Option<usize>,
    pub mean: f64,
    pub stderr: Option<f64>,
    pub sample_variance: Option<f64>,
    pub variance_err: Option<f64>,
    pub wall_time_s: Option<f64>,
}

pub fn write_rows<W: Write>(w: W, rows: &[ResultRow]) -> Result<(), HarnessError> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r).map_err(|e| HarnessError::Io(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_rows<R: std::io::Read>(r: R) -> Result<Vec<ResultRow>, HarnessError> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(|e| HarnessError::Config(format!("malformed results CSV: {e}"))))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub config_echo: serde_json::Value,
    pub master_seed: u64,
    pub code_version: String,
    /// SHA-256 of the echoed config.
    pub config_hash: String,
    pub started_at: String,
    pub finished_at: String,
}

impl Manifest {
    pub fn new(cfg: &ExperimentConfig, started_at: String, finished_at: String) -> Result<Self, HarnessError> {
        let echo = serde_json::to_value(cfg).map_err(|e| HarnessError::Config(e.to_string()))?;
        let digest = Sha256::digest(echo.to_string().as_bytes());
        let config_hash = digest.iter().map(|b| format!("{b:02x}")).collect();
        Ok(Manifest {
            config_echo: echo,
            master_seed: cfg.master_seed,
            code_version: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            config_hash,
            started_at,
            finished_at,
        })
    }
}

pub fn write_manifest<W: Write>(mut w: W, m: &Manifest) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(m).map_err(|e| HarnessError::Io(e.to_string()))?;
    writeln!(w, "{text}")?;
    Ok(())
}
