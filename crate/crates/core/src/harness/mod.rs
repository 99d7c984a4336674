//! Experiment orchestration: TOML configs, seeded grids, CSV and manifest
//! output, and post-processing into t* tables.

pub mod config;
pub mod output;
pub mod summarize;

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::architectures::Architecture;
use crate::replica::exact_sweep;
use crate::shadow::seeds::derive;
use crate::shadow::{batch_statistics, MonteCarlo, Snapshot};

pub use config::{parse_pauli_pattern, ArchitectureChoice, EstimatorConfig, ExperimentConfig, Job, Mode, NoiseConfig, StateConfig};
pub use output::{write_manifest, write_rows, Manifest, ResultRow};
pub use summarize::{bounds_rows, reference_target, summarize_rows, BoundRow, GBoundRow, SummaryRow};

/// Failures with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("unsupported exact combination: {0}")]
    UnsupportedExact(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error(transparent)]
    Compute(#[from] crate::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::UnsupportedExact(_) => 3,
            HarnessError::Io(_) => 4,
            HarnessError::Compute(crate::Error::Io(_)) => 4,
            HarnessError::Compute(_) => 1,
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

/// Knobs that do not change results.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
    /// Fill `wall_time_s`. Off by default so reruns stay byte-identical.
    pub timings: bool,
    /// Keep every snapshot for an archive.
    pub keep_snapshots: bool,
}

/// Output of one grid.
#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub rows: Vec<ResultRow>,
    pub snapshots: Vec<Snapshot>,
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, HarnessError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(HarnessError::Config("--threads must be positive".into()));
        }
        b = b.num_threads(t);
    }
    b.build().map_err(|e| HarnessError::Config(e.to_string()))
}

/// Executes the whole grid of `cfg`.
pub fn run_grid(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutput, HarnessError> {
    let jobs = cfg.validate()?;
    let pool = pool(opts.threads)?;
    pool.install(|| {
        let mut out = RunOutput::default();
        for job in &jobs {
            match cfg.mode {
                Mode::MonteCarlo => run_monte_carlo(cfg, job, opts, &mut out)?,
                Mode::Exact => run_exact(cfg, job, opts, &mut out)?,
            }
        }
        Ok(out)
    })
}

fn base_row(cfg: &ExperimentConfig, job: &Job, t: Option<usize>) -> ResultRow {
    ResultRow {
        architecture: cfg.architecture.name().into(),
        n: job.n,
        t,
        estimator: cfg.estimator.name().into(),
        state: cfg.state.label(),
        noise_p: cfg.noise.p(),
        mode: cfg.mode.name().into(),
        m: None,
        r: None,
        mean: f64::NAN,
        stderr: None,
        sample_variance: None,
        variance_err: None,
        wall_time_s: None,
    }
}

fn run_monte_carlo(cfg: &ExperimentConfig, job: &Job, opts: &RunOptions, out: &mut RunOutput) -> Result<(), HarnessError> {
    let r = cfg.realizations();
    for &t in &cfg.depth_list {
        let start = Instant::now();
        let randomizer = cfg.architecture.randomizer(t);
        let mc = MonteCarlo {
            n: job.n,
            randomizer,
            prep: job.prep.clone(),
            m: cfg.m,
            r,
            master_seed: cfg.master_seed,
        };
        let values = mc.run(std::slice::from_ref(&job.estimator))?.remove(0);
        if opts.keep_snapshots {
            for ri in 0..r {
                out.snapshots.extend(mc.snapshots(ri)?);
            }
        }
        let boot_seed = derive(derive(cfg.master_seed, job.n as u64), t as u64 ^ 0xb007);
        let s = batch_statistics(values, cfg.m, cfg.b, boot_seed)?;
        let mut row = base_row(cfg, job, randomizer.depth());
        row.m = Some(cfg.m);
        row.r = Some(r);
        row.mean = s.mean;
        row.stderr = Some(s.stderr);
        row.sample_variance = Some(s.sample_variance);
        row.variance_err = Some(s.variance_err);
        if opts.timings {
            row.wall_time_s = Some(start.elapsed().as_secs_f64());
        }
        out.rows.push(row);
    }
    Ok(())
}

fn run_exact(cfg: &ExperimentConfig, job: &Job, opts: &RunOptions, out: &mut RunOutput) -> Result<(), HarnessError> {
    let arch = match cfg.architecture {
        ArchitectureChoice::Chain1d => Architecture::Chain1d,
        ArchitectureChoice::Alltoall => Architecture::Alltoall,
        other => return Err(HarnessError::UnsupportedExact(format!("no exact engine for {}", other.name()))),
    };
    let start = Instant::now();
    let max_depth = *cfg.depth_list.last().expect("validated non-empty");
    let sweep = exact_sweep(job.n, arch, max_depth, job.rho)?;
    let secs = start.elapsed().as_secs_f64();
    for &t in &cfg.depth_list {
        let rec = &sweep[t];
        let mut row = base_row(cfg, job, Some(t));
        row.mean = match cfg.estimator {
            EstimatorConfig::Purity => rec.avg_purity.expect("purity sweep"),
            _ => rec.avg_fidelity,
        };
        if opts.timings {
            row.wall_time_s = Some(secs);
        }
        out.rows.push(row);
    }
    Ok(())
}

/// `<stem>.csv`, `<stem>.manifest.json`, `<stem>.snapshots.ndjson`, ….
pub fn output_file(stem: &str, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{stem}.{suffix}"))
}

/// Parent directories for an output stem.
pub fn ensure_parent(path: &Path) -> Result<(), HarnessError> {
    if let Some(p) = path.parent() {
        if !p.as_os_str().is_empty() {
            std::fs::create_dir_all(p)?;
        }
    }
    Ok(())
}
