use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use shallow_shadows::acceptance;
use shallow_shadows::analytics::reference;
use shallow_shadows::clifford::{prepare, StateSpec};
use shallow_shadows::harness::output::read_rows;
use shallow_shadows::harness::{
    bounds_rows, ensure_parent, output_file, run_grid, summarize_rows, write_manifest, write_rows, ExperimentConfig, HarnessError, Manifest, Mode,
    RunOptions,
};
use shallow_shadows::oracle::{exhaustive_channel_average, DenseState, Ensemble, Functional, GlobalShadowEnsemble};
use shallow_shadows::shadow::write_snapshots;

#[derive(Parser)]
#[command(name = "shadowlab", version, about = "Shallow classical shadow experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `master_seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output stem; files are `<out>.csv`, `<out>.manifest.json`, ….
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, env = "SHADOWLAB_THREADS")]
    threads: Option<usize>,
    /// `monte_carlo` or `exact`; overrides the config.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Record wall_time_s (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the config grid in its own mode.
    Run,
    /// Monte Carlo run that also archives every snapshot as NDJSON.
    Sample,
    /// Replica-exact run.
    Exact,
    /// Collision sandwich and depth-bound tables for the config's N and depths.
    Bounds,
    /// t* table from a results CSV.
    Summarize {
        csv: PathBuf,
        /// Comma-separated δ values; defaults to the config's delta_list or 0.2,0.1,0.05.
        #[arg(long, value_delimiter = ',')]
        delta: Vec<f64>,
    },
    /// Exhaustive global-Clifford ground truth for one or two qubits, as JSON.
    Oracle {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// `zero` or `ghz`.
        #[arg(long, default_value = "ghz")]
        state: String,
        /// Local depolarizing probability.
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// Snapshots per purity estimate.
        #[arg(long, default_value_t = 50)]
        m: usize,
    },
    /// Run the acceptance suite; exit 1 if any criterion fails.
    Selftest {
        /// Criterion ids to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

fn load_config(common: &Common) -> Result<ExperimentConfig, HarnessError> {
    let path = common.config.as_ref().ok_or_else(|| HarnessError::Config("--config is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    let mut cfg = ExperimentConfig::from_toml(&text)?;
    if let Some(s) = common.seed {
        cfg.master_seed = s;
    }
    if let Some(o) = &common.out {
        cfg.output_path = o.clone();
    }
    if let Some(m) = &common.mode {
        cfg.mode = m.parse::<Mode>()?;
    }
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    ensure_parent(path)?;
    let f = File::create(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn run(common: &Common, forced: Option<Mode>, archive: bool) -> Result<(), HarnessError> {
    let mut cfg = load_config(common)?;
    if let Some(m) = forced {
        if common.mode.as_deref().is_some_and(|s| s.parse::<Mode>().ok() != Some(m)) {
            return Err(HarnessError::Config(format!("--mode conflicts with the {} subcommand", m.name())));
        }
        cfg.mode = m;
    }
    let opts = RunOptions { threads: common.threads, timings: common.timings, keep_snapshots: archive };
    let started = now();
    let out = run_grid(&cfg, &opts)?;
    let finished = now();

    let csv_path = output_file(&cfg.output_path, "csv");
    write_rows(create(&csv_path)?, &out.rows)?;
    let manifest = Manifest::new(&cfg, started, finished)?;
    let manifest_path = output_file(&cfg.output_path, "manifest.json");
    write_manifest(create(&manifest_path)?, &manifest)?;
    if archive {
        let path = output_file(&cfg.output_path, "snapshots.ndjson");
        let mut w = create(&path)?;
        write_snapshots(&mut w, &out.snapshots)?;
        w.flush()?;
        eprintln!("wrote {} snapshots to {}", out.snapshots.len(), path.display());
    }
    eprintln!("wrote {} rows to {}", out.rows.len(), csv_path.display());
    Ok(())
}

fn write_csv<S: serde::Serialize>(path: &Path, rows: &[S]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for r in rows {
        w.serialize(r).map_err(|e| HarnessError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn default_deltas(listed: &[f64]) -> Vec<f64> {
    if listed.is_empty() {
        vec![0.2, 0.1, 0.05]
    } else {
        listed.to_vec()
    }
}

fn bounds(common: &Common) -> Result<(), HarnessError> {
    let cfg = load_config(common)?;
    let (z, g) = bounds_rows(&cfg.n_list, &cfg.depth_list, &default_deltas(&cfg.delta_list))?;
    let zp = output_file(&cfg.output_path, "bounds.csv");
    let gp = output_file(&cfg.output_path, "gbound.csv");
    write_csv(&zp, &z)?;
    write_csv(&gp, &g)?;
    eprintln!("wrote {} and {}", zp.display(), gp.display());
    Ok(())
}

fn summarize(common: &Common, csv_path: &Path, delta: &[f64]) -> Result<(), HarnessError> {
    let f = File::open(csv_path).map_err(|e| HarnessError::Io(format!("{}: {e}", csv_path.display())))?;
    let rows = read_rows(BufReader::new(f))?;
    let listed = if delta.is_empty() && common.config.is_some() { load_config(common)?.delta_list } else { delta.to_vec() };
    let table = summarize_rows(&rows, &default_deltas(&listed))?;
    match &common.out {
        Some(stem) => {
            let p = output_file(stem, "summary.csv");
            write_csv(&p, &table)?;
            eprintln!("wrote {}", p.display());
        }
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            for r in &table {
                w.serialize(r).map_err(|e| HarnessError::Io(e.to_string()))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn oracle(n: usize, state: &str, p: f64, m: usize) -> Result<(), HarnessError> {
    let spec = match state {
        "zero" => StateSpec::Zero,
        "ghz" => StateSpec::Ghz,
        other => return Err(HarnessError::Config(format!("oracle state must be zero or ghz, got {other}"))),
    };
    if !(1..=2).contains(&n) {
        return Err(HarnessError::Config(format!("oracle needs N in {{1, 2}}, got {n}")));
    }
    let psi = DenseState::from_tableau(&prepare(&spec, n)?)?;
    let mut rho = psi.to_density();
    rho.depolarize(p)?;
    let ens = GlobalShadowEnsemble::new(&rho)?;
    let (f_mean, f_var) = ens.fidelity_moments(&psi);
    let (p_mean, p_var) = ens.purity_moments(m)?;
    let z = exhaustive_channel_average(n, Ensemble::Global, &Functional::CollisionZ)?;
    let out = json!({
        "N": n,
        "state": state,
        "noise_p": p,
        "fidelity": rho.fidelity_with(&psi),
        "purity": rho.matmul(&rho).trace(),
        "collision_z": z,
        "fidelity_mean": f_mean,
        "fidelity_snapshot_variance": f_var,
        "purity_mean": p_mean,
        "purity_variance": p_var,
        "M": m,
        "ghz_fidelity_closed_form": reference::ghz_depolarized_fidelity(n, p),
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(|e| HarnessError::Io(e.to_string()))?);
    Ok(())
}

fn selftest(only: &[usize]) -> bool {
    let ids: Vec<usize> = if only.is_empty() { (1..=acceptance::CRITERIA).collect() } else { only.to_vec() };
    let mut ok = true;
    for id in ids {
        let r = acceptance::criterion(id);
        println!("{}", r.line());
        ok &= r.passed;
    }
    ok
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let result = match &cli.command {
        Command::Run => run(c, None, false),
        Command::Sample => run(c, Some(Mode::MonteCarlo), true),
        Command::Exact => run(c, Some(Mode::Exact), false),
        Command::Bounds => bounds(c),
        Command::Summarize { csv, delta } => summarize(c, csv, delta),
        Command::Oracle { n, state, p, m } => oracle(*n, state, *p, *m),
        Command::Selftest { only } => {
            return if selftest(only) { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("shadowlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
