//! A TOML grid run through the harness, followed by the t* summary.

use shallow_shadows::harness::{run_grid, summarize_rows, write_rows, ExperimentConfig, RunOptions};

const CONFIG: &str = r#"
depth_list = DEPTHS
architecture = "alltoall"
n_list = [8, 16, 32]
state = { kind = "product", mu = 0.05 }
estimator = { kind = "purity" }
mode = "exact"
delta_list = [0.2, 0.1, 0.05]
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let depths: Vec<String> = (1..=120).map(|t| t.to_string()).collect();
    let cfg = ExperimentConfig::from_toml(&CONFIG.replace("DEPTHS", &format!("[{}]", depths.join(", "))))?;
    let out = run_grid(&cfg, &RunOptions::default())?;
    write_rows(std::io::stdout().lock(), &out.rows[..4])?;
    println!("...");
    for s in summarize_rows(&out.rows, &cfg.delta_list)? {
        println!("N={:>3} δ={:<4} t*={:?}", s.n, s.delta, s.t_star);
    }
    Ok(())
}
