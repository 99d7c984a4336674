//! End-to-end checks of the `shadowlab` binary: outputs, determinism and
//! exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn shadowlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("SHADOWLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const MC: &str = r#"
architecture = "chain1d"
n_list = [4, 6]
depth_list = [1, 3]
state = { kind = "ghz" }
noise = { kind = "depolarizing", p = 0.02 }
estimator = { kind = "fidelity" }
mode = "monte_carlo"
M = 10
R = 40
B = 20
master_seed = 17
"#;

#[test]
fn run_writes_fixed_columns_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mc.toml", MC);
    let out = shadowlab(&["run", "--config", &cfg, "--out", "res/a"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("res/a.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "architecture,N,t,estimator,state,noise_p,mode,M,R,mean,stderr,sample_variance,variance_err,wall_time_s"
    );
    assert_eq!(csv.lines().count(), 5);
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("res/a.manifest.json")).unwrap()).unwrap();
    for key in ["config_echo", "master_seed", "code_version", "started_at", "finished_at"] {
        assert!(manifest.get(key).is_some(), "missing {key}");
    }
    assert_eq!(manifest["master_seed"], 17);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mc.toml", MC);
    let a = shadowlab(&["run", "--config", &cfg, "--out", "a", "--threads", "1"], dir.path());
    let b = shadowlab(&["run", "--config", &cfg, "--out", "b", "--threads", "3"], dir.path());
    assert!(a.status.success() && b.status.success());
    let ra = std::fs::read(dir.path().join("a.csv")).unwrap();
    let rb = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(ra, rb);
    let c = Command::new(env!("CARGO_BIN_EXE_shadowlab"))
        .args(["run", "--config", &cfg, "--out", "c"])
        .env("SHADOWLAB_THREADS", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(c.status.success());
    assert_eq!(ra, std::fs::read(dir.path().join("c.csv")).unwrap());
}

#[test]
fn seed_flag_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mc.toml", MC);
    assert!(shadowlab(&["run", "--config", &cfg, "--out", "a"], dir.path()).status.success());
    assert!(shadowlab(&["run", "--config", &cfg, "--out", "b", "--seed", "18"], dir.path()).status.success());
    assert_ne!(std::fs::read(dir.path().join("a.csv")).unwrap(), std::fs::read(dir.path().join("b.csv")).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "architecture = \"chain1d\"\nn_list = [4]\n");
    assert_eq!(shadowlab(&["run", "--config", &bad], dir.path()).status.code(), Some(2));
    let typo = write(dir.path(), "typo.toml", &MC.replace("master_seed", "masterseed"));
    assert_eq!(shadowlab(&["run", "--config", &typo], dir.path()).status.code(), Some(2));

    let grid = write(dir.path(), "grid.toml", &MC.replace("chain1d", "grid2d").replace("[4, 6]", "[4]"));
    let out = shadowlab(&["run", "--config", &grid, "--mode", "exact"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    assert!(!dir.path().join("shadowlab_out.csv").exists(), "no partial output");

    assert_eq!(shadowlab(&["run", "--config", "missing.toml"], dir.path()).status.code(), Some(4));
    let cfg = write(dir.path(), "mc.toml", MC);
    let blocker = write(dir.path(), "blocker", "");
    let into_file = format!("{blocker}/out");
    assert_eq!(shadowlab(&["run", "--config", &cfg, "--out", &into_file], dir.path()).status.code(), Some(4));
}

#[test]
fn sample_archives_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mc.toml", &MC.replace("[4, 6]", "[4]").replace("[1, 3]", "[2]"));
    let out = shadowlab(&["sample", "--config", &cfg, "--out", "s"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("s.snapshots.ndjson")).unwrap();
    assert_eq!(text.lines().count(), 10 * 40);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    for key in ["architecture", "N", "t", "seed", "b_hex"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert_eq!(first["N"], 4);
}

#[test]
fn exact_then_summarize() {
    let dir = tempfile::tempdir().unwrap();
    let depths: Vec<String> = (1..=60).map(|t| t.to_string()).collect();
    let cfg = write(
        dir.path(),
        "ex.toml",
        &format!(
            "architecture = \"chain1d\"\nn_list = [4, 8]\ndepth_list = [{}]\nstate = {{ kind = \"zero\" }}\nestimator = {{ kind = \"fidelity\" }}\nmode = \"monte_carlo\"\n",
            depths.join(", ")
        ),
    );
    let out = shadowlab(&["exact", "--config", &cfg, "--out", "e"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = shadowlab(&["summarize", "e.csv", "--delta", "0.2,0.05"], dir.path());
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    let table = String::from_utf8(s.stdout).unwrap();
    assert_eq!(table.lines().count(), 5);
    assert!(table.lines().next().unwrap().contains("t_star"));
    assert!(table.lines().next().unwrap().contains("g_bound"));

    let malformed = write(dir.path(), "bad.csv", "architecture,N\nchain1d,notanumber\n");
    assert_eq!(shadowlab(&["summarize", &malformed], dir.path()).status.code(), Some(2));
}

#[test]
fn bounds_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mc.toml", MC);
    assert!(shadowlab(&["bounds", "--config", &cfg, "--out", "b"], dir.path()).status.success());
    assert!(std::fs::read_to_string(dir.path().join("b.bounds.csv")).unwrap().lines().count() > 1);
    assert!(std::fs::read_to_string(dir.path().join("b.gbound.csv")).unwrap().lines().count() > 1);

    let out = shadowlab(&["oracle", "--n", "2", "--state", "ghz", "--p", "0.02"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let f = v["fidelity"].as_f64().unwrap();
    assert!((v["fidelity_mean"].as_f64().unwrap() - f).abs() < 1e-12);
    assert!((v["purity_mean"].as_f64().unwrap() - v["purity"].as_f64().unwrap()).abs() < 1e-12);
    assert_eq!(shadowlab(&["oracle", "--n", "3"], dir.path()).status.code(), Some(2));
}

#[test]
fn selftest_runs_a_single_cheap_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let out = shadowlab(&["selftest", "--only", "10"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS 10"));
}
