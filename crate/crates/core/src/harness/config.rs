use serde::{Deserialize, Serialize};

use crate::architectures::Architecture;
use crate::clifford::{GateChoice, Pauli, PauliString, StateSpec};
use crate::replica::RhoSpec;
use crate::shadow::{Estimator, Preparation, Randomizer};

use super::HarnessError;

/// Randomizer family of a run. `global` is the uniform Clifford group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArchitectureChoice {
    Chain1d,
    Grid2d,
    Alltoall,
    Global,
}

impl ArchitectureChoice {
    pub fn name(self) -> &'static str {
        match self {
            ArchitectureChoice::Chain1d => "chain1d",
            ArchitectureChoice::Grid2d => "grid2d",
            ArchitectureChoice::Alltoall => "alltoall",
            ArchitectureChoice::Global => "global",
        }
    }

    pub fn circuit(self) -> Option<Architecture> {
        match self {
            ArchitectureChoice::Chain1d => Some(Architecture::Chain1d),
            ArchitectureChoice::Grid2d => Some(Architecture::Grid2d),
            ArchitectureChoice::Alltoall => Some(Architecture::Alltoall),
            ArchitectureChoice::Global => None,
        }
    }

    pub fn randomizer(self, depth: usize) -> Randomizer {
        match self.circuit() {
            Some(architecture) => Randomizer::Circuit { architecture, depth },
            None => Randomizer::Global,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    MonteCarlo,
    Exact,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::MonteCarlo => "monte_carlo",
            Mode::Exact => "exact",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "monte_carlo" | "mc" => Ok(Mode::MonteCarlo),
            "exact" => Ok(Mode::Exact),
            other => Err(HarnessError::Config(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    Zero,
    Ghz,
    /// `⊗ diag(cos²μ, sin²μ)`.
    Product { mu: f64 },
    Cluster2d,
    RandomStabilizer {
        tau: usize,
        seed: u64,
        #[serde(default)]
        gates: GateChoice,
    },
}

impl StateConfig {
    pub fn label(&self) -> String {
        match self {
            StateConfig::Zero => "zero".into(),
            StateConfig::Ghz => "ghz".into(),
            StateConfig::Product { mu } => format!("product({mu})"),
            StateConfig::Cluster2d => "cluster2d".into(),
            StateConfig::RandomStabilizer { tau, seed, .. } => format!("random_stabilizer({tau};{seed})"),
        }
    }

    /// The pure stabilizer state behind the lab state.
    pub fn pure(&self) -> StateSpec {
        match self {
            StateConfig::Zero | StateConfig::Product { .. } => StateSpec::Zero,
            StateConfig::Ghz => StateSpec::Ghz,
            StateConfig::Cluster2d => StateSpec::Cluster2d,
            StateConfig::RandomStabilizer { tau, seed, gates } => StateSpec::RandomStabilizer {
                depth: *tau,
                seed: *seed,
                gates: *gates,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseConfig {
    #[default]
    None,
    Depolarizing { p: f64 },
}

impl NoiseConfig {
    pub fn p(&self) -> f64 {
        match self {
            NoiseConfig::None => 0.0,
            NoiseConfig::Depolarizing { p } => *p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorConfig {
    /// Target defaults to the pure state behind the lab state.
    Fidelity {
        #[serde(default)]
        target: Option<StateConfig>,
    },
    Purity,
    /// `P` as a literal (`"XZZY"`), a repeated letter (`"X*"`), or sparse
    /// factors with 0-based qubits (`"Z0 Z1"`).
    Pauli { pauli: String },
}

impl EstimatorConfig {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorConfig::Fidelity { .. } => "fidelity",
            EstimatorConfig::Purity => "purity",
            EstimatorConfig::Pauli { .. } => "pauli",
        }
    }
}

fn letter(c: char) -> Option<Pauli> {
    match c {
        'I' => Some(Pauli::I),
        'X' => Some(Pauli::X),
        'Y' => Some(Pauli::Y),
        'Z' => Some(Pauli::Z),
        _ => None,
    }
}

/// Expands a Pauli pattern on `n` qubits.
pub fn parse_pauli_pattern(s: &str, n: usize) -> Result<PauliString, HarnessError> {
    let bad = || HarnessError::Config(format!("bad Pauli pattern {s:?} for N = {n}"));
    let s = s.trim();
    let p = if let Some(head) = s.strip_suffix('*') {
        let mut cs = head.chars();
        let (Some(c), None) = (cs.next(), cs.next()) else { return Err(bad()) };
        PauliString::from_labels(&vec![letter(c).ok_or_else(bad)?; n])
    } else if s.chars().any(|c| c.is_ascii_digit()) {
        let mut labels = vec![Pauli::I; n];
        for tok in s.split_whitespace() {
            let mut cs = tok.chars();
            let l = cs.next().and_then(letter).ok_or_else(bad)?;
            let q: usize = cs.as_str().parse().map_err(|_| bad())?;
            if q >= n || labels[q] != Pauli::I {
                return Err(bad());
            }
            labels[q] = l;
        }
        PauliString::from_labels(&labels)
    } else {
        let labels: Vec<Pauli> = s.chars().map(|c| letter(c).ok_or_else(bad)).collect::<Result<_, _>>()?;
        if labels.len() != n {
            return Err(bad());
        }
        PauliString::from_labels(&labels)
    };
    if p.is_identity() {
        return Err(HarnessError::Config("the Pauli estimator needs a non-identity P".into()));
    }
    Ok(p)
}

fn default_m() -> usize {
    50
}
fn default_b() -> usize {
    100
}
fn default_output() -> String {
    "shadowlab_out".into()
}

/// One experiment grid, read from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub architecture: ArchitectureChoice,
    #[serde(alias = "N_list")]
    pub n_list: Vec<usize>,
    /// Ignored for `global`, which has no depth; use `[0]` there.
    pub depth_list: Vec<usize>,
    pub state: StateConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    pub estimator: EstimatorConfig,
    pub mode: Mode,
    #[serde(default = "default_m", alias = "M")]
    pub m: usize,
    /// Defaults per estimator: 9600 fidelity, 90000 purity, 36000 Pauli.
    #[serde(default, alias = "R")]
    pub r: Option<usize>,
    #[serde(default = "default_b", alias = "B")]
    pub b: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output")]
    pub output_path: String,
    #[serde(default, alias = "δ_list")]
    pub delta_list: Vec<f64>,
}

/// A validated run for one `N`.
#[derive(Clone, Debug)]
pub struct Job {
    pub n: usize,
    pub prep: Preparation,
    pub estimator: Estimator,
    pub rho: Option<RhoSpec>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn realizations(&self) -> usize {
        self.r.unwrap_or(match self.estimator {
            EstimatorConfig::Fidelity { .. } => 9600,
            EstimatorConfig::Purity => 90_000,
            EstimatorConfig::Pauli { .. } => 36_000,
        })
    }

    pub fn preparation(&self) -> Preparation {
        let mut p = Preparation::pure(self.state.pure());
        if let StateConfig::Product { mu } = self.state {
            p.bit_flip = mu.sin().powi(2);
        }
        p.depolarizing = self.noise.p();
        p
    }

    /// Checks every field and builds the per-`N` jobs. Nothing runs until
    /// this succeeds for the whole grid.
    pub fn validate(&self) -> Result<Vec<Job>, HarnessError> {
        let cfg = |m: String| Err(HarnessError::Config(m));
        if self.n_list.is_empty() || self.depth_list.is_empty() {
            return cfg("n_list and depth_list must be non-empty".into());
        }
        if self.depth_list.windows(2).any(|w| w[0] >= w[1]) {
            return cfg("depth_list must be strictly increasing".into());
        }
        if self.architecture == ArchitectureChoice::Global && self.depth_list != [0] {
            return cfg("global runs have no depth axis; set depth_list = [0]".into());
        }
        if let StateConfig::Product { mu } = self.state {
            if !mu.is_finite() {
                return cfg("product angle must be finite".into());
            }
        }
        let p = self.noise.p();
        if !(0.0..=1.0).contains(&p) {
            return cfg(format!("noise probability {p} outside [0, 1]"));
        }
        if self.delta_list.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return cfg("delta_list entries must be positive".into());
        }
        if self.mode == Mode::MonteCarlo {
            if self.m == 0 || self.realizations() < 2 || self.b < 2 {
                return cfg("need M >= 1, R >= 2 and B >= 2".into());
            }
            if matches!(self.estimator, EstimatorConfig::Purity) && self.m < 2 {
                return cfg("the purity estimator needs M >= 2".into());
            }
        }
        let mut jobs = Vec::with_capacity(self.n_list.len());
        for &n in &self.n_list {
            if n == 0 {
                return cfg("N must be positive".into());
            }
            if let Some(a) = self.architecture.circuit() {
                a.validate(n).map_err(|e| HarnessError::Config(e.to_string()))?;
            }
            let prep = self.preparation();
            prep.prepared(n).map_err(|e| HarnessError::Config(e.to_string()))?;
            let estimator = match &self.estimator {
                EstimatorConfig::Fidelity { target } => {
                    let t = target.as_ref().map_or_else(|| self.state.pure(), |t| t.pure());
                    crate::clifford::prepare(&t, n).map_err(|e| HarnessError::Config(e.to_string()))?;
                    Estimator::Fidelity { target: t }
                }
                EstimatorConfig::Purity => Estimator::Purity,
                EstimatorConfig::Pauli { pauli } => Estimator::Pauli {
                    pauli: parse_pauli_pattern(pauli, n)?,
                },
            };
            let rho = if self.mode == Mode::Exact { Some(self.exact_support(n)?) } else { None }.flatten();
            jobs.push(Job { n, prep, estimator, rho });
        }
        Ok(jobs)
    }

    /// The `ρ` the exact engines need (`None` for fidelity), or exit-3
    /// diagnostics for combinations they cannot evaluate.
    fn exact_support(&self, n: usize) -> Result<Option<RhoSpec>, HarnessError> {
        let un = |m: String| Err(HarnessError::UnsupportedExact(m));
        let arch = match self.architecture {
            ArchitectureChoice::Chain1d => crate::architectures::Architecture::Chain1d,
            ArchitectureChoice::Alltoall => crate::architectures::Architecture::Alltoall,
            other => return un(format!("no exact engine for {}", other.name())),
        };
        if self.noise.p() != 0.0 {
            return un("exact engines take noiseless lab states".into());
        }
        let probe = crate::replica::exact_sweep(n, arch, 0, None);
        if let Err(e) = probe {
            return un(e.to_string());
        }
        match (&self.estimator, &self.state) {
            (EstimatorConfig::Fidelity { target }, StateConfig::Zero) if target.as_ref().is_none_or(|t| *t == StateConfig::Zero) => {
                Ok(None)
            }
            (EstimatorConfig::Fidelity { .. }, _) => un("exact fidelity covers target = lab = |0…0⟩ only".into()),
            (EstimatorConfig::Purity, StateConfig::Product { mu }) => Ok(Some(RhoSpec::Product { mu: *mu })),
            (EstimatorConfig::Purity, StateConfig::Zero) => Ok(Some(RhoSpec::Product { mu: 0.0 })),
            (EstimatorConfig::Purity, StateConfig::Ghz) => Ok(Some(RhoSpec::Ghz)),
            (EstimatorConfig::Purity, s) => un(format!("exact purity covers product and ghz states, not {}", s.label())),
            (EstimatorConfig::Pauli { .. }, _) => un("no exact engine for the Pauli estimator".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
architecture = "chain1d"
N_list = [4, 6]
depth_list = [1, 2, 3]
mode = "monte_carlo"
M = 10
R = 20
master_seed = 7
delta_list = [0.1]

[state]
kind = "ghz"

[noise]
kind = "depolarizing"
p = 0.02

[estimator]
kind = "fidelity"
"#;

    #[test]
    fn parses_and_validates() {
        let c = ExperimentConfig::from_toml(BASE).unwrap();
        assert_eq!(c.n_list, vec![4, 6]);
        assert_eq!(c.b, 100);
        let jobs = c.validate().unwrap();
        assert_eq!(jobs.len(), 2);
        assert_eq!(jobs[0].prep.depolarizing, 0.02);
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(ExperimentConfig::from_toml(&BASE.replace("chain1d", "ring")).is_err());
        assert!(ExperimentConfig::from_toml(&BASE.replace("M = 10", "M = 10\nbogus = 1")).is_err());
        let c = ExperimentConfig::from_toml(&BASE.replace("p = 0.02", "p = 1.5")).unwrap();
        assert!(matches!(c.validate(), Err(HarnessError::Config(_))));
        let c = ExperimentConfig::from_toml(&BASE.replace("[1, 2, 3]", "[2, 1]")).unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn exact_combinations() {
        let c = ExperimentConfig::from_toml(&BASE.replace("monte_carlo", "exact")).unwrap();
        assert!(matches!(c.validate(), Err(HarnessError::UnsupportedExact(_))));
        let grid = BASE.replace("monte_carlo", "exact").replace("chain1d", "grid2d").replace("[4, 6]", "[4, 9]");
        assert!(matches!(ExperimentConfig::from_toml(&grid).unwrap().validate(), Err(HarnessError::UnsupportedExact(_))));
        let purity = BASE
            .replace("monte_carlo", "exact")
            .replace("kind = \"depolarizing\"\np = 0.02", "kind = \"none\"")
            .replace("kind = \"fidelity\"", "kind = \"purity\"");
        let jobs = ExperimentConfig::from_toml(&purity).unwrap().validate().unwrap();
        assert_eq!(jobs[0].rho, Some(RhoSpec::Ghz));
    }

    #[test]
    fn pauli_patterns() {
        assert_eq!(parse_pauli_pattern("X*", 3).unwrap().to_string(), "+XXX");
        assert_eq!(parse_pauli_pattern("Z0 Z1", 4).unwrap().to_string(), "+ZZII");
        assert_eq!(parse_pauli_pattern("XYZ", 3).unwrap().to_string(), "+XYZ");
        assert!(parse_pauli_pattern("XYZ", 4).is_err());
        assert!(parse_pauli_pattern("I*", 4).is_err());
        assert!(parse_pauli_pattern("Z5", 4).is_err());
    }
}
