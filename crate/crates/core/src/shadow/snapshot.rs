use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::seeds::{derive, TRAJECTORY_TAG};
use crate::architectures::{build_circuit, Architecture, CircuitPlan};
use crate::clifford::{prepare, BitString, GlobalClifford, PauliString, StabilizerTableau, StateSpec};
use crate::error::{Error, Result};

/// Source of the randomizing unitary `U` of one snapshot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Randomizer {
    /// Depth-`depth` two-qubit Clifford circuit.
    Circuit { architecture: Architecture, depth: usize },
    /// Uniform `N`-qubit Clifford, the `t → ∞` limit.
    Global,
}

impl Randomizer {
    pub fn label(&self) -> &'static str {
        match self {
            Randomizer::Circuit { architecture, .. } => architecture.name(),
            Randomizer::Global => "global",
        }
    }

    pub fn depth(&self) -> Option<usize> {
        match self {
            Randomizer::Circuit { depth, .. } => Some(*depth),
            Randomizer::Global => None,
        }
    }

    /// Seed-hash coordinate for the depth axis.
    pub(crate) fn depth_tag(&self) -> u64 {
        self.depth().map_or(u64::MAX, |d| d as u64)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Randomizer::Circuit { architecture, .. } => architecture.validate(n),
            Randomizer::Global if n == 0 => Err(Error::InvalidGeometry("need at least one qubit".into())),
            Randomizer::Global => Ok(()),
        }
    }
}

/// Identity of a snapshot's unitary: rebuilt bit-exactly from these fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRef {
    pub randomizer: Randomizer,
    pub n: usize,
    pub seed: u64,
}

impl PlanRef {
    pub fn realize(&self) -> Result<Unitary> {
        match self.randomizer {
            Randomizer::Circuit { architecture, depth } => Ok(Unitary::Circuit(build_circuit(architecture, self.n, depth, self.seed)?)),
            Randomizer::Global => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                Ok(Unitary::Global(GlobalClifford::random(self.n, &mut rng)?))
            }
        }
    }
}

/// A realized randomizing unitary.
#[derive(Clone, Debug)]
pub enum Unitary {
    Circuit(CircuitPlan),
    Global(GlobalClifford),
}

impl Unitary {
    pub fn num_qubits(&self) -> usize {
        match self {
            Unitary::Circuit(p) => p.n,
            Unitary::Global(g) => g.num_qubits(),
        }
    }

    /// `|φ⟩ → U|φ⟩`.
    pub fn apply(&self, t: &mut StabilizerTableau) -> Result<()> {
        match self {
            Unitary::Circuit(p) => t.apply_plan(p),
            Unitary::Global(g) => {
                *t = g.apply_to(t)?;
                Ok(())
            }
        }
    }

    pub fn inverse(&self) -> Unitary {
        match self {
            Unitary::Circuit(p) => Unitary::Circuit(p.inverse()),
            Unitary::Global(g) => Unitary::Global(g.inverse()),
        }
    }

    /// `U P U†`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        match self {
            Unitary::Circuit(plan) => plan.conjugate_pauli(p),
            Unitary::Global(g) => g.conjugate(p),
        }
    }
}

/// `(U, b)`: the unitary's identity and the measured outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub plan: PlanRef,
    pub outcome: BitString,
}

/// Lab state: a stabilizer state followed by independent local noise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preparation {
    pub state: StateSpec,
    /// Per-qubit `X` flip probability, applied first.
    #[serde(default)]
    pub bit_flip: f64,
    /// Per-qubit depolarizing strength `p` of `(1−p)ρ + p I/2`.
    #[serde(default)]
    pub depolarizing: f64,
}

impl Preparation {
    pub fn pure(state: StateSpec) -> Self {
        Preparation {
            state,
            bit_flip: 0.0,
            depolarizing: 0.0,
        }
    }

    /// `⊗ diag(cos²μ, sin²μ)`.
    pub fn product(mu: f64) -> Self {
        Preparation {
            state: StateSpec::Zero,
            bit_flip: mu.sin().powi(2),
            depolarizing: 0.0,
        }
    }

    pub fn prepared(&self, n: usize) -> Result<PreparedState> {
        for p in [self.bit_flip, self.depolarizing] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityOutOfRange(p));
            }
        }
        Ok(PreparedState {
            base: prepare(&self.state, n)?,
            bit_flip: self.bit_flip,
            depolarizing: self.depolarizing,
        })
    }
}

/// A [`Preparation`] with its noiseless tableau built once.
#[derive(Clone, Debug)]
pub struct PreparedState {
    pub base: StabilizerTableau,
    bit_flip: f64,
    depolarizing: f64,
}

impl PreparedState {
    pub fn num_qubits(&self) -> usize {
        self.base.num_qubits()
    }

    /// A fresh noise trajectory of the lab state.
    pub fn trajectory<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Result<StabilizerTableau> {
        let mut t = self.base.clone();
        if self.bit_flip > 0.0 {
            t.apply_bit_flips(self.bit_flip, rng)?;
        }
        t.apply_depolarizing_trajectory(self.depolarizing, rng)?;
        Ok(t)
    }
}

/// Noise trajectory, then `U`, then a computational-basis measurement.
pub fn collect_snapshot<R: rand::Rng + ?Sized>(prep: &PreparedState, plan: PlanRef, unitary: &Unitary, rng: &mut R) -> Result<Snapshot> {
    if plan.n != prep.num_qubits() || unitary.num_qubits() != plan.n {
        return Err(Error::SizeMismatch {
            left: plan.n,
            right: prep.num_qubits(),
        });
    }
    let mut t = prep.trajectory(rng)?;
    unitary.apply(&mut t)?;
    let outcome = t.measure_all_z(rng);
    Ok(Snapshot { plan, outcome })
}

/// Builds the unitary from `seed` and draws the trajectory stream from the
/// same seed, returning both so estimators can reuse the unitary.
pub fn collect_seeded(prep: &PreparedState, randomizer: Randomizer, seed: u64) -> Result<(Snapshot, Unitary)> {
    let plan = PlanRef {
        randomizer,
        n: prep.num_qubits(),
        seed,
    };
    let unitary = plan.realize()?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, TRAJECTORY_TAG));
    let snap = collect_snapshot(prep, plan, &unitary, &mut rng)?;
    Ok((snap, unitary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DenseState;

    #[test]
    fn depth_zero_outcomes() {
        let circuit = Randomizer::Circuit { architecture: Architecture::Chain1d, depth: 0 };
        let zero = Preparation::pure(StateSpec::Zero).prepared(5).unwrap();
        let ghz = Preparation::pure(StateSpec::Ghz).prepared(5).unwrap();
        for seed in 0..50 {
            let (s, _) = collect_seeded(&zero, circuit, seed).unwrap();
            assert_eq!(s.outcome, BitString::zeros(5));
            let (g, _) = collect_seeded(&ghz, circuit, seed).unwrap();
            assert!(g.outcome == BitString::zeros(5) || g.outcome == BitString::ones(5));
        }
    }

    #[test]
    fn plans_replay_from_seed() {
        let r = Randomizer::Circuit { architecture: Architecture::Alltoall, depth: 4 };
        let prep = Preparation::pure(StateSpec::Ghz).prepared(6).unwrap();
        let (a, _) = collect_seeded(&prep, r, 99).unwrap();
        let (b, _) = collect_seeded(&prep, r, 99).unwrap();
        assert_eq!(a, b);
        for rz in [r, Randomizer::Global] {
            let p = PlanRef { randomizer: rz, n: 6, seed: 5 };
            match (p.realize().unwrap(), p.realize().unwrap()) {
                (Unitary::Circuit(x), Unitary::Circuit(y)) => assert_eq!(x, y),
                (Unitary::Global(x), Unitary::Global(y)) => assert_eq!(x, y),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn outcome_distribution_matches_dense_oracle() {
        let n = 3;
        let r = Randomizer::Circuit { architecture: Architecture::Chain1d, depth: 2 };
        let plan = PlanRef { randomizer: r, n, seed: 2024 };
        let u = plan.realize().unwrap();
        let Unitary::Circuit(ref cp) = u else { unreachable!() };
        let prep = Preparation::pure(StateSpec::Ghz).prepared(n).unwrap();
        let mut psi = DenseState::from_tableau(&prep.base).unwrap();
        psi.apply_plan(cp).unwrap();
        let probs = psi.probabilities();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws = 1_000_000;
        let mut counts = vec![0usize; 8];
        // One tableau evolution, then repeated sampling of its outcome law.
        let mut t = prep.base.clone();
        u.apply(&mut t).unwrap();
        let form = t.z_basis_form();
        for _ in 0..draws {
            counts[form.sample(&mut rng).to_index()] += 1;
        }
        let tv: f64 = counts.iter().zip(&probs).map(|(&c, p)| (c as f64 / draws as f64 - p).abs()).sum::<f64>() / 2.0;
        assert!(tv < 0.01, "tv = {tv}");
        let mut direct = vec![0usize; 8];
        for _ in 0..20_000 {
            direct[collect_snapshot(&prep, plan, &u, &mut rng).unwrap().outcome.to_index()] += 1;
        }
        let tv2: f64 = direct.iter().zip(&probs).map(|(&c, p)| (c as f64 / 20_000.0 - p).abs()).sum::<f64>() / 2.0;
        assert!(tv2 < 0.03, "tv = {tv2}");
    }
}
