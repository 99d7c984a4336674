use rayon::prelude::*;

use super::estimators::{fidelity_term, pauli_term, purity_estimate_realized, RealizedSnapshot};
use super::seeds::snapshot_seed;
use super::snapshot::{collect_seeded, Preparation, PreparedState, Randomizer, Snapshot};
use crate::clifford::{prepare, PauliString, StabilizerTableau, StateSpec};
use crate::error::{Error, Result};

/// Which estimator a realization evaluates.
#[derive(Clone, Debug, PartialEq)]
pub enum Estimator {
    Fidelity { target: StateSpec },
    Purity,
    Pauli { pauli: PauliString },
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Fidelity { .. } => "fidelity",
            Estimator::Purity => "purity",
            Estimator::Pauli { .. } => "pauli",
        }
    }
}

enum Ready {
    Fidelity(StabilizerTableau),
    Purity,
    Pauli(PauliString),
}

/// `R` independent realizations, each from `M` fresh snapshots with
/// independent circuits.
#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarlo {
    pub n: usize,
    pub randomizer: Randomizer,
    pub prep: Preparation,
    pub m: usize,
    pub r: usize,
    pub master_seed: u64,
}

impl MonteCarlo {
    fn check(&self) -> Result<PreparedState> {
        self.randomizer.validate(self.n)?;
        if self.m == 0 || self.r == 0 {
            return Err(Error::TooFewSamples { needed: 1, got: self.m.min(self.r) });
        }
        self.prep.prepared(self.n)
    }

    pub fn seed(&self, r: usize, s: usize) -> u64 {
        snapshot_seed(self.master_seed, self.n, self.randomizer.depth_tag(), r, s)
    }

    fn batch(&self, prep: &PreparedState, r: usize) -> Result<Vec<RealizedSnapshot>> {
        (0..self.m)
            .map(|s| {
                let (snapshot, unitary) = collect_seeded(prep, self.randomizer, self.seed(r, s))?;
                Ok(RealizedSnapshot { snapshot, unitary })
            })
            .collect()
    }

    /// Snapshots of realization `r`.
    pub fn snapshots(&self, r: usize) -> Result<Vec<Snapshot>> {
        let prep = self.check()?;
        Ok(self.batch(&prep, r)?.into_iter().map(|s| s.snapshot).collect())
    }

    /// Per-estimator realization values, in realization order. All
    /// estimators see the same snapshots. Runs on the current rayon pool.
    pub fn run(&self, estimators: &[Estimator]) -> Result<Vec<Vec<f64>>> {
        let prep = self.check()?;
        let ready: Vec<Ready> = estimators
            .iter()
            .map(|e| {
                Ok(match e {
                    Estimator::Fidelity { target } => Ready::Fidelity(prepare(target, self.n)?),
                    Estimator::Purity => {
                        if self.m < 2 {
                            return Err(Error::TooFewSamples { needed: 2, got: self.m });
                        }
                        Ready::Purity
                    }
                    Estimator::Pauli { pauli } => {
                        if pauli.num_qubits() != self.n {
                            return Err(Error::SizeMismatch { left: pauli.num_qubits(), right: self.n });
                        }
                        if pauli.is_identity() {
                            return Err(Error::IdentityPauli);
                        }
                        Ready::Pauli(pauli.clone())
                    }
                })
            })
            .collect::<Result<_>>()?;
        let rows: Vec<Vec<f64>> = (0..self.r)
            .into_par_iter()
            .map(|r| {
                let batch = self.batch(&prep, r)?;
                ready.iter().map(|e| evaluate(e, &batch)).collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        Ok((0..estimators.len()).map(|k| rows.iter().map(|row| row[k]).collect()).collect())
    }
}

fn evaluate(e: &Ready, batch: &[RealizedSnapshot]) -> Result<f64> {
    let m = batch.len() as f64;
    match e {
        Ready::Fidelity(target) => {
            let mut s = 0.0;
            for snap in batch {
                s += fidelity_term(snap, target)?;
            }
            Ok(s / m)
        }
        Ready::Purity => purity_estimate_realized(batch),
        Ready::Pauli(p) => {
            let mut s = 0.0;
            for snap in batch {
                s += pauli_term(snap, p)?;
            }
            Ok(s / m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architectures::Architecture;

    fn mc(r: usize) -> MonteCarlo {
        MonteCarlo {
            n: 4,
            randomizer: Randomizer::Circuit { architecture: Architecture::Chain1d, depth: 3 },
            prep: Preparation::pure(StateSpec::Ghz),
            m: 5,
            r,
            master_seed: 42,
        }
    }

    #[test]
    fn independent_of_thread_count() {
        let est = [Estimator::Fidelity { target: StateSpec::Ghz }, Estimator::Purity, Estimator::Pauli { pauli: "XXXX".parse().unwrap() }];
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| mc(30).run(&est).unwrap());
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| mc(30).run(&est).unwrap());
        assert_eq!(one, four);
        assert_eq!(one.len(), 3);
        assert_eq!(one[0].len(), 30);
    }

    #[test]
    fn realizations_are_prefix_stable() {
        let a = mc(10).run(&[Estimator::Purity]).unwrap();
        let b = mc(20).run(&[Estimator::Purity]).unwrap();
        assert_eq!(a[0][..], b[0][..10]);
    }

    #[test]
    fn snapshots_replay_estimates() {
        let m = mc(3);
        let snaps = m.snapshots(2).unwrap();
        let direct = crate::shadow::estimators::purity_estimate(&snaps).unwrap();
        assert_eq!(direct, m.run(&[Estimator::Purity]).unwrap()[0][2]);
    }

    #[test]
    fn rejects_bad_setups() {
        let mut m = mc(2);
        m.m = 1;
        assert!(m.run(&[Estimator::Purity]).is_err());
        assert!(mc(2).run(&[Estimator::Pauli { pauli: "XX".parse().unwrap() }]).is_err());
        let mut m = mc(2);
        m.randomizer = Randomizer::Circuit { architecture: Architecture::Grid2d, depth: 1 };
        m.n = 5;
        assert!(m.run(&[Estimator::Purity]).is_err());
    }
}
