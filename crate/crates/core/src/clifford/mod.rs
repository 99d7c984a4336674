//! Stabilizer-tableau simulation: Pauli strings, the two-qubit Clifford
//! group, measurement and overlaps.

mod bits;
pub mod gates;
mod global;
mod pauli;
mod tableau;

pub use bits::BitString;
pub use global::GlobalClifford;
pub use gates::{reference_gate, sample_two_qubit_clifford, CliffordGateId, TWO_QUBIT_CLIFFORDS};
pub use pauli::{Pauli, PauliString};
pub use tableau::{CanonicalStabilizers, StabilizerTableau, ZBasisForm};

use crate::architectures::{build_circuit, Architecture};
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// How gates are chosen for a random short-range entangled state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateChoice {
    /// Independent uniform gate at every location.
    #[default]
    Iid,
    /// One uniform gate drawn from the seed, repeated everywhere.
    Repeated,
    /// The fixed [`reference_gate`] everywhere.
    Reference,
}

/// Pure stabilizer states that can be prepared directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    Zero,
    Ghz,
    /// 2D cluster state on an `L × L` grid, `N = L²`.
    Cluster2d,
    /// `|0…0⟩` evolved by a depth-`depth` brickwork circuit on the open chain.
    RandomStabilizer {
        depth: usize,
        seed: u64,
        #[serde(default)]
        gates: GateChoice,
    },
}

/// Prepares the tableau of `spec` on `n` qubits.
pub fn prepare(spec: &StateSpec, n: usize) -> Result<StabilizerTableau> {
    if n == 0 {
        return Err(Error::InvalidGeometry("need at least one qubit".into()));
    }
    let mut t = StabilizerTableau::zero(n);
    match spec {
        StateSpec::Zero => {}
        StateSpec::Ghz => {
            t.h(0)?;
            for q in 1..n {
                t.cnot(q - 1, q)?;
            }
        }
        StateSpec::Cluster2d => {
            let l = square_side(n).ok_or_else(|| Error::InvalidGeometry(format!("{n} is not a perfect square")))?;
            for q in 0..n {
                t.h(q)?;
            }
            for y in 0..l {
                for x in 0..l {
                    let q = y * l + x;
                    if x + 1 < l {
                        t.cz(q, q + 1)?;
                    }
                    if y + 1 < l {
                        t.cz(q, q + l)?;
                    }
                }
            }
        }
        StateSpec::RandomStabilizer { depth, seed, gates } => {
            let mut plan = build_circuit(Architecture::Chain1d, n, *depth, *seed)?;
            let fixed = match gates {
                GateChoice::Iid => None,
                GateChoice::Repeated => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed ^ 0x5eed_9a7e);
                    Some(sample_two_qubit_clifford(&mut rng))
                }
                GateChoice::Reference => Some(reference_gate()),
            };
            if let Some(g) = fixed {
                plan.fill_gates(g);
            }
            t.apply_plan(&plan)?;
        }
    }
    Ok(t)
}

pub(crate) fn square_side(n: usize) -> Option<usize> {
    let l = (n as f64).sqrt().round() as usize;
    (l * l == n).then_some(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(t: &StabilizerTableau) -> Vec<String> {
        t.stabilizers().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn ghz_three_stabilizers() {
        let t = prepare(&StateSpec::Ghz, 3).unwrap();
        for s in ["XXX", "ZZI", "IZZ"] {
            assert_eq!(t.expectation(&s.parse().unwrap()), 1.0);
        }
        assert_eq!(t.expectation(&"ZII".parse().unwrap()), 0.0);
        assert_eq!(t.expectation(&"-YYX".parse().unwrap()), 1.0);
        assert_eq!(labels(&prepare(&StateSpec::Zero, 2).unwrap()), ["+ZI", "+IZ"]);
    }

    #[test]
    fn cluster_requires_square() {
        assert!(prepare(&StateSpec::Cluster2d, 5).is_err());
        assert!(prepare(&StateSpec::Cluster2d, 9).unwrap().is_symplectic());
    }

    #[test]
    fn random_stabilizer_is_deterministic() {
        let spec = StateSpec::RandomStabilizer {
            depth: 3,
            seed: 7,
            gates: GateChoice::Iid,
        };
        assert_eq!(prepare(&spec, 6).unwrap(), prepare(&spec, 6).unwrap());
    }
}
