//! Layer structures for brickwork chains, 2D grids and all-to-all pairings.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{sample_two_qubit_clifford, square_side, CliffordGateId, PauliString, StabilizerTableau};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Architecture {
    Chain1d,
    Grid2d,
    Alltoall,
}

impl Architecture {
    pub fn name(self) -> &'static str {
        match self {
            Architecture::Chain1d => "chain1d",
            Architecture::Grid2d => "grid2d",
            Architecture::Alltoall => "alltoall",
        }
    }

    /// Rejects qubit counts the connectivity cannot host.
    pub fn validate(self, n: usize) -> Result<()> {
        match self {
            Architecture::Chain1d if n < 2 => Err(Error::InvalidGeometry("chain1d needs N >= 2".into())),
            Architecture::Grid2d => match square_side(n) {
                Some(l) if l >= 2 => Ok(()),
                _ => Err(Error::InvalidGeometry(format!("grid2d needs N = L^2 with L >= 2, got {n}"))),
            },
            Architecture::Alltoall if n < 2 || n % 2 == 1 => {
                Err(Error::InvalidGeometry(format!("alltoall needs even N >= 2, got {n}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Architecture {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain1d" => Ok(Architecture::Chain1d),
            "grid2d" => Ok(Architecture::Grid2d),
            "alltoall" => Ok(Architecture::Alltoall),
            other => Err(Error::Parse(format!("unknown architecture {other:?}"))),
        }
    }
}

/// One layer: disjoint pairs and the gate on each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub pairs: Vec<(u32, u32)>,
    pub gates: Vec<CliffordGateId>,
}

/// A random circuit `U = V_t ⋯ V_1`, reproducible from its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitPlan {
    pub architecture: Architecture,
    pub n: usize,
    pub depth: usize,
    pub seed: u64,
    /// Set on plans produced by [`CircuitPlan::inverse`].
    pub inverted: bool,
    pub layers: Vec<Layer>,
}

/// Pairs of the deterministic layer `l` for chain1d and grid2d.
///
/// Chain layers alternate even and odd bonds. Grid layers cycle right, down,
/// left, up; sites whose neighbour in that direction is off the lattice idle.
pub fn fixed_layer_pairs(arch: Architecture, n: usize, l: usize) -> Vec<(u32, u32)> {
    match arch {
        Architecture::Chain1d => (l % 2..n.saturating_sub(1)).step_by(2).map(|j| (j as u32, j as u32 + 1)).collect(),
        Architecture::Grid2d => {
            let side = square_side(n).expect("validated grid");
            let site = |x: usize, y: usize| (y * side + x) as u32;
            let mut pairs = Vec::with_capacity(n / 2);
            match l % 4 {
                0 => {
                    for y in 0..side {
                        for x in (0..side - 1).step_by(2) {
                            pairs.push((site(x, y), site(x + 1, y)));
                        }
                    }
                }
                1 => {
                    for y in (0..side - 1).step_by(2) {
                        for x in 0..side {
                            pairs.push((site(x, y), site(x, y + 1)));
                        }
                    }
                }
                2 => {
                    for y in 0..side {
                        for x in (2..side).step_by(2) {
                            pairs.push((site(x, y), site(x - 1, y)));
                        }
                    }
                }
                _ => {
                    for y in (2..side).step_by(2) {
                        for x in 0..side {
                            pairs.push((site(x, y), site(x, y - 1)));
                        }
                    }
                }
            }
            pairs
        }
        Architecture::Alltoall => panic!("alltoall layers are random"),
    }
}

fn random_matching<R: rand::Rng>(n: usize, rng: &mut R) -> Vec<(u32, u32)> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(rng);
    perm.chunks_exact(2).map(|c| (c[0], c[1])).collect()
}

/// Builds the depth-`depth` circuit for `(arch, n, seed)`.
pub fn build_circuit(arch: Architecture, n: usize, depth: usize, seed: u64) -> Result<CircuitPlan> {
    arch.validate(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::with_capacity(depth);
    for l in 0..depth {
        let pairs = match arch {
            Architecture::Alltoall => random_matching(n, &mut rng),
            _ => fixed_layer_pairs(arch, n, l),
        };
        let gates = pairs.iter().map(|_| sample_two_qubit_clifford(&mut rng)).collect();
        let layer = Layer { pairs, gates };
        check_disjoint(&layer, n)?;
        layers.push(layer);
    }
    Ok(CircuitPlan {
        architecture: arch,
        n,
        depth,
        seed,
        inverted: false,
        layers,
    })
}

fn check_disjoint(layer: &Layer, n: usize) -> Result<()> {
    let mut used = vec![false; n];
    for &(a, b) in &layer.pairs {
        for q in [a as usize, b as usize] {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            if std::mem::replace(&mut used[q], true) {
                return Err(Error::RepeatedQubit(q));
            }
        }
    }
    Ok(())
}

impl CircuitPlan {
    /// `U†`: layers reversed, every gate inverted.
    pub fn inverse(&self) -> CircuitPlan {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|l| Layer {
                pairs: l.pairs.clone(),
                gates: l.gates.iter().map(|g| g.inverse()).collect(),
            })
            .collect();
        CircuitPlan {
            inverted: !self.inverted,
            layers,
            ..self.clone()
        }
    }

    /// Replaces every gate with `g`.
    pub fn fill_gates(&mut self, g: CliffordGateId) {
        for l in &mut self.layers {
            l.gates.iter_mut().for_each(|slot| *slot = g);
        }
    }

    pub fn num_gates(&self) -> usize {
        self.layers.iter().map(|l| l.pairs.len()).sum()
    }

    /// Heisenberg image `U P U†`.
    pub fn conjugate_pauli(&self, p: &PauliString) -> Result<PauliString> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch {
                left: p.num_qubits(),
                right: self.n,
            });
        }
        let mut out = p.clone();
        for layer in &self.layers {
            for (&(j, k), g) in layer.pairs.iter().zip(&layer.gates) {
                out.conjugate_local(g.local_map(), j as usize, k as usize);
            }
        }
        Ok(out)
    }
}

/// Free-function form of [`CircuitPlan::inverse`].
pub fn inverse_circuit(plan: &CircuitPlan) -> CircuitPlan {
    plan.inverse()
}

/// Free-function form of [`CircuitPlan::conjugate_pauli`].
pub fn pauli_conjugate(plan: &CircuitPlan, p: &PauliString) -> Result<PauliString> {
    plan.conjugate_pauli(p)
}

impl StabilizerTableau {
    pub fn apply_plan(&mut self, plan: &CircuitPlan) -> Result<()> {
        if plan.n != self.num_qubits() {
            return Err(Error::SizeMismatch {
                left: plan.n,
                right: self.num_qubits(),
            });
        }
        for layer in &plan.layers {
            for (&(j, k), &g) in layer.pairs.iter().zip(&layer.gates) {
                self.apply_gate(g, j as usize, k as usize)?;
            }
            debug_assert!(plan.n > 16 || self.is_symplectic(), "tableau lost its symplectic form");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{prepare, StateSpec};
    use std::collections::HashMap;

    #[test]
    fn chain_brickwork() {
        let p = build_circuit(Architecture::Chain1d, 4, 2, 0).unwrap();
        assert_eq!(p.layers[0].pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(p.layers[1].pairs, vec![(1, 2)]);
    }

    #[test]
    fn alltoall_perfect_matching() {
        let p = build_circuit(Architecture::Alltoall, 6, 5, 3).unwrap();
        for l in &p.layers {
            assert_eq!(l.pairs.len(), 3);
            let mut seen: Vec<u32> = l.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            seen.sort();
            assert_eq!(seen, (0..6).collect::<Vec<_>>());
        }
        assert!(build_circuit(Architecture::Alltoall, 5, 1, 0).is_err());
    }

    #[test]
    fn alltoall_matching_frequencies() {
        let p = build_circuit(Architecture::Alltoall, 4, 300_000, 11).unwrap();
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for l in &p.layers {
            let partner_of_0 = l.pairs.iter().find_map(|&(a, b)| match (a, b) {
                (0, x) | (x, 0) => Some(x),
                _ => None,
            });
            *counts.entry(partner_of_0.unwrap()).or_default() += 1;
        }
        let total = p.layers.len() as f64;
        let sigma = (total * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for k in 1..4 {
            assert!((counts[&k] as f64 - total / 3.0).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn grid_cycles_all_neighbours() {
        let side = 6;
        let n = side * side;
        let mut partners: HashMap<u32, Vec<u32>> = HashMap::new();
        for l in 3..7 {
            for (a, b) in fixed_layer_pairs(Architecture::Grid2d, n, l) {
                partners.entry(a).or_default().push(b);
                partners.entry(b).or_default().push(a);
            }
        }
        for y in 1..side - 1 {
            for x in 1..side - 1 {
                let q = (y * side + x) as u32;
                let mut got = partners[&q].clone();
                got.sort();
                let s = side as u32;
                let mut want = vec![q - s, q - 1, q + 1, q + s];
                want.sort();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn grid_rejects_non_square() {
        assert!(build_circuit(Architecture::Grid2d, 10, 1, 0).is_err());
        assert!(build_circuit(Architecture::Grid2d, 1, 1, 0).is_err());
    }

    #[test]
    fn plans_are_deterministic() {
        for arch in [Architecture::Chain1d, Architecture::Alltoall, Architecture::Grid2d] {
            let a = build_circuit(arch, 16, 7, 99).unwrap();
            assert_eq!(a, build_circuit(arch, 16, 7, 99).unwrap());
            assert_ne!(a, build_circuit(arch, 16, 7, 100).unwrap());
        }
    }

    #[test]
    fn inverse_undoes_plan() {
        let p = build_circuit(Architecture::Alltoall, 8, 6, 4).unwrap();
        assert_eq!(p.inverse().inverse(), p);
        let spec = StateSpec::RandomStabilizer {
            depth: 4,
            seed: 2,
            gates: Default::default(),
        };
        let psi = prepare(&spec, 8).unwrap();
        let mut t = psi.clone();
        t.apply_plan(&p).unwrap();
        t.apply_plan(&p.inverse()).unwrap();
        assert_eq!(t.overlap_sq(&psi).unwrap(), 1.0);
    }

    #[test]
    fn cnot_conjugation() {
        let mut p = build_circuit(Architecture::Chain1d, 2, 1, 0).unwrap();
        p.fill_gates(CliffordGateId::cnot());
        let xi: PauliString = "XI".parse().unwrap();
        assert_eq!(p.conjugate_pauli(&xi).unwrap().to_string(), "+XX");
        let empty = build_circuit(Architecture::Chain1d, 2, 0, 0).unwrap();
        assert_eq!(empty.conjugate_pauli(&xi).unwrap(), xi);
    }
}
