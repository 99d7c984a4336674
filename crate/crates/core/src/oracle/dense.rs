use num_complex::Complex64;

use crate::architectures::CircuitPlan;
use crate::clifford::gates::Matrix4;
use crate::clifford::{BitString, PauliString, StabilizerTableau};
use crate::error::{Error, Result};

/// Largest qubit count the dense oracle accepts.
pub const DENSE_LIMIT: usize = 6;

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > DENSE_LIMIT {
        return Err(Error::SizeLimit(format!("dense oracle handles 1..={DENSE_LIMIT} qubits, got {n}")));
    }
    Ok(())
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn i_pow(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `P|b⟩ = c·|b'⟩`; returns `(b', c)`. Basis index bit `q` is qubit `q`.
pub fn pauli_on_basis(p: &PauliString, b: usize) -> (usize, Complex64) {
    let x = p.x_words()[0] as usize;
    let z = p.z_words()[0] as usize;
    let sign = if (z & b).count_ones() % 2 == 1 { 2 } else { 0 };
    (b ^ x, i_pow(p.phase() + sign))
}

/// Applies a 4×4 unitary (basis `b_j + 2 b_k`) on qubits `(j, k)` of a vector.
pub(crate) fn apply_pair(amps: &mut [Complex64], u: &Matrix4, j: usize, k: usize) {
    let (mj, mk) = (1usize << j, 1usize << k);
    for base in 0..amps.len() {
        if base & (mj | mk) != 0 {
            continue;
        }
        let idx = [base, base | mj, base | mk, base | mj | mk];
        let v = idx.map(|i| amps[i]);
        for (r, &i) in idx.iter().enumerate() {
            amps[i] = (0..4).map(|c| u[r][c] * v[c]).sum();
        }
    }
}

fn dagger(u: &Matrix4) -> Matrix4 {
    let mut o = [[zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            o[i][j] = u[j][i].conj();
        }
    }
    o
}

/// Dense state vector on at most [`DENSE_LIMIT`] qubits.
#[derive(Clone, Debug)]
pub struct DenseState {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(&BitString::zeros(n))
    }

    pub fn basis(b: &BitString) -> Result<Self> {
        check_size(b.len())?;
        let mut amps = vec![zero(); 1 << b.len()];
        amps[b.to_index()] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n: b.len(), amps })
    }

    /// The state stabilized by a tableau, up to global phase.
    pub fn from_tableau(t: &StabilizerTableau) -> Result<Self> {
        let rho = DensityMatrix::from_tableau(t)?;
        let d = rho.dim();
        let j = (0..d).max_by(|&a, &b| rho.get(a, a).re.total_cmp(&rho.get(b, b).re)).unwrap();
        let norm = rho.get(j, j).re.sqrt();
        let amps = (0..d).map(|i| rho.get(i, j) / norm).collect();
        Ok(DenseState { n: t.num_qubits(), amps })
    }

    pub fn apply_two_qubit(&mut self, u: &Matrix4, j: usize, k: usize) {
        apply_pair(&mut self.amps, u, j, k);
    }

    /// Exact action of every gate in the plan, using each gate's unitary.
    pub fn apply_plan(&mut self, plan: &CircuitPlan) -> Result<()> {
        if plan.n != self.n {
            return Err(Error::SizeMismatch { left: plan.n, right: self.n });
        }
        for layer in &plan.layers {
            for (&(j, k), g) in layer.pairs.iter().zip(&layer.gates) {
                self.apply_two_qubit(&g.dense(), j as usize, k as usize);
            }
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn expectation(&self, p: &PauliString) -> f64 {
        let mut acc = zero();
        for (b, a) in self.amps.iter().enumerate() {
            let (b2, c) = pauli_on_basis(p, b);
            acc += self.amps[b2].conj() * c * a;
        }
        acc.re
    }

    pub fn to_density(&self) -> DensityMatrix {
        let d = self.amps.len();
        let mut data = vec![zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                data[i * d + j] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix { n: self.n, data }
    }
}

/// Dense density matrix, row-major.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_size(n)?;
        let d = 1usize << n;
        let mut data = vec![zero(); d * d];
        for i in 0..d {
            data[i * d + i] = Complex64::new(1.0 / d as f64, 0.0);
        }
        Ok(DensityMatrix { n, data })
    }

    /// `2^{-N} Σ_{g ∈ S} g`, summed over the whole stabilizer group.
    pub fn from_tableau(t: &StabilizerTableau) -> Result<Self> {
        let n = t.num_qubits();
        check_size(n)?;
        let d = 1usize << n;
        let gens = t.stabilizers();
        let mut data = vec![zero(); d * d];
        let scale = 1.0 / d as f64;
        for mask in 0..(1usize << n) {
            let mut g = PauliString::identity(n);
            for (i, s) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    g.mul_assign_right(s);
                }
            }
            for b in 0..d {
                let (b2, c) = pauli_on_basis(&g, b);
                data[b2 * d + b] += c * scale;
            }
        }
        Ok(DensityMatrix { n, data })
    }

    /// `ρ ↦ U ρ U†` for a two-qubit unitary on `(j, k)`.
    pub fn apply_two_qubit(&mut self, u: &Matrix4, j: usize, k: usize) {
        let d = self.dim();
        for col in 0..d {
            let mut v: Vec<Complex64> = (0..d).map(|r| self.data[r * d + col]).collect();
            apply_pair(&mut v, u, j, k);
            for r in 0..d {
                self.data[r * d + col] = v[r];
            }
        }
        let ud = dagger(u);
        // Right multiplication by U† acts on rows as (U†)^T = conj(U).
        let mut conj = [[zero(); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                conj[a][b] = ud[b][a];
            }
        }
        for r in 0..d {
            apply_pair(&mut self.data[r * d..(r + 1) * d], &conj, j, k);
        }
    }

    pub fn apply_plan(&mut self, plan: &CircuitPlan) -> Result<()> {
        if plan.n != self.n {
            return Err(Error::SizeMismatch { left: plan.n, right: self.n });
        }
        for layer in &plan.layers {
            for (&(j, k), g) in layer.pairs.iter().zip(&layer.gates) {
                self.apply_two_qubit(&g.dense(), j as usize, k as usize);
            }
        }
        Ok(())
    }

    fn conjugate_by_pauli(&self, p: &PauliString) -> DensityMatrix {
        let d = self.dim();
        let mut out = vec![zero(); d * d];
        for i in 0..d {
            let (i2, ci) = pauli_on_basis(p, i);
            for j in 0..d {
                let (j2, cj) = pauli_on_basis(p, j);
                out[i2 * d + j2] = ci * self.data[i * d + j] * cj.conj();
            }
        }
        DensityMatrix { n: self.n, data: out }
    }

    /// Applies `(1 − 3p/4)ρ + (p/4)(XρX + YρY + ZρZ)` on every qubit.
    pub fn depolarize(&mut self, p: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        for q in 0..self.n {
            let mut acc: Vec<Complex64> = self.data.iter().map(|v| v * (1.0 - 0.75 * p)).collect();
            for label in [crate::clifford::Pauli::X, crate::clifford::Pauli::Y, crate::clifford::Pauli::Z] {
                let pq = PauliString::single(self.n, q, label)?;
                let c = self.conjugate_by_pauli(&pq);
                for (a, v) in acc.iter_mut().zip(&c.data) {
                    *a += v * (0.25 * p);
                }
            }
            self.data = acc;
        }
        Ok(())
    }

    /// Flips each qubit with probability `prob` (`ρ ↦ (1−q)ρ + q XρX` per qubit).
    pub fn bit_flip(&mut self, prob: f64) -> Result<()> {
        for q in 0..self.n {
            let pq = PauliString::single(self.n, q, crate::clifford::Pauli::X)?;
            let c = self.conjugate_by_pauli(&pq);
            for (a, v) in self.data.iter_mut().zip(&c.data) {
                *a = *a * (1.0 - prob) + v * prob;
            }
        }
        Ok(())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn matmul(&self, other: &DensityMatrix) -> DensityMatrix {
        let d = self.dim();
        let mut out = vec![zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == zero() {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        DensityMatrix { n: self.n, data: out }
    }

    pub fn fidelity_with(&self, psi: &DenseState) -> f64 {
        let d = self.dim();
        let mut acc = zero();
        for i in 0..d {
            for j in 0..d {
                acc += psi.amps[i].conj() * self.data[i * d + j] * psi.amps[j];
            }
        }
        acc.re
    }

    pub fn expectation(&self, p: &PauliString) -> f64 {
        let d = self.dim();
        let mut acc = zero();
        for b in 0..d {
            let (b2, c) = pauli_on_basis(p, b);
            // Tr(ρP) = Σ_b ⟨b|ρ P|b⟩ = Σ_b ρ[b, b2] c.
            acc += self.data[b * d + b2] * c;
        }
        acc.re
    }
}

/// `(⟨ψ|ρ|ψ⟩, Tr ρ², Tr ρ³)`.
pub fn dense_fidelity_purity(rho: &DensityMatrix, psi: &DenseState) -> Result<(f64, f64, f64)> {
    if rho.n != psi.n {
        return Err(Error::SizeMismatch { left: rho.n, right: psi.n });
    }
    let r2 = rho.matmul(rho);
    let p2 = r2.trace();
    let p3 = r2.matmul(rho).trace();
    Ok((rho.fidelity_with(psi), p2, p3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architectures::{build_circuit, Architecture};
    use crate::clifford::{prepare, StateSpec};

    #[test]
    fn ghz_density_and_state_agree() {
        let t = prepare(&StateSpec::Ghz, 3).unwrap();
        let psi = DenseState::from_tableau(&t).unwrap();
        let p = psi.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[7] - 0.5).abs() < 1e-12);
        let x: PauliString = "XXX".parse().unwrap();
        assert!((psi.expectation(&x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_and_mixed_fidelity_purity() {
        let t = prepare(&StateSpec::Ghz, 3).unwrap();
        let psi = DenseState::from_tableau(&t).unwrap();
        let (f, p2, p3) = dense_fidelity_purity(&psi.to_density(), &psi).unwrap();
        assert!((f - 1.0).abs() < 1e-12 && (p2 - 1.0).abs() < 1e-12 && (p3 - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        let (f, p2, p3) = dense_fidelity_purity(&mixed, &psi).unwrap();
        assert!((f - 0.125).abs() < 1e-12 && (p2 - 0.125).abs() < 1e-12 && (p3 - 1.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn norm_is_preserved_over_many_layers() {
        let plan = build_circuit(Architecture::Alltoall, 6, 100, 1).unwrap();
        let mut s = DenseState::zero(6).unwrap();
        s.apply_plan(&plan).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tableau_and_dense_probabilities_agree() {
        for seed in 0..10 {
            let plan = build_circuit(Architecture::Chain1d, 4, 5, seed).unwrap();
            let mut t = StabilizerTableau::zero(4);
            t.apply_plan(&plan).unwrap();
            let mut s = DenseState::zero(4).unwrap();
            s.apply_plan(&plan).unwrap();
            for (b, p) in s.probabilities().iter().enumerate() {
                assert!((t.basis_overlap_sq(&BitString::from_index(4, b)) - p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn depolarized_z_expectation() {
        let mut rho = DenseState::zero(1).unwrap().to_density();
        rho.depolarize(0.02).unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert!((rho.expectation(&z) - 0.98).abs() < 1e-12);
    }
}
