//! Uniformly random `N`-qubit Clifford unitaries, stored by their action on
//! the Pauli generators.

use rand::Rng;

use super::pauli::{words_for, PauliString};
use super::tableau::StabilizerTableau;
use crate::error::{Error, Result};

/// `U` through the images `U X_q U†` (first `N`) and `U Z_q U†` (last `N`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalClifford {
    n: usize,
    images: Vec<PauliString>,
}

fn hermitian(n: usize, x: Vec<u64>, z: Vec<u64>, negative: bool) -> PauliString {
    let y: u32 = x.iter().zip(&z).map(|(a, b)| (a & b).count_ones()).sum();
    PauliString::from_parts(n, x, z, ((y + 2 * negative as u32) & 3) as u8)
}

fn symp(a: &(Vec<u64>, Vec<u64>), b: &(Vec<u64>, Vec<u64>)) -> bool {
    let s: u32 = (0..a.0.len()).map(|i| (a.0[i] & b.1[i]).count_ones() + (a.1[i] & b.0[i]).count_ones()).sum();
    s % 2 == 1
}

fn xor_into(a: &mut (Vec<u64>, Vec<u64>), b: &(Vec<u64>, Vec<u64>)) {
    a.0.iter_mut().zip(&b.0).for_each(|(x, y)| *x ^= y);
    a.1.iter_mut().zip(&b.1).for_each(|(x, y)| *x ^= y);
}

impl GlobalClifford {
    pub fn identity(n: usize) -> Self {
        let mut images = Vec::with_capacity(2 * n);
        for p in [super::Pauli::X, super::Pauli::Z] {
            for q in 0..n {
                images.push(PauliString::single(n, q, p).expect("qubit in range"));
            }
        }
        GlobalClifford { n, images }
    }

    /// Uniform over the Clifford group modulo global phase.
    ///
    /// Symplectic pairs are drawn one at a time: a random vector is projected
    /// onto the symplectic complement of the pairs chosen so far (the
    /// projection is linear and onto, so the result is uniform there), and
    /// zero or wrongly paired draws are rejected. Signs are independent
    /// fair coins.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGeometry("need at least one qubit".into()));
        }
        let wq = words_for(n);
        let tail = if n % 64 == 0 { u64::MAX } else { (1u64 << (n % 64)) - 1 };
        let draw = |rng: &mut R| -> (Vec<u64>, Vec<u64>) {
            let mut v = (vec![0u64; wq], vec![0u64; wq]);
            for part in [&mut v.0, &mut v.1] {
                part.iter_mut().for_each(|w| *w = rng.gen());
                part[wq - 1] &= tail;
            }
            v
        };
        let mut pairs: Vec<((Vec<u64>, Vec<u64>), (Vec<u64>, Vec<u64>))> = Vec::with_capacity(n);
        let project = |u: &mut (Vec<u64>, Vec<u64>), pairs: &[((Vec<u64>, Vec<u64>), (Vec<u64>, Vec<u64>))]| {
            for (v, w) in pairs {
                let (cw, cv) = (symp(u, w), symp(u, v));
                if cw {
                    xor_into(u, v);
                }
                if cv {
                    xor_into(u, w);
                }
            }
        };
        for _ in 0..n {
            let v = loop {
                let mut u = draw(rng);
                project(&mut u, &pairs);
                if u.0.iter().chain(&u.1).any(|&w| w != 0) {
                    break u;
                }
            };
            let w = loop {
                let mut u = draw(rng);
                project(&mut u, &pairs);
                if symp(&u, &v) {
                    break u;
                }
            };
            pairs.push((v, w));
        }
        let mut xs = Vec::with_capacity(n);
        let mut zs = Vec::with_capacity(n);
        for (v, w) in pairs {
            xs.push(hermitian(n, v.0, v.1, rng.gen()));
            zs.push(hermitian(n, w.0, w.1, rng.gen()));
        }
        xs.extend(zs);
        Ok(GlobalClifford { n, images: xs })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// `U X_q U†` for `q < N`, `U Z_{q−N} U†` for `q ≥ N`.
    pub fn images(&self) -> &[PauliString] {
        &self.images
    }

    /// `U P U†`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch { left: p.num_qubits(), right: self.n });
        }
        // P = i^k X^x Z^z, so U P U† = i^k (Π X'_q)(Π Z'_q).
        let mut out = PauliString::identity(self.n);
        out.mul_phase(p.phase());
        for q in 0..self.n {
            if p.x_bit(q) {
                out.mul_assign_right(&self.images[q]);
            }
        }
        for q in 0..self.n {
            if p.z_bit(q) {
                out.mul_assign_right(&self.images[self.n + q]);
            }
        }
        Ok(out)
    }

    /// `U†`, found by solving for preimages of the generators and fixing
    /// their signs against the forward map.
    pub fn inverse(&self) -> GlobalClifford {
        let n = self.n;
        let mut images = Vec::with_capacity(2 * n);
        for target in GlobalClifford::identity(n).images {
            let wq = words_for(n);
            let (mut x, mut z) = (vec![0u64; wq], vec![0u64; wq]);
            for q in 0..n {
                if !target.commutes_with(&self.images[n + q]) {
                    x[q / 64] |= 1 << (q % 64);
                }
                if !target.commutes_with(&self.images[q]) {
                    z[q / 64] |= 1 << (q % 64);
                }
            }
            let mut pre = hermitian(n, x, z, false);
            let img = self.conjugate(&pre).expect("same size");
            if img.phase() != target.phase() {
                pre.mul_phase(2);
            }
            images.push(pre);
        }
        GlobalClifford { n, images }
    }

    /// `|φ⟩ → U|φ⟩` on a full tableau.
    pub fn apply_to(&self, t: &StabilizerTableau) -> Result<StabilizerTableau> {
        if t.num_qubits() != self.n {
            return Err(Error::SizeMismatch { left: t.num_qubits(), right: self.n });
        }
        let rows: Vec<PauliString> = (0..2 * self.n).map(|i| self.conjugate(&t.row(i))).collect::<Result<_>>()?;
        StabilizerTableau::from_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Pauli;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_images_form_a_symplectic_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 5, 70] {
            let u = GlobalClifford::random(n, &mut rng).unwrap();
            let img = u.images();
            for a in 0..2 * n {
                assert!(img[a].hermitian_sign().is_some());
                for b in a + 1..2 * n {
                    assert_eq!(img[a].commutes_with(&img[b]), b != a + n || a >= n);
                }
            }
        }
    }

    #[test]
    fn inverse_undoes_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 3, 8] {
            let u = GlobalClifford::random(n, &mut rng).unwrap();
            let ui = u.inverse();
            for _ in 0..20 {
                let labels: Vec<Pauli> = (0..n).map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)]).collect();
                let mut p = PauliString::from_labels(&labels);
                if rng.gen() {
                    p.mul_phase(2);
                }
                let back = ui.conjugate(&u.conjugate(&p).unwrap()).unwrap();
                assert_eq!(back, p);
            }
        }
    }

    #[test]
    fn one_qubit_group_is_uniform() {
        // Images of (X, Z) identify the 24 elements.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut counts = std::collections::HashMap::new();
        let draws = 48_000;
        for _ in 0..draws {
            let u = GlobalClifford::random(1, &mut rng).unwrap();
            *counts.entry(format!("{}{}", u.images()[0], u.images()[1])).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 24);
        for &c in counts.values() {
            assert!((c as f64 - 2000.0).abs() < 5.0 * 2000f64.sqrt());
        }
    }

    #[test]
    fn two_qubit_group_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = std::collections::HashMap::new();
        let draws = 11_520 * 20;
        for _ in 0..draws {
            let u = GlobalClifford::random(2, &mut rng).unwrap();
            let key: String = u.images().iter().map(|p| p.to_string()).collect();
            *counts.entry(key).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 11_520);
        let chi2: f64 = counts.values().map(|&c| (c as f64 - 20.0).powi(2) / 20.0).sum();
        // 11519 degrees of freedom: mean 11519, sd ≈ 152.
        assert!((chi2 - 11_519.0).abs() < 6.0 * 152.0, "chi2 = {chi2}");
    }

    #[test]
    fn apply_matches_expectations() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let u = GlobalClifford::random(4, &mut rng).unwrap();
        let t = u.apply_to(&StabilizerTableau::zero(4)).unwrap();
        assert!(t.is_symplectic());
        for q in 0..4 {
            let z = PauliString::single(4, q, Pauli::Z).unwrap();
            assert_eq!(t.expectation(&u.conjugate(&z).unwrap()), 1.0);
        }
    }
}
