//! Exact averages over whole Clifford groups on one or two qubits.
//!
//! Every degree-2 quantity is written through the two-copy twirl
//! `Φ(X) = E[(U⊗U) X (U⊗U)†]`, composed layer by layer since layers are
//! independent.

use num_complex::Complex64;

use super::dense::{apply_pair, DenseState, DensityMatrix};
use crate::architectures::Architecture;
use crate::clifford::gates::{all_two_qubit_cliffords, one_qubit_cliffords, Matrix4};
use crate::clifford::PauliString;
use crate::error::{Error, Result};

/// Refuse any request whose enumeration exceeds this many group elements.
pub const TERM_LIMIT: usize = 1_000_000_000;
pub const MAX_DEPTH: usize = 3;

/// Which random unitary the average runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    /// Depth-`depth` circuit. On one qubit every layer is a uniform
    /// single-qubit Clifford regardless of architecture.
    Circuit { architecture: Architecture, depth: usize },
    /// The full Clifford group on `N ≤ 2` qubits.
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    OneQubit,
    TwoQubit,
    Idle,
}

fn slots(n: usize, ens: Ensemble) -> Result<Vec<Slot>> {
    if !(1..=2).contains(&n) {
        return Err(Error::SizeLimit(format!("exhaustive averages need N <= 2, got {n}")));
    }
    let full = if n == 1 { Slot::OneQubit } else { Slot::TwoQubit };
    let out = match ens {
        Ensemble::Global => vec![full],
        Ensemble::Circuit { architecture, depth } => {
            if depth > MAX_DEPTH {
                return Err(Error::SizeLimit(format!("exhaustive circuits stop at depth {MAX_DEPTH}")));
            }
            (0..depth)
                .map(|l| match (n, architecture) {
                    (1, _) => Ok(Slot::OneQubit),
                    (_, Architecture::Chain1d) => Ok(if l % 2 == 0 { Slot::TwoQubit } else { Slot::Idle }),
                    (_, Architecture::Alltoall) => Ok(Slot::TwoQubit),
                    (_, Architecture::Grid2d) => Err(Error::Unsupported("grid2d needs N >= 4".into())),
                })
                .collect::<Result<_>>()?
        }
    };
    let terms: usize = out
        .iter()
        .map(|s| match s {
            Slot::OneQubit => 24,
            Slot::TwoQubit => 11_520,
            Slot::Idle => 1,
        })
        .sum();
    if terms > TERM_LIMIT {
        return Err(Error::SizeLimit(format!("{terms} terms exceed the limit")));
    }
    Ok(out)
}

/// Dense `D × D` unitaries for one slot.
fn unitaries(slot: Slot) -> Vec<Vec<Complex64>> {
    match slot {
        Slot::OneQubit => one_qubit_cliffords()
            .iter()
            .map(|m| m.iter().flat_map(|r| r.iter().copied()).collect())
            .collect(),
        Slot::TwoQubit => all_two_qubit_cliffords()
            .map(|g| g.dense().iter().flat_map(|r| r.iter().copied()).collect())
            .collect(),
        Slot::Idle => vec![],
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug)]
struct Mat {
    d: usize,
    a: Vec<Complex64>,
}

impl Mat {
    fn zeros(d: usize) -> Self {
        Mat { d, a: vec![zero(); d * d] }
    }

    fn mul(&self, o: &Mat) -> Mat {
        let d = self.d;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let v = self.a[i * d + k];
                if v == zero() {
                    continue;
                }
                for j in 0..d {
                    out.a[i * d + j] += v * o.a[k * d + j];
                }
            }
        }
        out
    }

    fn dagger(&self) -> Mat {
        let d = self.d;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.a[i * d + j] = self.a[j * d + i].conj();
            }
        }
        out
    }

    fn trace(&self) -> Complex64 {
        (0..self.d).map(|i| self.a[i * self.d + i]).sum()
    }
}

/// `U ⊗ U` on two copies; copy one is the low index.
fn doubled(u: &[Complex64], d: usize) -> Mat {
    let dd = d * d;
    let mut v = Mat::zeros(dd);
    for i2 in 0..d {
        for i1 in 0..d {
            for j2 in 0..d {
                for j1 in 0..d {
                    v.a[(i1 + d * i2) * dd + (j1 + d * j2)] = u[i1 * d + j1] * u[i2 * d + j2];
                }
            }
        }
    }
    v
}

fn twirl(x: &Mat, us: &[Vec<Complex64>], d: usize, adjoint: bool) -> Mat {
    if us.is_empty() {
        return x.clone();
    }
    let mut acc = Mat::zeros(x.d);
    for u in us {
        let v = doubled(u, d);
        let y = if adjoint { v.dagger().mul(x).mul(&v) } else { v.mul(x).mul(&v.dagger()) };
        for (a, b) in acc.a.iter_mut().zip(&y.a) {
            *a += b;
        }
    }
    let s = 1.0 / us.len() as f64;
    acc.a.iter_mut().for_each(|v| *v *= s);
    acc
}

/// `Φ(X)` for the circuit, or `Φ†(X)` when `adjoint` is set.
fn channel(x: Mat, n: usize, ens: Ensemble, adjoint: bool) -> Result<Mat> {
    let d = 1usize << n;
    let mut seq = slots(n, ens)?;
    if adjoint {
        seq.reverse();
    }
    let mut x = x;
    for s in seq {
        x = twirl(&x, &unitaries(s), d, adjoint);
    }
    Ok(x)
}

fn kron(a: &DensityMatrix, b: &DensityMatrix) -> Mat {
    let d = a.dim();
    let dd = d * d;
    let mut out = Mat::zeros(dd);
    for i2 in 0..d {
        for i1 in 0..d {
            for j2 in 0..d {
                for j1 in 0..d {
                    out.a[(i1 + d * i2) * dd + (j1 + d * j2)] = a.get(i1, j1) * b.get(i2, j2);
                }
            }
        }
    }
    out
}

fn basis_pairs(d: usize) -> Mat {
    let dd = d * d;
    let mut m = Mat::zeros(dd);
    for b in 0..d {
        let i = b + d * b;
        m.a[i * dd + i] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Degree-2 functionals the oracle evaluates.
pub enum Functional<'a> {
    /// `E |⟨0|U|0⟩|⁴`.
    CollisionZ,
    /// Mean of the single-snapshot fidelity estimator.
    FidelityMean { rho: &'a DensityMatrix, target: &'a DenseState },
    /// Mean of the pairwise purity estimator.
    PurityMean { rho: &'a DensityMatrix },
}

/// Exact average of `functional` over every gate assignment and outcome.
pub fn exhaustive_channel_average(n: usize, ens: Ensemble, functional: &Functional<'_>) -> Result<f64> {
    let d = 1usize << n;
    let dd = d * d;
    let df = d as f64;
    match functional {
        Functional::CollisionZ => {
            let mut x = Mat::zeros(dd);
            x.a[0] = Complex64::new(1.0, 0.0);
            Ok(channel(x, n, ens, false)?.a[0].re)
        }
        Functional::FidelityMean { rho, target } => {
            if rho.n != n || target.n != n {
                return Err(Error::SizeMismatch { left: rho.n, right: n });
            }
            let y = channel(kron(rho, &target.to_density()), n, ens, false)?;
            let s: f64 = (0..d).map(|b| y.a[(b + d * b) * dd + (b + d * b)].re).sum();
            Ok((df + 1.0) * s - 1.0)
        }
        Functional::PurityMean { rho } => {
            if rho.n != n {
                return Err(Error::SizeMismatch { left: rho.n, right: n });
            }
            let a = channel(basis_pairs(d), n, ens, true)?;
            // C = Tr_1[A (ρ ⊗ I)].
            let mut c = Mat::zeros(d);
            for i2 in 0..d {
                for j2 in 0..d {
                    let mut v = zero();
                    for i1 in 0..d {
                        for k1 in 0..d {
                            v += a.a[(i1 + d * i2) * dd + (k1 + d * j2)] * rho.get(k1, i1);
                        }
                    }
                    c.a[i2 * d + j2] = v;
                }
            }
            Ok((df + 1.0).powi(2) * c.mul(&c).trace().re - df - 2.0)
        }
    }
}

/// All global-Clifford snapshots of `ρ` as weighted states `U†|b⟩`.
pub struct GlobalShadowEnsemble {
    n: usize,
    weights: Vec<f64>,
    states: Vec<Vec<Complex64>>,
}

impl GlobalShadowEnsemble {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        let n = rho.n;
        let d = 1usize << n;
        let seq = slots(n, Ensemble::Global)?;
        let us = unitaries(seq[0]);
        let g = us.len() as f64;
        let mut weights = Vec::with_capacity(us.len() * d);
        let mut states = Vec::with_capacity(us.len() * d);
        for u in &us {
            for b in 0..d {
                // φ = U†|b⟩ has components conj(U[b][k]).
                let phi: Vec<Complex64> = (0..d).map(|k| u[b * d + k].conj()).collect();
                let mut p = zero();
                for i in 0..d {
                    for j in 0..d {
                        p += phi[i].conj() * rho.get(i, j) * phi[j];
                    }
                }
                weights.push(p.re / g);
                states.push(phi);
            }
        }
        Ok(GlobalShadowEnsemble { n, weights, states })
    }

    fn dim(&self) -> f64 {
        (1usize << self.n) as f64
    }

    fn moments<F: Fn(&[Complex64]) -> f64>(&self, f: F) -> (f64, f64) {
        let (mut m1, mut m2) = (0.0, 0.0);
        for (w, s) in self.weights.iter().zip(&self.states) {
            let v = f(s);
            m1 += w * v;
            m2 += w * v * v;
        }
        (m1, m2 - m1 * m1)
    }

    /// Mean and single-snapshot variance of `(D+1)|⟨φ|ψ⟩|² − 1`.
    pub fn fidelity_moments(&self, target: &DenseState) -> (f64, f64) {
        let d = self.dim();
        self.moments(|phi| {
            let ov: Complex64 = phi.iter().zip(&target.amps).map(|(a, b)| a.conj() * b).sum();
            (d + 1.0) * ov.norm_sqr() - 1.0
        })
    }

    /// Mean and single-snapshot variance of `(D+1)⟨φ|P|φ⟩`.
    pub fn pauli_moments(&self, p: &PauliString) -> (f64, f64) {
        let d = self.dim();
        self.moments(|phi| {
            let s = DenseState { n: self.n, amps: phi.to_vec() };
            (d + 1.0) * s.expectation(p)
        })
    }

    /// Mean and variance of the `M`-snapshot pairwise purity estimator.
    pub fn purity_moments(&self, m: usize) -> Result<(f64, f64)> {
        if m < 2 {
            return Err(Error::TooFewSamples { needed: 2, got: m });
        }
        let d = 1usize << self.n;
        let df = d as f64;
        // Two-level summation keeps the ~10^4-term accumulation near machine precision.
        let mut c = Mat::zeros(d);
        let mut a = Mat::zeros(d * d);
        let chunk = 64 * d;
        for (ws, ps) in self.weights.chunks(chunk).zip(self.states.chunks(chunk)) {
            let mut cc = Mat::zeros(d);
            let mut ac = Mat::zeros(d * d);
            for (w, phi) in ws.iter().zip(ps) {
                for i in 0..d {
                    for j in 0..d {
                        cc.a[i * d + j] += phi[i] * phi[j].conj() * *w;
                    }
                }
                let pp: Vec<Complex64> = (0..d * d).map(|k| phi[k % d] * phi[k / d]).collect();
                for i in 0..d * d {
                    for j in 0..d * d {
                        ac.a[i * d * d + j] += pp[i] * pp[j].conj() * *w;
                    }
                }
            }
            c.a.iter_mut().zip(&cc.a).for_each(|(x, y)| *x += y);
            a.a.iter_mut().zip(&ac.a).for_each(|(x, y)| *x += y);
        }
        let q2 = c.mul(&c).trace().re;
        let q4 = a.mul(&a).trace().re;
        let k = (df + 1.0).powi(2);
        let mean = k * q2 - df - 2.0;
        let var_h = k * k * q4 - 2.0 * k * (df + 2.0) * q2 + (df + 2.0).powi(2) - mean * mean;
        let (_, var_h1) = self.moments(|phi| {
            let mut v = zero();
            for i in 0..d {
                for j in 0..d {
                    v += phi[i].conj() * c.a[i * d + j] * phi[j];
                }
            }
            k * v.re - df - 2.0
        });
        let mf = m as f64;
        let pairs = mf * (mf - 1.0) / 2.0;
        Ok((mean, (var_h + 2.0 * (mf - 2.0) * var_h1) / pairs))
    }
}

/// `⟨e_a ⊗ e_b| E[U⊗U*⊗U⊗U*] |e_c ⊗ e_d⟩` over all two-qubit Cliffords, for
/// real 16-dimensional site vectors indexed `r1 + 2r2 + 4r3 + 8r4`.
pub fn replica_gate_average(site: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = site.len();
    let pair_vec = |a: usize, b: usize| -> Vec<Complex64> {
        (0..256).map(|i| Complex64::new(site[a][i & 15] * site[b][i >> 4], 0.0)).collect()
    };
    let basis: Vec<Vec<Complex64>> = (0..k * k).map(|i| pair_vec(i % k, i / k)).collect();
    let mut out = vec![vec![0.0; k * k]; k * k];
    let mut count = 0.0;
    for g in all_two_qubit_cliffords() {
        let u = g.dense();
        let mut uc: Matrix4 = u;
        uc.iter_mut().flatten().for_each(|v| *v = v.conj());
        for (col, v) in basis.iter().enumerate() {
            let mut w = v.clone();
            for r in 0..4 {
                apply_pair(&mut w, if r % 2 == 0 { &u } else { &uc }, r, 4 + r);
            }
            for (row, e) in basis.iter().enumerate() {
                out[row][col] += e.iter().zip(&w).map(|(a, b)| a.conj() * b).sum::<Complex64>().re;
            }
        }
        count += 1.0;
    }
    out.iter_mut().flatten().for_each(|v| *v /= count);
    out
}
