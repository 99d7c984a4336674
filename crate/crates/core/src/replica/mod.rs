//! Exact infinite-sample averages from the four-replica mapping.
//!
//! Each averaged gate maps the replicated site space onto the two-level
//! tilde basis, so a depth-`t` average becomes an evolution of a real vector:
//! `2^N` amplitudes for the chain and `N + 1` symmetric amplitudes for
//! all-to-all circuits.

pub mod chain;
pub mod site;
pub mod state;
pub mod symmetric;
pub mod tstar;

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

pub use chain::{chain_log_z, chain_sweep, evolve_chain, CHAIN_DENSE_LIMIT};
pub use site::{gate_superop_tilde, ghz_site_terms, product_site_observable, single_superop_tilde, Mat2, Mat4, SiteBasis};
pub use state::{ReplicaBasis, ReplicaState};
pub use symmetric::{evolve_symmetric, initial_symmetric, permutation_layer, symmetric_lift, symmetric_log_z, LiftedMatrix, SymMatrix};
pub use tstar::t_star;

use crate::architectures::Architecture;
use crate::error::{Error, Result};

/// Largest N the symmetric engine accepts.
pub const SYMMETRIC_LIMIT: usize = 1024;

/// Lab states with an exact purity observable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RhoSpec {
    /// `⊗_j diag(cos²μ, sin²μ)`.
    Product { mu: f64 },
    Ghz,
}

impl RhoSpec {
    pub fn purity(&self, n: usize) -> f64 {
        match *self {
            RhoSpec::Product { mu } => site_purity(mu).powi(n as i32),
            RhoSpec::Ghz => 1.0,
        }
    }

    /// `Σ_b p(b)²` of the computational-basis distribution.
    fn collision(&self, n: usize) -> f64 {
        match *self {
            RhoSpec::Product { .. } => self.purity(n),
            RhoSpec::Ghz if n == 0 => 1.0,
            RhoSpec::Ghz => 0.5,
        }
    }
}

fn site_purity(mu: f64) -> f64 {
    let (c, s) = (mu.cos().powi(2), mu.sin().powi(2));
    c * c + s * s
}

/// One depth of an exact sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactRecord {
    pub n: usize,
    pub architecture: Architecture,
    pub t: usize,
    pub ln_z: f64,
    pub z: f64,
    pub avg_fidelity: f64,
    pub avg_purity: Option<f64>,
    pub log_scale: f64,
}

/// `ln(2^N (2^N + 1))`.
fn ln_dd1(n: usize) -> f64 {
    let ln_d = n as f64 * LN_2;
    2.0 * ln_d + (-ln_d).exp().ln_1p()
}

/// `E f̃ = 2^N (2^N + 1) Z − 1`, formed in log space.
pub fn fidelity_from_ln_z(n: usize, ln_z: f64) -> f64 {
    (ln_z + ln_dd1(n)).exp() - 1.0
}

enum Engine {
    Single,
    Chain,
    Symmetric,
}

fn engine(n: usize, arch: Architecture) -> Result<Engine> {
    if n == 0 {
        return Err(Error::InvalidGeometry("N must be positive".into()));
    }
    if n == 1 {
        return Ok(Engine::Single);
    }
    match arch {
        Architecture::Chain1d => {
            chain::check_chain(n)?;
            Ok(Engine::Chain)
        }
        Architecture::Alltoall => {
            if n % 2 == 1 {
                return Err(Error::Unsupported(format!("alltoall exact engine needs even N, got {n}")));
            }
            if n > SYMMETRIC_LIMIT {
                return Err(Error::SizeLimit(format!("symmetric engine stops at N = {SYMMETRIC_LIMIT}, got {n}")));
            }
            Ok(Engine::Symmetric)
        }
        Architecture::Grid2d => Err(Error::Unsupported("grid2d has no exact replica engine".into())),
    }
}

/// `ln(2^{2N}(2^N+1)²)`.
fn ln_purity_prefactor(n: usize) -> f64 {
    2.0 * ln_dd1(n)
}

/// Signed log-space accumulator.
#[derive(Default)]
struct LogSum {
    terms: Vec<(f64, f64)>,
}

impl LogSum {
    fn push(&mut self, sign: f64, ln_abs: f64) {
        if sign != 0.0 && ln_abs.is_finite() {
            self.terms.push((sign.signum(), ln_abs));
        }
    }

    fn push_value(&mut self, v: f64, ln_extra: f64) {
        if v != 0.0 {
            self.push(v.signum(), v.abs().ln() + ln_extra);
        }
    }

    fn value(&self) -> f64 {
        let mx = self.terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        if !mx.is_finite() {
            return 0.0;
        }
        self.terms.iter().map(|(s, l)| s * (l - mx).exp()).sum::<f64>() * mx.exp()
    }
}

/// Purity observable prepared once per sweep.
enum PurityObservable {
    Diagonal { l0: f64, l1: f64 },
    Terms(Vec<Mat2>),
}

impl PurityObservable {
    fn new(rho: RhoSpec) -> Self {
        match rho {
            RhoSpec::Product { mu } => {
                let a = product_site_observable(mu.cos().powi(2), mu.sin().powi(2));
                PurityObservable::Diagonal { l0: a[0][0], l1: a[1][1] }
            }
            RhoSpec::Ghz => PurityObservable::Terms(ghz_site_terms()),
        }
    }
}

enum SymObservable {
    Diagonal(Vec<f64>),
    Lifted(Vec<LiftedMatrix>),
}

/// `2^{-N} + 2^{2N}(2^N+1)² (ψ'ᵀOψ' + 2ψ₀(Oψ')₀)` on the chain.
fn chain_purity(state: &ReplicaState, obs: &PurityObservable) -> f64 {
    let n = state.n;
    let ln_pre = ln_purity_prefactor(n) + 2.0 * state.log_scale;
    let mut acc = LogSum::default();
    match obs {
        PurityObservable::Diagonal { l0, l1 } => acc.push_value(chain::chain_quadratic_diagonal(state, *l0, *l1), ln_pre),
        PurityObservable::Terms(terms) => {
            for a in terms {
                acc.push_value(chain::chain_quadratic_excluding_zero(state, a) / 4.0, ln_pre);
            }
        }
    }
    (-(n as f64) * LN_2).exp() + acc.value()
}

fn symmetric_purity(state: &ReplicaState, obs: &SymObservable) -> f64 {
    let n = state.n;
    let ln_pre = ln_purity_prefactor(n) + 2.0 * state.log_scale;
    let a = &state.amplitudes;
    let mut acc = LogSum::default();
    match obs {
        SymObservable::Diagonal(logs) => {
            for k in 1..=n {
                if a[k] != 0.0 {
                    acc.push(1.0, 2.0 * a[k].abs().ln() + logs[k] + ln_pre);
                }
            }
        }
        SymObservable::Lifted(lifts) => {
            for lift in lifts {
                let m = &lift.matrix;
                let mut q = 0.0;
                for r in 1..=n {
                    let row: f64 = (1..=n).map(|c| m.get(r, c) * a[c]).sum();
                    q += a[r] * row;
                }
                let cross: f64 = (1..=n).map(|c| m.get(0, c) * a[c]).sum();
                q += 2.0 * a[0] * cross;
                acc.push_value(q / 4.0, ln_pre + lift.log_scale);
            }
        }
    }
    (-(n as f64) * LN_2).exp() + acc.value()
}

fn sym_observable(n: usize, obs: &PurityObservable) -> SymObservable {
    match obs {
        PurityObservable::Diagonal { l0, l1 } => SymObservable::Diagonal(symmetric::diagonal_lift_logs(n, *l0, *l1)),
        PurityObservable::Terms(terms) => SymObservable::Lifted(terms.iter().map(|a| symmetric_lift(a, n)).collect()),
    }
}

/// Depth-0 values: no averaging has happened, so they come from the lab
/// state directly. `Z_0 = 1`; `E P̃_0 = (D+1)² Σ_b p(b)² − D − 2`.
fn depth_zero(n: usize, arch: Architecture, rho: Option<RhoSpec>) -> ExactRecord {
    let d = 2f64.powi(n as i32);
    ExactRecord {
        n,
        architecture: arch,
        t: 0,
        ln_z: 0.0,
        z: 1.0,
        avg_fidelity: d * (d + 1.0) - 1.0,
        avg_purity: rho.map(|r| (d + 1.0).powi(2) * r.collision(n) - d - 2.0),
        log_scale: 0.0,
    }
}

/// Exact `Z_t`, `E f̃` and (optionally) `E P̃` for `t = 0..=max_depth`.
///
/// Circuits are the `U†` ensemble of the shadow protocol; for the chain the
/// layer structures therefore appear in reverse order.
pub fn exact_sweep(n: usize, arch: Architecture, max_depth: usize, rho: Option<RhoSpec>) -> Result<Vec<ExactRecord>> {
    let kind = engine(n, arch)?;
    if let Some(RhoSpec::Product { mu }) = rho {
        if !mu.is_finite() {
            return Err(Error::Domain("product angle must be finite".into()));
        }
    }
    let obs = rho.map(PurityObservable::new);
    let mut out = Vec::with_capacity(max_depth + 1);
    out.push(depth_zero(n, arch, rho));
    let record = |t: usize, ln_z: f64, purity: Option<f64>, log_scale: f64| ExactRecord {
        n,
        architecture: arch,
        t,
        ln_z,
        z: ln_z.exp(),
        avg_fidelity: fidelity_from_ln_z(n, ln_z),
        avg_purity: purity,
        log_scale,
    };
    match kind {
        Engine::Single => {
            // The single-qubit twirl acts as the identity on the tilde pair,
            // so every depth t ≥ 1 sees the projected initial site.
            let s = initial_symmetric(1);
            let cs = ReplicaState {
                basis: ReplicaBasis::ChainTilde,
                ..s.clone()
            };
            let ln_z = symmetric_log_z(&s);
            let p = obs.as_ref().map(|o| chain_purity(&cs, o));
            for t in 1..=max_depth {
                out.push(record(t, ln_z, p, s.log_scale));
            }
        }
        Engine::Chain => {
            chain_sweep(n, max_depth, |t, s| {
                if t > 0 {
                    let p = obs.as_ref().map(|o| chain_purity(s, o));
                    out.push(record(t, chain_log_z(s), p, s.log_scale));
                }
            })?;
        }
        Engine::Symmetric => {
            let layer = permutation_layer(n)?;
            let sym_obs = obs.as_ref().map(|o| sym_observable(n, o));
            let init = initial_symmetric(n);
            let mut s = init.clone();
            for t in 1..=max_depth {
                symmetric::step(&layer, &mut s);
                let ln_z = s.log_dot(init.amplitudes.iter().copied()) + init.log_scale;
                let p = sym_obs.as_ref().map(|o| symmetric_purity(&s, o));
                out.push(record(t, ln_z, p, s.log_scale));
            }
        }
    }
    Ok(out)
}

/// `Z_t = E|⟨0|U|0⟩|⁴`.
pub fn collision_z(n: usize, arch: Architecture, depth: usize) -> Result<f64> {
    Ok(exact_sweep(n, arch, depth, None)?[depth].z)
}

/// `E f̃ = 2^N(2^N+1) Z_t − 1` for a product target.
pub fn avg_fidelity_exact(n: usize, arch: Architecture, depth: usize) -> Result<f64> {
    Ok(exact_sweep(n, arch, depth, None)?[depth].avg_fidelity)
}

/// Mean of the pairwise purity estimator.
pub fn avg_purity_exact(n: usize, arch: Architecture, depth: usize, rho: RhoSpec) -> Result<f64> {
    Ok(exact_sweep(n, arch, depth, Some(rho))?[depth].avg_purity.expect("purity requested"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::BoundParams;
    use crate::clifford::{prepare, StateSpec};
    use crate::oracle::{exhaustive_channel_average, replica_gate_average, DenseState, DensityMatrix, Ensemble, Functional};

    fn product_rho(n: usize, mu: f64) -> DensityMatrix {
        let mut rho = DenseState::zero(n).unwrap().to_density();
        rho.bit_flip(mu.sin().powi(2)).unwrap();
        rho
    }

    fn ghz_rho(n: usize) -> DensityMatrix {
        DenseState::from_tableau(&prepare(&StateSpec::Ghz, n).unwrap()).unwrap().to_density()
    }

    #[test]
    fn gate_matches_exhaustive_average() {
        let b = SiteBasis::new();
        let site: Vec<Vec<f64>> = b.tilde().iter().map(|v| v.to_vec()).collect();
        let avg = replica_gate_average(&site);
        let g = gate_superop_tilde();
        for r in 0..4 {
            for c in 0..4 {
                assert!((avg[r][c] - g[r][c]).abs() < 1e-12, "({r},{c}) {} vs {}", avg[r][c], g[r][c]);
            }
        }
    }

    #[test]
    fn two_site_layer_matches_exhaustive_average() {
        let b = SiteBasis::new();
        let site: Vec<Vec<f64>> = b.tilde().iter().map(|v| v.to_vec()).collect();
        let avg = replica_gate_average(&site);
        let w = [vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt(), 0.0], vec![0.0, 0.0, 0.0, 1.0]];
        let l = permutation_layer(2).unwrap();
        for m in 0..3 {
            for c in 0..3 {
                let want: f64 = (0..4).map(|i| (0..4).map(|j| w[m][i] * avg[i][j] * w[c][j]).sum::<f64>()).sum();
                assert!((l.get(m, c) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_qubit_values() {
        let r = exact_sweep(1, Architecture::Chain1d, 3, Some(RhoSpec::Product { mu: 0.4 })).unwrap();
        assert_eq!(r[0].z, 1.0);
        assert!((r[0].avg_fidelity - 5.0).abs() < 1e-12);
        for rec in &r[1..] {
            assert!((rec.z - 1.0 / 3.0).abs() < 1e-14);
            assert!((rec.avg_fidelity - 1.0).abs() < 1e-13);
            assert!((rec.avg_purity.unwrap() - site_purity(0.4)).abs() < 1e-13);
        }
    }

    #[test]
    fn two_qubits_match_exhaustive_oracle() {
        let mu = 0.3;
        let rp = product_rho(2, mu);
        let rg = ghz_rho(2);
        let target = DenseState::zero(2).unwrap();
        for arch in [Architecture::Chain1d, Architecture::Alltoall] {
            let prod = exact_sweep(2, arch, 3, Some(RhoSpec::Product { mu })).unwrap();
            let ghz = exact_sweep(2, arch, 3, Some(RhoSpec::Ghz)).unwrap();
            for t in 0..=3 {
                let ens = Ensemble::Circuit { architecture: arch, depth: t };
                let z = exhaustive_channel_average(2, ens, &Functional::CollisionZ).unwrap();
                let f = exhaustive_channel_average(2, ens, &Functional::FidelityMean { rho: &target.to_density(), target: &target }).unwrap();
                let pp = exhaustive_channel_average(2, ens, &Functional::PurityMean { rho: &rp }).unwrap();
                let pg = exhaustive_channel_average(2, ens, &Functional::PurityMean { rho: &rg }).unwrap();
                assert!((prod[t].z - z).abs() < 1e-12, "{arch} t={t} Z {} vs {z}", prod[t].z);
                // At t = 0 the estimator mean is D, while the closed form
                // D(D+1)Z − 1 needs the output-Pauli invariance of t ≥ 1.
                if t > 0 {
                    assert!((prod[t].avg_fidelity - f).abs() < 1e-12);
                }
                assert!((prod[t].avg_purity.unwrap() - pp).abs() < 1e-12, "{arch} t={t} product purity {} vs {pp}", prod[t].avg_purity.unwrap());
                assert!((ghz[t].avg_purity.unwrap() - pg).abs() < 1e-12, "{arch} t={t} ghz purity {} vs {pg}", ghz[t].avg_purity.unwrap());
            }
        }
    }

    #[test]
    fn deep_limits() {
        let r = exact_sweep(8, Architecture::Chain1d, 200, Some(RhoSpec::Product { mu: 0.05 })).unwrap();
        let last = r.last().unwrap();
        let d = 256.0;
        assert!((last.z - 2.0 / (d * (d + 1.0))).abs() < 1e-10);
        assert!((last.avg_purity.unwrap() - RhoSpec::Product { mu: 0.05 }.purity(8)).abs() < 1e-6);
        for n in [2, 4, 6, 8, 10] {
            let g = exact_sweep(n, Architecture::Chain1d, 150, Some(RhoSpec::Ghz)).unwrap();
            assert!((g.last().unwrap().avg_purity.unwrap() - 1.0).abs() < 1e-6, "N={n}");
            let a = exact_sweep(n, Architecture::Alltoall, 150, Some(RhoSpec::Ghz)).unwrap();
            assert!((a.last().unwrap().avg_purity.unwrap() - 1.0).abs() < 1e-6, "N={n}");
        }
        let a = exact_sweep(64, Architecture::Alltoall, 300, Some(RhoSpec::Product { mu: 0.05 })).unwrap();
        let want = RhoSpec::Product { mu: 0.05 }.purity(64);
        assert!((a.last().unwrap().avg_purity.unwrap() / want - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sandwich_holds_for_small_chains() {
        for n in [2, 4, 6, 8] {
            let p = BoundParams::chain1d(n);
            let d = (1u64 << n) as f64;
            for rec in exact_sweep(n, Architecture::Chain1d, 40, None).unwrap().iter().skip(1) {
                let x = d * (d + 1.0) * rec.z;
                assert!(x >= 2.0 - 1e-9 && x <= p.sandwich_upper(rec.t as f64) + 1e-9, "N={n} t={}", rec.t);
                assert!(rec.avg_fidelity >= 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn symmetric_norm_and_large_n() {
        let s = initial_symmetric(12);
        let norm2: f64 = s.amplitudes.iter().map(|a| a * a).sum::<f64>() * (2.0 * s.log_scale).exp();
        assert!((norm2 - 3f64.powi(-12)).abs() < 1e-12 * 3f64.powi(-12));
        // Shallow means overflow f64 at this size; the tail must be finite
        // and converged.
        let mu = RhoSpec::Product { mu: 0.05 };
        let r = exact_sweep(1024, Architecture::Alltoall, 500, Some(mu)).unwrap();
        assert!(r[1..].iter().all(|x| x.ln_z.is_finite()));
        let last = r.last().unwrap();
        assert!((last.avg_purity.unwrap() / mu.purity(1024) - 1.0).abs() < 1e-3);
        assert!((last.avg_fidelity - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rescaled_and_unrescaled_agree() {
        let n = 6;
        let g = gate_superop_tilde();
        let mut raw: Vec<f64> = initial_chain_raw(n);
        let mut rd = ReplicaState {
            basis: ReplicaBasis::ChainTilde,
            n,
            amplitudes: raw.clone(),
            log_scale: 0.0,
        };
        for l in (0..5).rev() {
            for j in (l % 2..n - 1).step_by(2) {
                let s = 1usize << j;
                for base in 0..raw.len() {
                    if base & (3 * s) != 0 {
                        continue;
                    }
                    let id = [base, base + s, base + 2 * s, base + 3 * s];
                    let x = id.map(|i| raw[i]);
                    for (r, &i) in id.iter().enumerate() {
                        raw[i] = (0..4).map(|c| g[r][c] * x[c]).sum();
                    }
                }
            }
            chain::apply_layer(&mut rd, l);
        }
        for (a, b) in raw.iter().zip(&rd.amplitudes) {
            assert!((a - b * rd.log_scale.exp()).abs() < 1e-10);
        }
    }

    fn initial_chain_raw(n: usize) -> Vec<f64> {
        let s = chain::initial_chain(n);
        s.amplitudes.iter().map(|a| a * s.log_scale.exp()).collect()
    }

    #[test]
    fn unsupported_combinations() {
        assert!(exact_sweep(8, Architecture::Grid2d, 2, None).is_err());
        assert!(exact_sweep(7, Architecture::Alltoall, 2, None).is_err());
        assert!(exact_sweep(22, Architecture::Chain1d, 2, None).is_err());
    }
}
