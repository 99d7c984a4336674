//! Dense replica propagator for the open brickwork chain.

use super::site::{Mat2, INITIAL_SITE};
use super::state::{ReplicaBasis, ReplicaState};
use crate::error::{Error, Result};

/// Largest chain the dense engine accepts.
pub const CHAIN_DENSE_LIMIT: usize = 20;

const SQRT3: f64 = 1.732_050_807_568_877_2;

pub(crate) fn check_chain(n: usize) -> Result<()> {
    if n > CHAIN_DENSE_LIMIT {
        return Err(Error::SizeLimit(format!("dense chain engine stops at N = {CHAIN_DENSE_LIMIT}, got {n}")));
    }
    if n < 2 || n % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "dense chain engine needs even N >= 2 so the first layer touches every site, got {n}"
        )));
    }
    Ok(())
}

/// `(1, 1/√3)^{⊗N}` with `log_scale = −N ln 2`.
pub fn initial_chain(n: usize) -> ReplicaState {
    let ratio = INITIAL_SITE[1] / INITIAL_SITE[0];
    let amplitudes = (0..1usize << n).map(|x| ratio.powi(x.count_ones() as i32)).collect();
    ReplicaState {
        basis: ReplicaBasis::ChainTilde,
        n,
        amplitudes,
        log_scale: n as f64 * INITIAL_SITE[0].ln(),
    }
}

/// Averaged gate on bond `(j, j+1)`. In the tilde basis it is
/// `|0̃0̃⟩⟨0̃0̃| + |ŵ⟩⟨ŵ|` with `ŵ = (0, √3, √3, 3)/√15`.
fn apply_bond(amps: &mut [f64], j: usize) {
    let s = 1usize << j;
    let block = 4 * s;
    for hi in (0..amps.len()).step_by(block) {
        for base in hi..hi + s {
            let (v1, v2, v3) = (amps[base + s], amps[base + 2 * s], amps[base + 3 * s]);
            let g = (SQRT3 * (v1 + v2) + 3.0 * v3) / 15.0;
            amps[base + s] = SQRT3 * g;
            amps[base + 2 * s] = SQRT3 * g;
            amps[base + 3 * s] = 3.0 * g;
        }
    }
}

/// Applies all bonds `(j, j+1)` with `j ≡ parity (mod 2)`.
pub fn apply_layer(state: &mut ReplicaState, parity: usize) {
    let n = state.n;
    for j in (parity % 2..n.saturating_sub(1)).step_by(2) {
        apply_bond(&mut state.amplitudes, j);
    }
    state.renormalize();
}

/// The averaged state for the inverse circuit ensemble: layer structures
/// are applied from the last (`depth − 1`) down to the first.
pub fn evolve_chain(n: usize, depth: usize) -> Result<ReplicaState> {
    check_chain(n)?;
    let mut s = initial_chain(n);
    for l in (0..depth).rev() {
        apply_layer(&mut s, l);
    }
    Ok(s)
}

fn weight_table(n: usize, base: f64) -> Vec<f64> {
    (0..=n).map(|k| base.powi(k as i32)).collect()
}

/// `ln Z` from `⟨init|state⟩`.
pub fn chain_log_z(state: &ReplicaState) -> f64 {
    let n = state.n;
    let w = weight_table(n, INITIAL_SITE[1] / INITIAL_SITE[0]);
    let s: f64 = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(x, a)| a * w[x.count_ones() as usize])
        .sum();
    s.ln() + state.log_scale + n as f64 * INITIAL_SITE[0].ln()
}

/// `ψ'ᵀ A^{⊗N} ψ' + 2 ψ₀ (A^{⊗N} ψ')₀` on the stored (unscaled) amplitudes,
/// where `ψ'` drops the conserved all-`0̃` entry.
pub(crate) fn chain_quadratic_excluding_zero(state: &ReplicaState, a: &Mat2) -> f64 {
    let n = state.n;
    let psi0 = state.amplitudes[0];
    let mut v = state.amplitudes.clone();
    v[0] = 0.0;
    let orig = v.clone();
    for q in 0..n {
        let s = 1usize << q;
        for hi in (0..v.len()).step_by(2 * s) {
            for i in hi..hi + s {
                let (x0, x1) = (v[i], v[i + s]);
                v[i] = a[0][0] * x0 + a[0][1] * x1;
                v[i + s] = a[1][0] * x0 + a[1][1] * x1;
            }
        }
    }
    let quad: f64 = orig.iter().zip(&v).map(|(x, y)| x * y).sum();
    quad + 2.0 * psi0 * v[0]
}

/// Same quantity for a diagonal site matrix `diag(l0, l1)`, in `O(2^N)`.
pub(crate) fn chain_quadratic_diagonal(state: &ReplicaState, l0: f64, l1: f64) -> f64 {
    let n = state.n;
    let mut w = vec![0.0; n + 1];
    for (k, slot) in w.iter_mut().enumerate() {
        *slot = l0.powi((n - k) as i32) * l1.powi(k as i32);
    }
    state
        .amplitudes
        .iter()
        .enumerate()
        .skip(1)
        .map(|(x, a)| a * a * w[x.count_ones() as usize])
        .sum()
}

/// Incremental sweep over depths `0..=max_depth`.
///
/// The state for depth `t` applies parities `(t−1) mod 2, …, 0` in time
/// order, so two chains (one starting on even bonds, one on odd) cover all
/// depths without restarting.
pub fn chain_sweep<F: FnMut(usize, &ReplicaState)>(n: usize, max_depth: usize, mut visit: F) -> Result<()> {
    check_chain(n)?;
    let init = initial_chain(n);
    visit(0, &init);
    let mut even_first = init.clone();
    let mut odd_first = init;
    for t in 1..=max_depth {
        apply_layer(&mut even_first, (t - 1) % 2);
        apply_layer(&mut odd_first, t % 2);
        if t % 2 == 1 {
            visit(t, &even_first);
        } else {
            visit(t, &odd_first);
        }
    }
    Ok(())
}
