//! Permutation-symmetric engine for all-to-all circuits: the averaged layer
//! preserves the `N + 1` states `|W_n⟩` (normalized symmetric sums with `n`
//! sites in `|1̃⟩`).

use std::f64::consts::LN_2;

use super::site::Mat2;
use super::state::{ReplicaBasis, ReplicaState};
use crate::error::{Error, Result};

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for k in 1..=n {
        t[k] = t[k - 1] + (k as f64).ln();
    }
    t
}

fn ln_binom(lf: &[f64], n: usize, k: usize) -> f64 {
    lf[n] - lf[k] - lf[n - k]
}

/// Dense `(N+1) × (N+1)` matrix, row-major, `entry(m, n) = ⟨W_m|L|W_n⟩`.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    pub size: usize,
    pub data: Vec<f64>,
}

impl SymMatrix {
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.data[m * self.size + n]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.size)
            .map(|m| self.data[m * self.size..(m + 1) * self.size].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Averaged all-to-all layer restricted to the symmetric subspace.
///
/// A perfect matching pairs the `N/2` bonds; a bond carrying two, one or no
/// `|1̃⟩` sites is counted by the multinomial over `(r, n−2r, N/2−n+r)`.
/// Terms are all positive and combined by log-sum-exp.
pub fn permutation_layer(n: usize) -> Result<SymMatrix> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::Unsupported(format!("permutation layer needs even N, got {n}")));
    }
    let lf = ln_factorials(n);
    let half = n / 2;
    let (ln2, ln3, ln15) = (LN_2, 3f64.ln(), 15f64.ln());
    let size = n + 1;
    let mut data = vec![0.0; size * size];
    let mut terms = Vec::with_capacity(half + 1);
    for col in 0..=n {
        for row in 0..=n {
            terms.clear();
            // r bonds hold two excitations, col − 2r hold one, the rest none;
            // k = row − col + r of the col − r touched bonds end doubly excited.
            let lo = col.saturating_sub(row).max(col.saturating_sub(half));
            let hi = col / 2;
            for r in lo..=hi {
                if row + r < col {
                    continue;
                }
                let k = row + r - col;
                let touched = col - r;
                if k > touched || half + r < col {
                    continue;
                }
                let multinom = lf[half] - lf[r] - lf[col - 2 * r] - lf[half + r - col];
                let c = (2 * touched) as f64 * ln2 - row as f64 * ln2 - touched as f64 * ln15 + ln_binom(&lf, touched, k);
                terms.push(multinom + (col - 2 * r) as f64 * ln2 + c);
            }
            if terms.is_empty() {
                continue;
            }
            let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let s: f64 = terms.iter().map(|t| (t - mx).exp()).sum();
            let pre = (row + col) as f64 / 2.0 * ln3 - ln_binom(&lf, n, col)
                + 0.5 * (lf[row] + lf[n - row] - lf[col] - lf[n - col]);
            data[row * size + col] = (pre + mx + s.ln()).exp();
        }
    }
    Ok(SymMatrix { size, data })
}

/// `ln ⟨W_n| (1, 1/√3)^{⊗N}/2^N ⟩ = −N ln 2 − (n/2) ln 3 + ½ ln C(N, n)`.
fn ln_initial(n_sites: usize, lf: &[f64], n: usize) -> f64 {
    -(n_sites as f64) * LN_2 - n as f64 / 2.0 * 3f64.ln() + 0.5 * ln_binom(lf, n_sites, n)
}

/// Projected `|0^{⊗4}⟩⟩` in the W basis.
pub fn initial_symmetric(n: usize) -> ReplicaState {
    let lf = ln_factorials(n);
    let logs: Vec<f64> = (0..=n).map(|k| ln_initial(n, &lf, k)).collect();
    let mx = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut s = ReplicaState {
        basis: ReplicaBasis::SymmetricW,
        n,
        amplitudes: logs.iter().map(|l| (l - mx).exp()).collect(),
        log_scale: mx,
    };
    s.renormalize();
    s
}

pub fn evolve_symmetric(n: usize, depth: usize) -> Result<ReplicaState> {
    let layer = permutation_layer(n)?;
    let mut s = initial_symmetric(n);
    for _ in 0..depth {
        step(&layer, &mut s);
    }
    Ok(s)
}

pub(crate) fn step(layer: &SymMatrix, s: &mut ReplicaState) {
    s.amplitudes = layer.apply(&s.amplitudes);
    s.renormalize();
}

/// `ln Z = ln ⟨init|state⟩`.
pub fn symmetric_log_z(state: &ReplicaState) -> f64 {
    let init = initial_symmetric(state.n);
    state.log_dot(init.amplitudes.iter().copied()) + init.log_scale
}

/// `A^{⊗N}` restricted to the W basis, as `exp(log_scale) · matrix`.
#[derive(Clone, Debug)]
pub struct LiftedMatrix {
    pub log_scale: f64,
    pub matrix: SymMatrix,
}

fn signed_ln_pow(a: f64, e: usize) -> (f64, f64) {
    if e == 0 {
        return (1.0, 0.0);
    }
    if a == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    let sign = if a < 0.0 && e % 2 == 1 { -1.0 } else { 1.0 };
    (sign, e as f64 * a.abs().ln())
}

/// `⟨W_m|A^{⊗N}|W_n⟩ = sqrt(C(N,m)/C(N,n)) Σ_k C(m,k) C(N−m, n−k)
/// a₁₁^k a₁₀^{m−k} a₀₁^{n−k} a₀₀^{N−m−n+k}`, summed with signs in log space.
pub fn symmetric_lift(site: &Mat2, n: usize) -> LiftedMatrix {
    let lf = ln_factorials(n);
    let size = n + 1;
    let mut signs = vec![0.0; size * size];
    let mut logs = vec![f64::NEG_INFINITY; size * size];
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(size);
    for m in 0..=n {
        for col in 0..=n {
            terms.clear();
            let k_lo = (m + col).saturating_sub(n);
            for k in k_lo..=m.min(col) {
                let parts = [
                    signed_ln_pow(site[1][1], k),
                    signed_ln_pow(site[1][0], m - k),
                    signed_ln_pow(site[0][1], col - k),
                    signed_ln_pow(site[0][0], n + k - m - col),
                ];
                let sign: f64 = parts.iter().map(|p| p.0).product();
                if sign == 0.0 {
                    continue;
                }
                let l = parts.iter().map(|p| p.1).sum::<f64>() + ln_binom(&lf, m, k) + ln_binom(&lf, n - m, col - k);
                terms.push((sign, l));
            }
            if terms.is_empty() {
                continue;
            }
            let mx = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
            let s: f64 = terms.iter().map(|(sg, l)| sg * (l - mx).exp()).sum();
            if s == 0.0 {
                continue;
            }
            let pre = 0.5 * (ln_binom(&lf, n, m) - ln_binom(&lf, n, col));
            signs[m * size + col] = s.signum();
            logs[m * size + col] = pre + mx + s.abs().ln();
        }
    }
    let scale = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = if scale.is_finite() { scale } else { 0.0 };
    let data = signs.iter().zip(&logs).map(|(s, l)| s * (l - scale).exp()).collect();
    LiftedMatrix {
        log_scale: scale,
        matrix: SymMatrix { size, data },
    }
}

/// `ln` of the diagonal lift `λ₀^{N−n} λ₁^n` for a diagonal site matrix.
pub(crate) fn diagonal_lift_logs(n: usize, l0: f64, l1: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let (s0, a) = signed_ln_pow(l0, n - k);
            let (s1, b) = signed_ln_pow(l1, k);
            if s0 * s1 <= 0.0 {
                f64::NEG_INFINITY
            } else {
                a + b
            }
        })
        .collect()
}
