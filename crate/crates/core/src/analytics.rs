//! Closed-form bounds, variances and reference values.

use crate::error::{Error, Result};

/// `2^N` as a float.
pub fn dim(n: usize) -> f64 {
    2f64.powi(n as i32)
}

/// Decay rate `a` and anticoncentration depth `T_N` of the bound
/// `2^N(2^N+1)Z_t ≤ 2 + 2e^{-a(t − T_N)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    pub a: f64,
    pub t_n: f64,
}

impl BoundParams {
    /// Brickwork chain values: `a = ln(5/4)`, `T_N = [ln N + ln(e−1)]/a + 1`.
    pub fn chain1d(n: usize) -> Self {
        let a = (1.25f64).ln();
        BoundParams {
            a,
            t_n: ((n as f64).ln() + (std::f64::consts::E - 1.0).ln()) / a + 1.0,
        }
    }

    pub fn new(a: f64, t_n: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("decay rate must be positive, got {a}")));
        }
        Ok(BoundParams { a, t_n })
    }

    /// Upper edge `2 + 2e^{-a(t − T_N)}` of the collision sandwich.
    pub fn sandwich_upper(&self, t: f64) -> f64 {
        2.0 + 2.0 * (-self.a * (t - self.t_n)).exp()
    }

    /// Depth after which the fidelity bias is at most `δ`: `T_N + ln(2/δ)/a`.
    pub fn depth_for(&self, delta: f64) -> Result<f64> {
        check_delta(delta)?;
        Ok(self.t_n + (2.0 / delta).ln() / self.a)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// `g(N, δ) = ln(N/δ)/ln(5/4) + ln(2(e−1))/ln(5/4) + 1`.
pub fn g_bound(n: usize, delta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("g_bound needs N >= 2, got {n}")));
    }
    check_delta(delta)?;
    let a = (1.25f64).ln();
    Ok((n as f64 / delta).ln() / a + (2.0 * (std::f64::consts::E - 1.0)).ln() / a + 1.0)
}

/// Smallest collision probability any ensemble reaches, `2/(2^N(2^N+1))`.
pub fn collision_floor(n: usize) -> f64 {
    let d = dim(n);
    2.0 / (d * (d + 1.0))
}

/// Locally scrambled shadow norm `(2^N+1)²(Z_t − 4^{-N})`.
pub fn ls_shadow_norm(z: f64, n: usize) -> Result<f64> {
    let floor = collision_floor(n);
    let tol = 1e-12 * floor.max(1e-300);
    if !(z >= floor - tol && z <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("collision probability {z} outside [{floor}, 1]")));
    }
    let d = dim(n);
    Ok((d + 1.0).powi(2) * (z - 1.0 / (d * d)))
}

/// Single-realization variance of the fidelity estimator at infinite depth for
/// a pure lab state equal to the target: `(1/M)·2(2^N−1)/(2^N+2)`.
pub fn fidelity_var_inf(n: usize, m: usize) -> f64 {
    let d = dim(n);
    2.0 * (d - 1.0) / (d + 2.0) / m as f64
}

/// Infinite-depth fidelity variance for a mixed lab state with fidelity `f`.
pub fn fidelity_var_inf_mixed(n: usize, m: usize, f: f64) -> f64 {
    let d = dim(n);
    ((d + 1.0) * (2.0 + 4.0 * f) / (d + 2.0) - 1.0 - 2.0 * f - f * f) / m as f64
}

fn check_purity_args(p2: f64, p3: f64, m: usize) -> Result<()> {
    if !(p2 > 0.0 && p2 <= 1.0 + 1e-12) || !(p3 > 0.0 && p3 <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("purity moments ({p2}, {p3}) outside (0, 1]")));
    }
    if m < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: m });
    }
    Ok(())
}

/// Exact variance of the `M`-snapshot purity estimator under global Cliffords,
/// given `P2 = Tr ρ²` and `P3 = Tr ρ³`.
pub fn purity_var_inf(n: usize, m: usize, p2: f64, p3: f64) -> Result<f64> {
    check_purity_args(p2, p3, m)?;
    let d = dim(n);
    let mf = m as f64;
    let pair = 2.0 * (d + 1.0).powi(2) * (d + 3.0 + 2.0 * p2) / (d + 2.0) - (d + 2.0 + p2).powi(2);
    let cross = (d + 1.0) / (d + 2.0) * (1.0 + 3.0 * p2 + 2.0 * p3) - (1.0 + p2).powi(2);
    Ok((pair + 2.0 * (mf - 2.0) * cross) / (mf * (mf - 1.0) / 2.0))
}

/// Large-`N` form `2·2^{2N}/(M(M−1))` of [`purity_var_inf`].
pub fn purity_var_asymptote(n: usize, m: usize) -> f64 {
    let mf = m as f64;
    2.0 * dim(n).powi(2) / (mf * (mf - 1.0))
}

/// Upper bound on the purity variance at infinite depth:
/// `12P/M + 2·9·2^{2N}/(M−1)²`.
pub fn purity_var_bound_inf(n: usize, m: usize, p2: f64) -> f64 {
    let mf = m as f64;
    12.0 * p2 / mf + 18.0 * dim(n).powi(2) / (mf - 1.0).powi(2)
}

/// Upper bound on the purity variance for local random measurements:
/// `4·2^N P/M + 2(2^{2N}/(M−1))²`.
pub fn purity_var_bound_local(n: usize, m: usize, p2: f64) -> f64 {
    let mf = m as f64;
    4.0 * dim(n) * p2 / mf + 2.0 * (dim(n).powi(2) / (mf - 1.0)).powi(2)
}

/// Infinite-depth variance of the Pauli estimator: `(2^N + 1 − ⟨P⟩²)/M`.
pub fn pauli_var_inf(n: usize, m: usize, expval: f64) -> Result<f64> {
    if expval.abs() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("Pauli expectation {expval} outside [-1, 1]")));
    }
    Ok((dim(n) + 1.0 - expval * expval) / m as f64)
}

/// Reference values for the lab states used throughout.
pub mod reference {
    /// `Tr ρ²` for `⊗_j (cos²μ|0⟩⟨0| + sin²μ|1⟩⟨1|)`.
    pub fn product_purity(n: usize, mu: f64) -> f64 {
        let (c, s) = (mu.cos().powi(2), mu.sin().powi(2));
        (c * c + s * s).powi(n as i32)
    }

    /// `Tr ρ³` for the same product state.
    pub fn product_trace_cube(n: usize, mu: f64) -> f64 {
        let (c, s) = (mu.cos().powi(2), mu.sin().powi(2));
        (c.powi(3) + s.powi(3)).powi(n as i32)
    }

    /// Fidelity of locally depolarized GHZ with the ideal GHZ state.
    pub fn ghz_depolarized_fidelity(n: usize, p: f64) -> f64 {
        let ni = n as i32;
        ((1.0 - p / 2.0).powi(ni) + (1.0 - p).powi(ni) + (p / 2.0).powi(ni)) / 2.0
    }

    /// Purity of locally depolarized GHZ.
    pub fn ghz_depolarized_purity(n: usize, p: f64) -> f64 {
        let q = (1.0 - p).powi(2);
        let ni = n as i32;
        2f64.powi(-ni) * (((1.0 + q).powi(ni) + (1.0 - q).powi(ni)) / 2.0 + 2f64.powi(ni - 1) * q.powi(ni))
    }

    /// `⟨X^{⊗N}⟩` of locally depolarized GHZ.
    pub fn ghz_depolarized_x_parity(n: usize, p: f64) -> f64 {
        (1.0 - p).powi(n as i32)
    }

    /// `⟨Z_1 Z_2⟩` of locally depolarized GHZ.
    pub fn ghz_depolarized_zz(p: f64) -> f64 {
        (1.0 - p).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_bound_values() {
        assert!((g_bound(16, 0.05).unwrap() - 32.38).abs() < 0.01);
        let step = 2f64.ln() / 1.25f64.ln();
        assert!((g_bound(16, 0.05).unwrap() - g_bound(16, 0.1).unwrap() - step).abs() < 1e-12);
        assert!((g_bound(32, 0.1).unwrap() - g_bound(16, 0.1).unwrap() - step).abs() < 1e-12);
        assert!(g_bound(1, 0.1).is_err() && g_bound(4, 1.0).is_err());
    }

    #[test]
    fn g_bound_matches_depth_for() {
        for n in [4, 8, 16] {
            let b = BoundParams::chain1d(n);
            assert!((b.depth_for(0.05).unwrap() - g_bound(n, 0.05).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn shadow_norm() {
        assert!((ls_shadow_norm(1.0 / 3.0, 1).unwrap() - 0.75).abs() < 1e-12);
        assert!(ls_shadow_norm(0.01, 1).is_err());
        let n = 20;
        // At the floor the norm is 1 − 4^{-N}, below the bound 2.
        let v = ls_shadow_norm(collision_floor(n), n).unwrap();
        assert!(v < 2.0 && (v - (1.0 - 4f64.powi(-(n as i32)))).abs() < 1e-9);
    }

    #[test]
    fn variance_formulas() {
        assert!((fidelity_var_inf(1, 1) - 0.5).abs() < 1e-12);
        assert!((fidelity_var_inf(60, 1) - 2.0).abs() < 1e-12);
        assert!((fidelity_var_inf_mixed(3, 1, 1.0) - fidelity_var_inf(3, 1)).abs() < 1e-12);
        assert!((purity_var_inf(1, 2, 1.0, 1.0).unwrap() - 6.5).abs() < 1e-12);
        assert!((pauli_var_inf(2, 1, 1.0).unwrap() - 4.0).abs() < 1e-12);
        assert!((pauli_var_inf(2, 4, 0.0).unwrap() - pauli_var_inf(2, 4, 1.0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn purity_variance_bound_and_asymptote() {
        for n in 1..=10 {
            for m in [2, 50] {
                assert!(purity_var_inf(n, m, 1.0, 1.0).unwrap() <= purity_var_bound_inf(n, m, 1.0));
            }
            if n > 1 {
                assert!(purity_var_inf(n, 50, 1.0, 1.0).unwrap() > purity_var_inf(n - 1, 50, 1.0, 1.0).unwrap());
            }
        }
        let r = purity_var_inf(10, 50, 1.0, 1.0).unwrap() / purity_var_asymptote(10, 50);
        assert!((r - 1.0).abs() < 0.05, "{r}");
    }

    #[test]
    fn reference_states() {
        assert!((reference::product_purity(8, 0.05) - 0.96081).abs() < 2e-5);
        assert!((reference::ghz_depolarized_fidelity(3, 0.0) - 1.0).abs() < 1e-15);
        assert!((reference::ghz_depolarized_purity(3, 0.0) - 1.0).abs() < 1e-15);
        assert!((reference::ghz_depolarized_purity(2, 1.0) - 0.25).abs() < 1e-15);
    }
}
