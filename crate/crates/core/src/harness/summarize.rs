use std::collections::BTreeMap;

use serde::Serialize;

use super::output::ResultRow;
use super::HarnessError;
use crate::analytics::{self, reference, BoundParams};
use crate::replica::t_star;

/// One `(group, δ)` line of a t* table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub architecture: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub estimator: String,
    pub state: String,
    pub noise_p: f64,
    pub mode: String,
    pub delta: f64,
    pub target: f64,
    /// `reference` for a closed-form value, `deepest` when the deepest
    /// listed mean stands in.
    pub target_source: String,
    pub t_star: Option<usize>,
    /// Chain fidelity rows only.
    pub g_bound: Option<f64>,
}

fn product_angle(state: &str) -> Option<f64> {
    state.strip_prefix("product(")?.strip_suffix(')')?.parse().ok()
}

/// Closed-form infinite-depth value for the states the harness prepares,
/// assuming the default fidelity target (the pure state behind the lab state).
pub fn reference_target(estimator: &str, state: &str, noise_p: f64, n: usize) -> Option<f64> {
    let p = noise_p;
    let diag_site = |mu: f64| {
        let c = (1.0 - p) * mu.cos().powi(2) + p / 2.0;
        (c, 1.0 - c)
    };
    let mu = if state == "zero" { Some(0.0) } else { product_angle(state) };
    match estimator {
        "fidelity" => match (state, mu) {
            ("ghz", _) => Some(reference::ghz_depolarized_fidelity(n, p)),
            (_, Some(mu)) => Some(diag_site(mu).0.powi(n as i32)),
            _ if p == 0.0 => Some(1.0),
            _ => None,
        },
        "purity" => match (state, mu) {
            ("ghz", _) => Some(reference::ghz_depolarized_purity(n, p)),
            (_, Some(mu)) => {
                let (c, s) = diag_site(mu);
                Some((c * c + s * s).powi(n as i32))
            }
            _ if p == 0.0 => Some(1.0),
            _ => None,
        },
        _ => None,
    }
}

type GroupKey = (String, usize, String, String, u64, String);

/// t* per `(architecture, N, estimator, state, noise, mode)` and δ.
/// Fidelity and Pauli deviations are absolute, purity deviations relative.
pub fn summarize_rows(rows: &[ResultRow], deltas: &[f64]) -> Result<Vec<SummaryRow>, HarnessError> {
    if deltas.is_empty() {
        return Err(HarnessError::Config("summarize needs at least one delta".into()));
    }
    let mut groups: BTreeMap<GroupKey, Vec<(usize, f64)>> = BTreeMap::new();
    for r in rows {
        let Some(t) = r.t else { continue };
        let key = (r.architecture.clone(), r.n, r.estimator.clone(), r.state.clone(), r.noise_p.to_bits(), r.mode.clone());
        groups.entry(key).or_default().push((t, r.mean));
    }
    let mut out = vec![];
    for ((architecture, n, estimator, state, noise_bits, mode), mut curve) in groups {
        curve.sort_by_key(|c| c.0);
        let noise_p = f64::from_bits(noise_bits);
        let (target, source) = match reference_target(&estimator, &state, noise_p, n) {
            Some(v) => (v, "reference"),
            None => (curve.last().expect("non-empty group").1, "deepest"),
        };
        let relative = estimator == "purity";
        for &delta in deltas {
            let ts = t_star(&curve, target, delta, relative).map_err(|e| HarnessError::Config(e.to_string()))?;
            let g_bound = if architecture == "chain1d" && estimator == "fidelity" {
                analytics::g_bound(n, delta).ok()
            } else {
                None
            };
            out.push(SummaryRow {
                architecture: architecture.clone(),
                n,
                estimator: estimator.clone(),
                state: state.clone(),
                noise_p,
                mode: mode.clone(),
                delta,
                target,
                target_source: source.into(),
                t_star: ts,
                g_bound,
            });
        }
    }
    Ok(out)
}

/// Chain anticoncentration curves.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub t: usize,
    pub collision_floor: f64,
    pub z_upper: f64,
    /// `2e^{-a(t − T_N)}`, the bound on `E f̃ − 1` above its floor.
    pub fidelity_bias_upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GBoundRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub delta: f64,
    pub g_bound: f64,
    pub depth_for: f64,
}

pub fn bounds_rows(n_list: &[usize], depths: &[usize], deltas: &[f64]) -> Result<(Vec<BoundRow>, Vec<GBoundRow>), HarnessError> {
    let mut curves = vec![];
    let mut table = vec![];
    for &n in n_list {
        let p = BoundParams::chain1d(n);
        let dd = analytics::dim(n) * (analytics::dim(n) + 1.0);
        for &t in depths {
            let up = p.sandwich_upper(t as f64);
            curves.push(BoundRow {
                n,
                t,
                collision_floor: analytics::collision_floor(n),
                z_upper: up / dd,
                fidelity_bias_upper: up - 2.0,
            });
        }
        for &delta in deltas {
            table.push(GBoundRow {
                n,
                delta,
                g_bound: analytics::g_bound(n, delta).map_err(|e| HarnessError::Config(e.to_string()))?,
                depth_for: p.depth_for(delta).map_err(|e| HarnessError::Config(e.to_string()))?,
            });
        }
    }
    Ok((curves, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: usize, mean: f64) -> ResultRow {
        ResultRow {
            architecture: "chain1d".into(),
            n: 4,
            t: Some(t),
            estimator: "fidelity".into(),
            state: "zero".into(),
            noise_p: 0.0,
            mode: "exact".into(),
            m: None,
            r: None,
            mean,
            stderr: None,
            sample_variance: None,
            variance_err: None,
            wall_time_s: None,
        }
    }

    #[test]
    fn constant_curve() {
        let rows: Vec<_> = (2..6).map(|t| row(t, 1.0)).collect();
        let s = summarize_rows(&rows, &[0.2, 0.05]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|r| r.t_star == Some(2) && r.target_source == "reference"));
        assert!(s[0].g_bound.unwrap() > 0.0);
    }

    #[test]
    fn references() {
        assert_eq!(reference_target("fidelity", "zero", 0.0, 5), Some(1.0));
        let p = reference_target("purity", "product(0.05)", 0.0, 8).unwrap();
        assert!((p - reference::product_purity(8, 0.05)).abs() < 1e-15);
        assert_eq!(reference_target("pauli", "ghz", 0.0, 4), None);
        assert_eq!(reference_target("purity", "cluster2d", 0.1, 4), None);
        let f = reference_target("fidelity", "ghz", 0.02, 6).unwrap();
        assert!((f - reference::ghz_depolarized_fidelity(6, 0.02)).abs() < 1e-15);
    }

    #[test]
    fn bounds_table() {
        let (c, g) = bounds_rows(&[8], &[0, 10], &[0.1]).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c[0].z_upper > c[1].z_upper && c[1].z_upper > c[1].collision_floor);
        assert!((g[0].g_bound - analytics::g_bound(8, 0.1).unwrap()).abs() < 1e-12);
    }
}
