use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Estimator realizations and their summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateSeries {
    pub values: Vec<f64>,
    /// Snapshots per realization.
    pub m: usize,
    pub r: usize,
    /// Bootstrap resamples.
    pub b: usize,
    pub mean: f64,
    /// `sqrt(S²/R)`.
    pub stderr: f64,
    /// `S² = Σ (x − mean)² / R`.
    pub sample_variance: f64,
    /// Standard deviation of `S²` over the bootstrap resamples.
    pub variance_err: f64,
}

fn mean_var(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (mut n, mut s) = (0usize, 0.0);
    for v in values.clone() {
        n += 1;
        s += v;
    }
    let mean = s / n as f64;
    let ss: f64 = values.map(|v| (v - mean).powi(2)).sum();
    (mean, ss / n as f64)
}

/// Mean, standard error, `S²`, and the bootstrap spread of `S²`.
/// The resampling stream is seeded from `bootstrap_seed`.
pub fn batch_statistics(values: Vec<f64>, m: usize, b: usize, bootstrap_seed: u64) -> Result<EstimateSeries> {
    let r = values.len();
    if r < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: r });
    }
    if b < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: b });
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite estimator value {bad}")));
    }
    let (mean, var) = mean_var(values.iter().copied());
    let mut rng = ChaCha8Rng::seed_from_u64(bootstrap_seed);
    let mut idx = vec![0usize; r];
    let boots: Vec<f64> = (0..b)
        .map(|_| {
            idx.iter_mut().for_each(|i| *i = rng.gen_range(0..r));
            mean_var(idx.iter().map(|&i| values[i])).1
        })
        .collect();
    let (_, boot_var) = mean_var(boots.iter().copied());
    // Sample standard deviation of the bootstrap variances.
    let variance_err = (boot_var * b as f64 / (b - 1) as f64).sqrt();
    Ok(EstimateSeries {
        m,
        r,
        b,
        mean,
        stderr: (var / r as f64).sqrt(),
        sample_variance: var,
        variance_err,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series() {
        let s = batch_statistics(vec![3.5; 40], 1, 50, 1).unwrap();
        assert_eq!(s.mean, 3.5);
        assert_eq!(s.sample_variance, 0.0);
        assert_eq!(s.variance_err, 0.0);
        assert_eq!(s.stderr, 0.0);
    }

    fn normals(r: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Box–Muller.
        (0..r)
            .map(|_| {
                let (u, v): (f64, f64) = (1.0 - rng.gen::<f64>(), rng.gen());
                (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
            })
            .collect()
    }

    #[test]
    fn standard_normals() {
        let s = batch_statistics(normals(10_000, 4), 1, 100, 2).unwrap();
        assert!(s.mean.abs() < 3.0 / 100.0);
        assert!((s.sample_variance - 1.0).abs() < 0.05);
        // Var(S²) ≈ 2/R for normals.
        assert!((s.variance_err / (2.0f64 / 10_000.0).sqrt() - 1.0).abs() < 0.3);
    }

    #[test]
    fn stderr_scaling() {
        let e: Vec<f64> = [100, 1000, 10_000].iter().map(|&r| batch_statistics(normals(r, r as u64), 1, 10, 0).unwrap().stderr).collect();
        for (k, w) in e.windows(2).enumerate() {
            let ratio = w[0] / w[1];
            assert!((ratio / 10f64.sqrt() - 1.0).abs() < 0.2, "step {k}: {ratio}");
        }
    }

    #[test]
    fn rejects_degenerate() {
        assert!(batch_statistics(vec![1.0], 1, 10, 0).is_err());
        assert!(batch_statistics(vec![1.0, 2.0], 1, 1, 0).is_err());
        assert!(batch_statistics(vec![1.0, f64::NAN], 1, 10, 0).is_err());
    }
}
