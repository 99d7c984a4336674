use std::f64::consts::LN_2;

/// Which effective basis the amplitudes refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReplicaBasis {
    /// `2^N` product amplitudes over `{|0̃⟩, |1̃⟩}` per site.
    ChainTilde,
    /// `N + 1` amplitudes over the symmetric states `|W_n⟩`.
    SymmetricW,
}

/// Replica amplitudes times `exp(log_scale)`.
#[derive(Clone, Debug)]
pub struct ReplicaState {
    pub basis: ReplicaBasis,
    pub n: usize,
    pub amplitudes: Vec<f64>,
    pub log_scale: f64,
}

impl ReplicaState {
    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().fold(0.0f64, |m, a| m.max(a.abs()))
    }

    /// Rescales by a power of two so the largest amplitude lies in `[1, 2)`.
    /// Power-of-two factors keep the mantissas, so the rescaling is exact.
    pub fn renormalize(&mut self) {
        let m = self.max_abs();
        if m == 0.0 || !m.is_finite() {
            return;
        }
        let k = m.log2().floor() as i32;
        if k == 0 {
            return;
        }
        let f = 2f64.powi(-k);
        self.amplitudes.iter_mut().for_each(|a| *a *= f);
        self.log_scale += k as f64 * LN_2;
    }

    /// `ln ⟨v|self⟩` for a nonnegative-overlap boundary `v` given unscaled.
    pub(crate) fn log_dot(&self, boundary: impl Iterator<Item = f64>) -> f64 {
        let s: f64 = self.amplitudes.iter().zip(boundary).map(|(a, b)| a * b).sum();
        s.ln() + self.log_scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renormalize_tracks_scale_exactly() {
        let mut s = ReplicaState {
            basis: ReplicaBasis::SymmetricW,
            n: 2,
            amplitudes: vec![1e-30, -3e-31, 0.0],
            log_scale: 0.0,
        };
        let before: Vec<f64> = s.amplitudes.clone();
        s.renormalize();
        assert!((0.5..=2.0).contains(&s.max_abs()));
        for (a, b) in s.amplitudes.iter().zip(&before) {
            assert!((a * s.log_scale.exp() - b).abs() <= 1e-14 * b.abs());
        }
    }
}
