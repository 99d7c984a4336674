//! One site of the four-replica chain.
//!
//! Replica index `r1 + 2 r2 + 4 r3 + 8 r4`; replicas 1 and 3 carry `U`,
//! replicas 2 and 4 carry `U*`. After one gate average every site lives in
//! `span{|I⁺⟩, |I⁻⟩}` with `|I⁺⟩ = Σ|aabb⟩` and `|I⁻⟩ = Σ|abba⟩`.

pub type Mat2 = [[f64; 2]; 2];
pub type Mat4 = [[f64; 4]; 4];

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn idx(r1: usize, r2: usize, r3: usize, r4: usize) -> usize {
    r1 | r2 << 1 | r3 << 2 | r4 << 3
}

/// Explicit 16-dimensional vectors of the site space.
#[derive(Clone, Debug)]
pub struct SiteBasis {
    pub i_plus: [f64; 16],
    pub i_minus: [f64; 16],
    /// `|0̃⟩ = |I⁺⟩/2`.
    pub tilde0: [f64; 16],
    /// `|1̃⟩ = (|I⁻⟩ − |I⁺⟩/2)/√3`.
    pub tilde1: [f64; 16],
}

impl Default for SiteBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl SiteBasis {
    pub fn new() -> Self {
        let mut i_plus = [0.0; 16];
        let mut i_minus = [0.0; 16];
        for a in 0..2 {
            for b in 0..2 {
                i_plus[idx(a, a, b, b)] += 1.0;
                i_minus[idx(a, b, b, a)] += 1.0;
            }
        }
        let mut tilde0 = [0.0; 16];
        let mut tilde1 = [0.0; 16];
        for i in 0..16 {
            tilde0[i] = i_plus[i] / 2.0;
            tilde1[i] = (i_minus[i] - i_plus[i] / 2.0) / SQRT3;
        }
        SiteBasis {
            i_plus,
            i_minus,
            tilde0,
            tilde1,
        }
    }

    pub fn tilde(&self) -> [[f64; 16]; 2] {
        [self.tilde0, self.tilde1]
    }

    /// `⟨t_a| (|v⟩⟨w| ⊗ I₃₄) |t_b⟩` for two vectors `v, w` on replicas 1, 2
    /// (index `r1 + 2 r2`).
    pub fn project_12(&self, v: &[f64; 4], w: &[f64; 4]) -> Mat2 {
        let t = self.tilde();
        // f_t(r3, r4) = Σ_{r1 r2} v[r1 r2] t[r1 r2 r3 r4].
        let contract = |vec: &[f64; 4], tv: &[f64; 16]| -> [f64; 4] {
            let mut f = [0.0; 4];
            for (r34, slot) in f.iter_mut().enumerate() {
                for r12 in 0..4 {
                    *slot += vec[r12] * tv[r12 | r34 << 2];
                }
            }
            f
        };
        let mut m = [[0.0; 2]; 2];
        for a in 0..2 {
            let fa = contract(v, &t[a]);
            for b in 0..2 {
                let fb = contract(w, &t[b]);
                m[a][b] = fa.iter().zip(&fb).map(|(x, y)| x * y).sum();
            }
        }
        m
    }
}

pub fn dot16(a: &[f64; 16], b: &[f64; 16]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Amplitudes `(1/2, 1/(2√3))` of the projected site state `|0000⟩`.
pub const INITIAL_SITE: [f64; 2] = [0.5, 0.5 / SQRT3];

/// Averaged two-site gate in the tilde basis, local index `a_j + 2 a_k`:
/// `(1/15)[u uᵀ + w wᵀ − ¼(u wᵀ + w uᵀ)]` with `u = |I⁺I⁺⟩`, `w = |I⁻I⁻⟩`.
pub fn gate_superop_tilde() -> Mat4 {
    let u = [4.0, 0.0, 0.0, 0.0];
    let w = [1.0, SQRT3, SQRT3, 3.0];
    let mut g = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] = (u[i] * u[j] + w[i] * w[j] - 0.25 * (u[i] * w[j] + w[i] * u[j])) / 15.0;
        }
    }
    g
}

/// Single-qubit analogue for one-site circuits:
/// `(1/3)[u uᵀ + w wᵀ − ½(u wᵀ + w uᵀ)]`, `u = (2, 0)`, `w = (1, √3)`.
pub fn single_superop_tilde() -> Mat2 {
    let u = [2.0, 0.0];
    let w = [1.0, SQRT3];
    let mut g = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = (u[i] * u[j] + w[i] * w[j] - 0.5 * (u[i] * w[j] + w[i] * u[j])) / 3.0;
        }
    }
    g
}

/// Site observable `|ρ⟩⟩⟨⟨ρ| ⊗ I` for a diagonal single-qubit state
/// `diag(p0, p1)`, built from the explicit site vectors.
pub fn product_site_observable(p0: f64, p1: f64) -> Mat2 {
    let v = [p0, 0.0, 0.0, p1];
    SiteBasis::new().project_12(&v, &v)
}

/// The 16 site-uniform terms of `|ρ⟩⟩⟨⟨ρ| ⊗ I` for GHZ; the full
/// observable is `¼ Σ ⊗_j A`, one `A` per pair `(ab, cd)`.
pub fn ghz_site_terms() -> Vec<Mat2> {
    let basis = SiteBasis::new();
    let v = |a: usize, b: usize| {
        let mut e = [0.0; 4];
        e[a | b << 1] = 1.0;
        e
    };
    let mut out = Vec::with_capacity(16);
    for ab in 0..4 {
        for cd in 0..4 {
            out.push(basis.project_12(&v(ab & 1, ab >> 1), &v(cd & 1, cd >> 1)));
        }
    }
    out
}
