//! The two-qubit Clifford group, enumerated once and indexed by
//! `(symplectic_index, phase_index)`.
//!
//! Every element is stored as its action on the 16 local Hermitian Paulis.
//! Entry `p` of a [`LocalMap`] has `x0 | z0<<1 | x1<<2 | z1<<3` on input; the
//! output holds the image in the low four bits and a sign flip in bit 4.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;

/// Number of two-qubit Clifford classes modulo global phase.
pub const TWO_QUBIT_CLIFFORDS: usize = 11_520;
/// Number of single-qubit Clifford classes modulo global phase.
pub const ONE_QUBIT_CLIFFORDS: usize = 24;

pub type LocalMap = [u8; 16];
pub type Matrix4 = [[Complex64; 4]; 4];
pub type Matrix2 = [[Complex64; 2]; 2];

/// Generators used to build the group and its dense matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    H0,
    H1,
    S0,
    S1,
    /// Control on the first qubit of the pair.
    Cx01,
}

const GENERATORS: [Elementary; 5] = [
    Elementary::H0,
    Elementary::H1,
    Elementary::S0,
    Elementary::S1,
    Elementary::Cx01,
];

fn elementary_map(g: Elementary) -> LocalMap {
    let mut m = [0u8; 16];
    for (p, slot) in m.iter_mut().enumerate() {
        let p = p as u8;
        let (mut x0, mut z0, mut x1, mut z1) = (p & 1, (p >> 1) & 1, (p >> 2) & 1, (p >> 3) & 1);
        let flip = match g {
            Elementary::H0 => {
                std::mem::swap(&mut x0, &mut z0);
                x0 & z0
            }
            Elementary::H1 => {
                std::mem::swap(&mut x1, &mut z1);
                x1 & z1
            }
            Elementary::S0 => {
                let f = x0 & z0;
                z0 ^= x0;
                f
            }
            Elementary::S1 => {
                let f = x1 & z1;
                z1 ^= x1;
                f
            }
            Elementary::Cx01 => {
                let f = x0 & z1 & (x1 ^ z0 ^ 1);
                x1 ^= x0;
                z0 ^= z1;
                f
            }
        };
        *slot = x0 | (z0 << 1) | (x1 << 2) | (z1 << 3) | (flip << 4);
    }
    m
}

/// `after ∘ first`.
fn compose(after: &LocalMap, first: &LocalMap) -> LocalMap {
    let mut out = [0u8; 16];
    for p in 0..16 {
        let a = first[p];
        let b = after[(a & 15) as usize];
        out[p] = (b & 15) | ((a ^ b) & 16);
    }
    out
}

const IDENTITY_MAP: LocalMap = {
    let mut m = [0u8; 16];
    let mut p = 0;
    while p < 16 {
        m[p] = p as u8;
        p += 1;
    }
    m
};

fn map_key(m: &LocalMap) -> u32 {
    m[1] as u32 | (m[2] as u32) << 5 | (m[4] as u32) << 10 | (m[8] as u32) << 15
}

fn symplectic_key(m: &LocalMap) -> u16 {
    (m[1] & 15) as u16 | ((m[2] & 15) as u16) << 4 | ((m[4] & 15) as u16) << 8 | ((m[8] & 15) as u16) << 12
}

fn phase_bits(m: &LocalMap) -> u8 {
    (m[1] >> 4) | ((m[2] >> 4) << 1) | ((m[4] >> 4) << 2) | ((m[8] >> 4) << 3)
}

/// Word-parallel form of a gate: a linear map on the four bit columns plus a
/// sign update written as a polynomial over GF(2) in those columns.
#[derive(Clone, Copy, Debug)]
pub struct CompiledGate {
    /// `linear[o]` is the input mask that XORs into output column `o`.
    pub linear: [u8; 4],
    /// Bit `m` set means the monomial `∏_{i ∈ m} input_i` enters the sign.
    pub sign_monomials: u16,
}

impl CompiledGate {
    fn from_map(m: &LocalMap) -> Self {
        let mut linear = [0u8; 4];
        for (o, lin) in linear.iter_mut().enumerate() {
            for i in 0..4 {
                *lin |= ((m[1 << i] >> o) & 1) << i;
            }
        }
        let mut anf = [0u8; 16];
        for p in 0..16 {
            anf[p] = (m[p] >> 4) & 1;
        }
        for i in 0..4 {
            for mono in 0..16 {
                if mono & (1 << i) != 0 {
                    anf[mono] ^= anf[mono ^ (1 << i)];
                }
            }
        }
        let mut sign_monomials = 0u16;
        for (mono, &a) in anf.iter().enumerate() {
            sign_monomials |= (a as u16) << mono;
        }
        debug_assert_eq!(sign_monomials & 1, 0);
        CompiledGate {
            linear,
            sign_monomials,
        }
    }

    /// Applies the gate to one word of each column; returns the sign mask.
    #[inline(always)]
    pub fn apply_words(&self, cols: [u64; 4]) -> ([u64; 4], u64) {
        let mut prod = [0u64; 16];
        prod[0] = !0;
        let mut sign = 0u64;
        for m in 1..16usize {
            prod[m] = prod[m & (m - 1)] & cols[m.trailing_zeros() as usize];
            if self.sign_monomials & (1 << m) != 0 {
                sign ^= prod[m];
            }
        }
        let mut out = [0u64; 4];
        for (o, slot) in out.iter_mut().enumerate() {
            let lin = self.linear[o];
            let mut v = 0u64;
            for (i, &c) in cols.iter().enumerate() {
                if lin & (1 << i) != 0 {
                    v ^= c;
                }
            }
            *slot = v;
        }
        (out, sign)
    }
}

/// Index of a two-qubit Clifford class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordGateId {
    pub symplectic_index: u16,
    pub phase_index: u8,
}

impl CliffordGateId {
    pub fn from_index(index: usize) -> Self {
        assert!(index < TWO_QUBIT_CLIFFORDS, "gate index {index} out of range");
        CliffordGateId {
            symplectic_index: (index / 16) as u16,
            phase_index: (index % 16) as u8,
        }
    }

    pub fn index(self) -> usize {
        self.symplectic_index as usize * 16 + self.phase_index as usize
    }

    pub fn identity() -> Self {
        group().identity
    }

    pub fn inverse(self) -> Self {
        CliffordGateId::from_index(group().inverse[self.index()] as usize)
    }

    pub fn local_map(self) -> &'static LocalMap {
        &group().maps[self.index()]
    }

    pub fn compiled(self) -> &'static CompiledGate {
        &group().compiled[self.index()]
    }

    /// Generator sequence, first-applied first.
    pub fn word(self) -> &'static [Elementary] {
        &group().words[self.index()]
    }

    /// Unitary representative (up to global phase) in the basis `b0 + 2 b1`.
    pub fn dense(self) -> Matrix4 {
        dense_from_word(self.word())
    }

    /// Class of the product `self` applied after `first`.
    pub fn after(self, first: CliffordGateId) -> Self {
        CliffordGateId::from_local_map(&compose(self.local_map(), first.local_map()))
            .expect("group is closed")
    }

    pub fn from_local_map(m: &LocalMap) -> Option<Self> {
        group().by_key.get(&map_key(m)).map(|&i| CliffordGateId::from_index(i as usize))
    }

    /// Class of the circuit given by a generator sequence, first-applied first.
    pub fn from_word(word: &[Elementary]) -> Self {
        let mut m = IDENTITY_MAP;
        for &g in word {
            m = compose(&elementary_map(g), &m);
        }
        Self::from_local_map(&m).expect("group is closed")
    }

    pub fn swap() -> Self {
        Self::from_word(&swap_word())
    }

    /// CNOT with control on the first qubit of the pair.
    pub fn cnot() -> Self {
        Self::from_word(&[Elementary::Cx01])
    }

    pub fn cz() -> Self {
        use Elementary::*;
        Self::from_word(&[H1, Cx01, H1])
    }
}

fn cx10_word() -> Vec<Elementary> {
    use Elementary::*;
    vec![H0, H1, Cx01, H0, H1]
}

fn swap_word() -> Vec<Elementary> {
    let mut w = vec![Elementary::Cx01];
    w.extend(cx10_word());
    w.push(Elementary::Cx01);
    w
}

/// The fixed gate `(Z⊗Z) CNOT_{1,0} (I⊗H) CNOT_{0,1} (HS⊗S) SWAP` used for
/// translation-invariant short-range entangled states.
pub fn reference_gate() -> CliffordGateId {
    use Elementary::*;
    let mut w = swap_word();
    w.extend([S0, H0, S1]);
    w.push(Cx01);
    w.push(H1);
    w.extend(cx10_word());
    w.extend([S0, S0, S1, S1]);
    CliffordGateId::from_word(&w)
}

/// Uniformly random two-qubit Clifford class.
pub fn sample_two_qubit_clifford<R: Rng + ?Sized>(rng: &mut R) -> CliffordGateId {
    CliffordGateId::from_index(rng.gen_range(0..TWO_QUBIT_CLIFFORDS))
}

pub fn all_two_qubit_cliffords() -> impl Iterator<Item = CliffordGateId> {
    (0..TWO_QUBIT_CLIFFORDS).map(CliffordGateId::from_index)
}

struct Group {
    maps: Vec<LocalMap>,
    compiled: Vec<CompiledGate>,
    words: Vec<Vec<Elementary>>,
    inverse: Vec<u16>,
    by_key: HashMap<u32, u16>,
    identity: CliffordGateId,
}

fn group() -> &'static Group {
    static GROUP: OnceLock<Group> = OnceLock::new();
    GROUP.get_or_init(build_group)
}

fn build_group() -> Group {
    let gens: Vec<LocalMap> = GENERATORS.iter().map(|&g| elementary_map(g)).collect();
    let mut seen: HashMap<u32, usize> = HashMap::new();
    let mut maps = vec![IDENTITY_MAP];
    let mut words: Vec<Vec<Elementary>> = vec![vec![]];
    seen.insert(map_key(&IDENTITY_MAP), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (gi, g) in gens.iter().enumerate() {
            let child = compose(g, &maps[i]);
            let key = map_key(&child);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                e.insert(maps.len());
                let mut w = words[i].clone();
                w.push(GENERATORS[gi]);
                maps.push(child);
                words.push(w);
                queue.push_back(maps.len() - 1);
            }
        }
    }
    assert_eq!(maps.len(), TWO_QUBIT_CLIFFORDS);

    let mut sym_keys: Vec<u16> = maps.iter().map(symplectic_key).collect();
    sym_keys.sort_unstable();
    sym_keys.dedup();
    assert_eq!(sym_keys.len(), 720);

    let mut order: Vec<Option<usize>> = vec![None; TWO_QUBIT_CLIFFORDS];
    for (i, m) in maps.iter().enumerate() {
        let s = sym_keys.binary_search(&symplectic_key(m)).unwrap();
        let idx = s * 16 + phase_bits(m) as usize;
        assert!(order[idx].is_none(), "duplicate class");
        order[idx] = Some(i);
    }
    let order: Vec<usize> = order.into_iter().map(|o| o.expect("missing class")).collect();

    let maps: Vec<LocalMap> = order.iter().map(|&i| maps[i]).collect();
    let words: Vec<Vec<Elementary>> = order.iter().map(|&i| words[i].clone()).collect();
    let by_key: HashMap<u32, u16> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (map_key(m), i as u16))
        .collect();
    let compiled = maps.iter().map(CompiledGate::from_map).collect();
    let inverse = maps
        .iter()
        .map(|m| {
            let mut inv = [0u8; 16];
            for p in 0..16 {
                inv[(m[p] & 15) as usize] = p as u8 | (m[p] & 16);
            }
            by_key[&map_key(&inv)]
        })
        .collect();
    let identity = CliffordGateId::from_index(by_key[&map_key(&IDENTITY_MAP)] as usize);
    Group {
        maps,
        compiled,
        words,
        inverse,
        by_key,
        identity,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn elementary_dense(g: Elementary) -> Matrix4 {
    let z = c(0.0, 0.0);
    let mut m = [[z; 4]; 4];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for col in 0..4usize {
        let (b0, b1) = (col & 1, col >> 1);
        match g {
            Elementary::H0 => {
                for r0 in 0..2 {
                    let s = if r0 == 1 && b0 == 1 { -h } else { h };
                    m[r0 | (b1 << 1)][col] = c(s, 0.0);
                }
            }
            Elementary::H1 => {
                for r1 in 0..2 {
                    let s = if r1 == 1 && b1 == 1 { -h } else { h };
                    m[b0 | (r1 << 1)][col] = c(s, 0.0);
                }
            }
            Elementary::S0 => m[col][col] = if b0 == 1 { c(0.0, 1.0) } else { c(1.0, 0.0) },
            Elementary::S1 => m[col][col] = if b1 == 1 { c(0.0, 1.0) } else { c(1.0, 0.0) },
            Elementary::Cx01 => m[b0 | ((b1 ^ b0) << 1)][col] = c(1.0, 0.0),
        }
    }
    m
}

fn matmul4(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            for j in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn dense_from_word(word: &[Elementary]) -> Matrix4 {
    let mut u = [[c(0.0, 0.0); 4]; 4];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    for &g in word {
        u = matmul4(&elementary_dense(g), &u);
    }
    u
}

/// All 24 single-qubit Cliffords as dense matrices, up to global phase.
pub fn one_qubit_cliffords() -> &'static [Matrix2] {
    static ONE: OnceLock<Vec<Matrix2>> = OnceLock::new();
    ONE.get_or_init(|| {
        // Action on (x, z, sign) of the three non-identity Paulis, keyed by images of X and Z.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let hm: Matrix2 = [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]];
        let sm: Matrix2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]];
        let step = |p: u8, g: usize| -> u8 {
            let (mut x, mut z, s) = (p & 1, (p >> 1) & 1, p >> 2);
            let f;
            if g == 0 {
                std::mem::swap(&mut x, &mut z);
                f = x & z;
            } else {
                f = x & z;
                z ^= x;
            }
            x | (z << 1) | ((s ^ f) << 2)
        };
        let mul2 = |a: &Matrix2, b: &Matrix2| -> Matrix2 {
            let mut o = [[c(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for k in 0..2 {
                    for j in 0..2 {
                        o[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
            o
        };
        let id: Matrix2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        let mut seen = HashMap::new();
        let mut states = vec![((1u8, 2u8), id)];
        seen.insert((1u8, 2u8), 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let ((ix, iz), m) = states[i];
            for (g, gm) in [hm, sm].iter().enumerate() {
                let key = (step(ix, g), step(iz, g));
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                    e.insert(states.len());
                    states.push((key, mul2(gm, &m)));
                    queue.push_back(states.len() - 1);
                }
            }
        }
        assert_eq!(states.len(), ONE_QUBIT_CLIFFORDS);
        states.into_iter().map(|(_, m)| m).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn pauli_dense(p: u8) -> Matrix4 {
        let one = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        let x = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        let y = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
        let z = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
        let pick = |xb: u8, zb: u8| match (xb, zb) {
            (0, 0) => one,
            (1, 0) => x,
            (1, 1) => y,
            _ => z,
        };
        let a = pick(p & 1, (p >> 1) & 1);
        let b = pick((p >> 2) & 1, (p >> 3) & 1);
        let mut m = [[c(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            for col in 0..4 {
                m[r][col] = a[r & 1][col & 1] * b[r >> 1][col >> 1];
            }
        }
        m
    }

    fn dagger(u: &Matrix4) -> Matrix4 {
        let mut o = [[c(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                o[i][j] = u[j][i].conj();
            }
        }
        o
    }

    fn close(a: &Matrix4, b: &Matrix4, sign: f64) -> bool {
        (0..4).all(|i| (0..4).all(|j| (a[i][j] - b[i][j] * sign).norm() < 1e-12))
    }

    #[test]
    fn tables_match_dense_conjugation() {
        for g in all_two_qubit_cliffords() {
            let u = g.dense();
            let ud = dagger(&u);
            let m = g.local_map();
            for p in 1..16u8 {
                let lhs = matmul4(&matmul4(&u, &pauli_dense(p)), &ud);
                let out = m[p as usize];
                let sign = if out & 16 != 0 { -1.0 } else { 1.0 };
                assert!(close(&lhs, &pauli_dense(out & 15), sign), "gate {} pauli {p}", g.index());
            }
        }
    }

    #[test]
    fn encode_decode_bijection() {
        for i in 0..TWO_QUBIT_CLIFFORDS {
            let g = CliffordGateId::from_index(i);
            assert_eq!(g.index(), i);
            assert!(g.symplectic_index < 720 && g.phase_index < 16);
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let id = CliffordGateId::identity();
        for g in all_two_qubit_cliffords().step_by(7) {
            assert_eq!(g.inverse().after(g), id);
            assert_eq!(g.after(g.inverse()), id);
            assert_eq!(g.inverse().inverse(), g);
        }
    }

    #[test]
    fn compiled_form_matches_table() {
        for g in all_two_qubit_cliffords().step_by(13) {
            let m = g.local_map();
            let cg = g.compiled();
            for p in 0..16u8 {
                let cols = [0, 1, 2, 3].map(|i| if p & (1 << i) != 0 { 1u64 } else { 0 });
                let (out, sign) = cg.apply_words(cols);
                let img = out.iter().enumerate().fold(0u8, |a, (i, &v)| a | ((v as u8 & 1) << i));
                assert_eq!(img, m[p as usize] & 15);
                assert_eq!(sign as u8 & 1, m[p as usize] >> 4);
            }
        }
    }

    #[test]
    fn haar_fourth_moment_of_zero_state() {
        // E |<00|g|00>|^4 over a unitary 2-design on dimension 4 is 2/(4*5).
        let mean: f64 = all_two_qubit_cliffords()
            .map(|g| g.dense()[0][0].norm_sqr().powi(2))
            .sum::<f64>()
            / TWO_QUBIT_CLIFFORDS as f64;
        assert!((mean - 0.1).abs() < 1e-12, "{mean}");
    }

    #[test]
    fn one_qubit_group_size() {
        let g = one_qubit_cliffords();
        assert_eq!(g.len(), 24);
        let mean: f64 = g.iter().map(|u| u[0][0].norm_sqr().powi(2)).sum::<f64>() / 24.0;
        assert!((mean - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn named_gates() {
        let swap = CliffordGateId::swap().local_map();
        assert_eq!(swap[1] & 15, 4);
        assert_eq!(swap[2] & 15, 8);
        let cx = CliffordGateId::cnot().local_map();
        assert_eq!(cx[1], 1 | 4);
        assert_ne!(reference_gate(), CliffordGateId::identity());
    }

    #[test]
    fn sampling_is_uniform() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let draws = 1_152_000usize;
        let mut counts = vec![0u32; TWO_QUBIT_CLIFFORDS];
        for _ in 0..draws {
            counts[sample_two_qubit_clifford(&mut rng).index()] += 1;
        }
        let e = draws as f64 / TWO_QUBIT_CLIFFORDS as f64;
        let chi2: f64 = counts.iter().map(|&k| (k as f64 - e).powi(2) / e).sum();
        // 11519 dof: mean 11519, sd ~152; p = 0.001 lies near +3.1 sd.
        assert!(chi2 < 11519.0 + 3.1 * (2.0f64 * 11519.0).sqrt(), "{chi2}");
    }
}
