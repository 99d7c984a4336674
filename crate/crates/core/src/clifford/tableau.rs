use rand::Rng;

use super::bits::BitString;
use super::gates::CliffordGateId;
use super::pauli::{words_for, Pauli, PauliString};
use crate::error::{Error, Result};

/// Aaronson–Gottesman tableau: rows `0..N` are destabilizers, rows `N..2N`
/// stabilizers.
///
/// Bits are stored per qubit column (each column packs all `2N` rows), so a
/// gate touches a handful of columns word by word. Row-major copies are
/// built on demand for elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    w: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<u64>,
}

impl StabilizerTableau {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Self {
        let w = words_for(2 * n);
        let mut t = StabilizerTableau {
            n,
            w,
            xs: vec![0; n * w],
            zs: vec![0; n * w],
            signs: vec![0; w],
        };
        t.reset_to_basis(&BitString::zeros(n));
        t
    }

    /// Computational basis state `|b⟩`.
    pub fn basis(b: &BitString) -> Self {
        let mut t = Self::zero(b.len());
        t.reset_to_basis(b);
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn reset_to_basis(&mut self, b: &BitString) {
        let (n, w) = (self.n, self.w);
        self.xs.iter_mut().for_each(|v| *v = 0);
        self.zs.iter_mut().for_each(|v| *v = 0);
        self.signs.iter_mut().for_each(|v| *v = 0);
        for q in 0..n {
            set_bit(&mut self.xs[q * w..(q + 1) * w], q);
            set_bit(&mut self.zs[q * w..(q + 1) * w], n + q);
            if b.get(q) {
                set_bit(&mut self.signs, n + q);
            }
        }
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::QubitOutOfRange { index: q, n: self.n })
        } else {
            Ok(())
        }
    }

    fn check_pair(&self, j: usize, k: usize) -> Result<()> {
        self.check(j)?;
        self.check(k)?;
        if j == k {
            return Err(Error::RepeatedQubit(j));
        }
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> Result<()> {
        self.check(q)?;
        let w = self.w;
        for i in 0..w {
            let (x, z) = (self.xs[q * w + i], self.zs[q * w + i]);
            self.signs[i] ^= x & z;
            self.xs[q * w + i] = z;
            self.zs[q * w + i] = x;
        }
        Ok(())
    }

    pub fn s(&mut self, q: usize) -> Result<()> {
        self.check(q)?;
        let w = self.w;
        for i in 0..w {
            let (x, z) = (self.xs[q * w + i], self.zs[q * w + i]);
            self.signs[i] ^= x & z;
            self.zs[q * w + i] = z ^ x;
        }
        Ok(())
    }

    pub fn cnot(&mut self, c: usize, t: usize) -> Result<()> {
        self.check_pair(c, t)?;
        let w = self.w;
        for i in 0..w {
            let (xc, zc) = (self.xs[c * w + i], self.zs[c * w + i]);
            let (xt, zt) = (self.xs[t * w + i], self.zs[t * w + i]);
            self.signs[i] ^= xc & zt & !(xt ^ zc);
            self.xs[t * w + i] = xt ^ xc;
            self.zs[c * w + i] = zc ^ zt;
        }
        Ok(())
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.h(b)?;
        self.cnot(a, b)?;
        self.h(b)
    }

    /// Conjugates every row by the single-qubit Pauli `p` on qubit `q`.
    pub fn apply_pauli(&mut self, q: usize, p: Pauli) -> Result<()> {
        self.check(q)?;
        let w = self.w;
        for i in 0..w {
            let (x, z) = (self.xs[q * w + i], self.zs[q * w + i]);
            self.signs[i] ^= match p {
                Pauli::I => 0,
                Pauli::X => z,
                Pauli::Z => x,
                Pauli::Y => x ^ z,
            };
        }
        Ok(())
    }

    /// Conjugates the tableau by a two-qubit Clifford on `(j, k)`; `j` is the
    /// gate's first qubit.
    pub fn apply_gate(&mut self, gate: CliffordGateId, j: usize, k: usize) -> Result<()> {
        self.check_pair(j, k)?;
        let cg = gate.compiled();
        let w = self.w;
        let (xj, zj, xk, zk) = (j * w, j * w, k * w, k * w);
        for i in 0..w {
            let cols = [self.xs[xj + i], self.zs[zj + i], self.xs[xk + i], self.zs[zk + i]];
            let (out, sign) = cg.apply_words(cols);
            self.xs[xj + i] = out[0];
            self.zs[zj + i] = out[1];
            self.xs[xk + i] = out[2];
            self.zs[zk + i] = out[3];
            self.signs[i] ^= sign;
        }
        Ok(())
    }

    /// One Pauli-trajectory sample of the local depolarizing channel
    /// `ρ ↦ (1−p)ρ + p·I/2` on every qubit.
    pub fn apply_depolarizing_trajectory<R: Rng + ?Sized>(&mut self, p: f64, rng: &mut R) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        if p == 0.0 {
            return Ok(());
        }
        let q4 = p / 4.0;
        for q in 0..self.n {
            let u: f64 = rng.gen();
            let pauli = if u < q4 {
                Pauli::X
            } else if u < 2.0 * q4 {
                Pauli::Y
            } else if u < 3.0 * q4 {
                Pauli::Z
            } else {
                continue;
            };
            self.apply_pauli(q, pauli)?;
        }
        Ok(())
    }

    /// Applies `X` independently on each qubit with probability `prob`.
    pub fn apply_bit_flips<R: Rng + ?Sized>(&mut self, prob: f64, rng: &mut R) -> Result<()> {
        if !(0.0..=1.0).contains(&prob) {
            return Err(Error::ProbabilityOutOfRange(prob));
        }
        for q in 0..self.n {
            if rng.gen::<f64>() < prob {
                self.apply_pauli(q, Pauli::X)?;
            }
        }
        Ok(())
    }

    /// Builds a tableau from `2N` Hermitian rows, destabilizers first.
    pub fn from_rows(rows: &[PauliString]) -> Result<Self> {
        if rows.len() % 2 == 1 || rows.is_empty() {
            return Err(Error::InvalidGeometry(format!("need 2N rows, got {}", rows.len())));
        }
        let n = rows.len() / 2;
        let w = words_for(2 * n);
        let mut t = StabilizerTableau {
            n,
            w,
            xs: vec![0; n * w],
            zs: vec![0; n * w],
            signs: vec![0; w],
        };
        for (i, r) in rows.iter().enumerate() {
            if r.num_qubits() != n {
                return Err(Error::SizeMismatch { left: r.num_qubits(), right: n });
            }
            let sign = r.hermitian_sign().ok_or_else(|| Error::Domain(format!("row {i} is not Hermitian")))?;
            for q in 0..n {
                if r.x_bit(q) {
                    set_bit(&mut t.xs[q * w..(q + 1) * w], i);
                }
                if r.z_bit(q) {
                    set_bit(&mut t.zs[q * w..(q + 1) * w], i);
                }
            }
            if sign < 0 {
                set_bit(&mut t.signs, i);
            }
        }
        Ok(t)
    }

    /// Row `i` (destabilizers first) as a Pauli string with its sign.
    pub fn row(&self, i: usize) -> PauliString {
        let n = self.n;
        let wq = words_for(n);
        let mut x = vec![0u64; wq];
        let mut z = vec![0u64; wq];
        for q in 0..n {
            if get_bit(&self.xs[q * self.w..], i) {
                x[q / 64] |= 1 << (q % 64);
            }
            if get_bit(&self.zs[q * self.w..], i) {
                z[q / 64] |= 1 << (q % 64);
            }
        }
        let y: u32 = x.iter().zip(&z).map(|(a, b)| (a & b).count_ones()).sum();
        let phase = 2 * get_bit(&self.signs, i) as u8 + (y & 3) as u8;
        PauliString::from_parts(n, x, z, phase)
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|i| self.row(i)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    /// Checks the commutation pattern that keeps the tableau a valid
    /// symplectic basis: everything commutes except destabilizer `i` with
    /// stabilizer `i`.
    pub fn is_symplectic(&self) -> bool {
        let rows: Vec<PauliString> = (0..2 * self.n).map(|i| self.row(i)).collect();
        let n = self.n;
        for a in 0..2 * n {
            if rows[a].hermitian_sign().is_none() {
                return false;
            }
            for b in a + 1..2 * n {
                let anti = b == a + n && a < n;
                if rows[a].commutes_with(&rows[b]) == anti {
                    return false;
                }
            }
        }
        true
    }

    /// `⟨φ|P|φ⟩ ∈ {−1, 0, 1}` for a Hermitian Pauli `P`.
    pub fn expectation(&self, p: &PauliString) -> f64 {
        let stabs = self.stabilizers();
        if stabs.iter().any(|s| !s.commutes_with(p)) {
            return 0.0;
        }
        let mut acc = PauliString::identity(self.n);
        for (i, s) in stabs.iter().enumerate() {
            if !self.row(i).commutes_with(p) {
                acc.mul_assign_right(s);
            }
        }
        if acc.phase() == p.phase() {
            1.0
        } else {
            -1.0
        }
    }

    /// Row-major copy of the stabilizer generators.
    pub(crate) fn stabilizer_rows(&self) -> RowSet {
        let n = self.n;
        let mut rows = RowSet::new(n, n);
        let wq = rows.wq;
        let lo = n;
        for q in 0..n {
            for (col, off) in [(&self.xs, 0usize), (&self.zs, wq)] {
                let c = &col[q * self.w..(q + 1) * self.w];
                for (wi, &word) in c.iter().enumerate() {
                    let mut m = word;
                    while m != 0 {
                        let r = wi * 64 + m.trailing_zeros() as usize;
                        m &= m - 1;
                        if r >= lo {
                            let row = rows.row_mut(r - lo);
                            row[off + q / 64] |= 1 << (q % 64);
                        }
                    }
                }
            }
        }
        for r in 0..n {
            let row = rows.row(r);
            let y: u32 = (0..wq).map(|v| (row[v] & row[wq + v]).count_ones()).sum();
            rows.phase[r] = (2 * get_bit(&self.signs, lo + r) as u8 + (y & 3) as u8) & 3;
        }
        rows
    }

    /// Z-basis description of the state: the outcome distribution is uniform
    /// on an affine subspace of `{0,1}^N`.
    pub fn z_basis_form(&self) -> ZBasisForm {
        ZBasisForm::from_rows(self.stabilizer_rows())
    }

    /// Samples `b` with probability `|⟨b|φ⟩|²` and collapses onto `|b⟩`.
    pub fn measure_all_z<R: Rng + ?Sized>(&mut self, rng: &mut R) -> BitString {
        let b = self.z_basis_form().sample(rng);
        self.reset_to_basis(&b);
        b
    }

    /// `|⟨b|φ⟩|²`.
    pub fn basis_overlap_sq(&self, b: &BitString) -> f64 {
        self.z_basis_form().probability(b)
    }

    pub fn canonical(&self) -> CanonicalStabilizers {
        CanonicalStabilizers::new(self)
    }

    /// `|⟨A|B⟩|²` for two stabilizer states.
    pub fn overlap_sq(&self, other: &StabilizerTableau) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self.canonical().overlap_sq(&other.canonical()))
    }
}

fn set_bit(v: &mut [u64], i: usize) {
    v[i / 64] |= 1 << (i % 64);
}

fn get_bit(v: &[u64], i: usize) -> bool {
    (v[i / 64] >> (i % 64)) & 1 == 1
}

/// Row-major Pauli rows `i^phase X^x Z^z`, each row `[x words | z words]`.
#[derive(Clone, Debug)]
pub(crate) struct RowSet {
    n: usize,
    wq: usize,
    stride: usize,
    data: Vec<u64>,
    phase: Vec<u8>,
}

impl RowSet {
    fn new(n: usize, rows: usize) -> Self {
        let wq = words_for(n);
        RowSet {
            n,
            wq,
            stride: 2 * wq,
            data: vec![0; rows * 2 * wq],
            phase: vec![0; rows],
        }
    }

    fn len(&self) -> usize {
        self.phase.len()
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn bit(&self, i: usize, col: usize) -> bool {
        // Column order: x_0..x_{N-1}, z_0..z_{N-1}.
        let (part, q) = if col < self.n { (0, col) } else { (self.wq, col - self.n) };
        (self.data[i * self.stride + part + q / 64] >> (q % 64)) & 1 == 1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
        self.phase.swap(a, b);
    }

    /// `row_i ← row_i · row_p`.
    fn mul_into(&mut self, i: usize, p: usize) {
        let (s, h) = (self.stride, self.wq);
        let (dst, src) = if i < p {
            let (a, b) = self.data.split_at_mut(p * s);
            (&mut a[i * s..i * s + s], &b[..s])
        } else {
            let (a, b) = self.data.split_at_mut(i * s);
            (&mut b[..s], &a[p * s..p * s + s])
        };
        let mut cross = 0u32;
        for v in 0..h {
            cross += (dst[h + v] & src[v]).count_ones();
        }
        for v in 0..s {
            dst[v] ^= src[v];
        }
        self.phase[i] = (self.phase[i] + self.phase[p] + 2 * (cross & 1) as u8) & 3;
    }

    fn x_is_zero(&self, i: usize) -> bool {
        self.row(i)[..self.wq].iter().all(|&v| v == 0)
    }

    /// Gaussian elimination over columns `cols`; rows above the pivot are
    /// also cleared when `full` is set. Returns pivot columns in order.
    fn eliminate(&mut self, cols: std::ops::Range<usize>, start: usize, full: bool) -> Vec<usize> {
        let mut pr = start;
        let mut pivots = Vec::new();
        let rows = self.len();
        for col in cols {
            let Some(found) = (pr..rows).find(|&r| self.bit(r, col)) else {
                continue;
            };
            self.swap_rows(found, pr);
            let lo = if full { 0 } else { pr + 1 };
            for r in lo..rows {
                if r != pr && self.bit(r, col) {
                    self.mul_into(r, pr);
                }
            }
            pivots.push(col);
            pr += 1;
            if pr == rows {
                break;
            }
        }
        pivots
    }
}

/// A stabilizer state seen through Z-basis measurements: `k` indeterminate
/// bits plus `N − k` parity constraints `z·b = s`, kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct ZBasisForm {
    n: usize,
    rank: usize,
    constraints: Vec<Vec<u64>>,
    signs: Vec<bool>,
    pivots: Vec<usize>,
}

impl ZBasisForm {
    fn from_rows(mut rows: RowSet) -> Self {
        let n = rows.n;
        let rank = rows.eliminate(0..n, 0, false).len();
        let wq = rows.wq;
        let mut z = RowSet::new(n, n - rank);
        for r in rank..n {
            debug_assert!(rows.x_is_zero(r));
            let src = rows.row(r)[wq..].to_vec();
            z.row_mut(r - rank)[wq..].copy_from_slice(&src);
            z.phase[r - rank] = rows.phase[r];
        }
        let pivots: Vec<usize> = z.eliminate(n..2 * n, 0, true).into_iter().map(|c| c - n).collect();
        debug_assert_eq!(pivots.len(), n - rank);
        let constraints = (0..z.len()).map(|r| z.row(r)[wq..].to_vec()).collect();
        let signs = z
            .phase
            .iter()
            .map(|&ph| {
                debug_assert!(ph == 0 || ph == 2, "Z-type stabilizer with imaginary phase");
                ph == 2
            })
            .collect();
        ZBasisForm {
            n,
            rank,
            constraints,
            signs,
            pivots,
        }
    }

    /// Number of indeterminate bits; every allowed outcome has probability `2^{-rank}`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn probability(&self, b: &BitString) -> f64 {
        for (c, &s) in self.constraints.iter().zip(&self.signs) {
            let parity = c.iter().zip(b.words()).map(|(a, w)| (a & w).count_ones()).sum::<u32>() & 1;
            if (parity == 1) != s {
                return 0.0;
            }
        }
        0.5f64.powi(self.rank as i32)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let words = (0..self.n.div_ceil(64)).map(|_| rng.gen::<u64>()).collect();
        let mut b = BitString::from_words(self.n, words);
        for (row, (&p, &s)) in self.pivots.iter().zip(&self.signs).enumerate() {
            b.set(p, false);
            let parity =
                self.constraints[row].iter().zip(b.words()).map(|(a, w)| (a & w).count_ones()).sum::<u32>() & 1;
            b.set(p, (parity == 1) != s);
        }
        b
    }
}

/// Stabilizer group in reduced row echelon form over `[x | z]`, reusable
/// across many overlap evaluations.
#[derive(Clone, Debug)]
pub struct CanonicalStabilizers {
    rows: RowSet,
    pivots: Vec<usize>,
}

struct Acc {
    bits: Vec<u64>,
    phase: u8,
}

impl Acc {
    fn identity(stride: usize) -> Self {
        Acc {
            bits: vec![0; stride],
            phase: 0,
        }
    }

    fn from_row(rows: &RowSet, i: usize) -> Self {
        Acc {
            bits: rows.row(i).to_vec(),
            phase: rows.phase[i],
        }
    }

    fn mul_right(&mut self, bits: &[u64], phase: u8, wq: usize) {
        let mut cross = 0u32;
        for v in 0..wq {
            cross += (self.bits[wq + v] & bits[v]).count_ones();
        }
        for (a, b) in self.bits.iter_mut().zip(bits) {
            *a ^= b;
        }
        self.phase = (self.phase + phase + 2 * (cross & 1) as u8) & 3;
    }
}

fn test_col(bits: &[u64], col: usize, n: usize, wq: usize) -> bool {
    let (part, q) = if col < n { (0, col) } else { (wq, col - n) };
    (bits[part + q / 64] >> (q % 64)) & 1 == 1
}

impl CanonicalStabilizers {
    pub fn new(t: &StabilizerTableau) -> Self {
        let mut rows = t.stabilizer_rows();
        let n = rows.n;
        let pivots = rows.eliminate(0..2 * n, 0, true);
        debug_assert_eq!(pivots.len(), n);
        CanonicalStabilizers { rows, pivots }
    }

    pub fn num_qubits(&self) -> usize {
        self.rows.n
    }

    /// `|⟨A|B⟩|²`: zero if the groups contain `P` and `−P`, else
    /// `2^{-(N − dim(S_A ∩ S_B))}`.
    pub fn overlap_sq(&self, other: &CanonicalStabilizers) -> f64 {
        let (n, wq, stride) = (self.rows.n, self.rows.wq, self.rows.stride);
        assert_eq!(n, other.rows.n, "qubit count mismatch");
        // Each residue keeps its B-side product, its A-side product, and their
        // bitwise difference, which is free of A's pivot columns.
        let mut residues: Vec<(Vec<u64>, usize, Acc, Acc)> = Vec::with_capacity(n);
        let mut shared = 0usize;
        for g in 0..n {
            let mut gb = Acc::from_row(&other.rows, g);
            let mut ga = Acc::identity(stride);
            for (i, &col) in self.pivots.iter().enumerate() {
                if test_col(&gb.bits, col, n, wq) != test_col(&ga.bits, col, n, wq) {
                    ga.mul_right(self.rows.row(i), self.rows.phase[i], wq);
                }
            }
            let mut cur: Vec<u64> = gb.bits.iter().zip(&ga.bits).map(|(a, b)| a ^ b).collect();
            for (rbits, rcol, rb, ra) in &residues {
                if test_col(&cur, *rcol, n, wq) {
                    for (c, r) in cur.iter_mut().zip(rbits) {
                        *c ^= r;
                    }
                    gb.mul_right(&rb.bits, rb.phase, wq);
                    ga.mul_right(&ra.bits, ra.phase, wq);
                }
            }
            match (0..2 * n).find(|&col| test_col(&cur, col, n, wq)) {
                None => {
                    if gb.phase != ga.phase {
                        return 0.0;
                    }
                    shared += 1;
                }
                Some(col) => residues.push((cur, col, gb, ga)),
            }
        }
        0.5f64.powi((n - shared) as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ghz(n: usize) -> StabilizerTableau {
        let mut t = StabilizerTableau::zero(n);
        t.h(0).unwrap();
        for q in 1..n {
            t.cnot(q - 1, q).unwrap();
        }
        t
    }

    #[test]
    fn zero_state_stabilizers() {
        let t = StabilizerTableau::zero(2);
        let s: Vec<String> = t.stabilizers().iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["+ZI", "+IZ"]);
        assert!(t.is_symplectic());
    }

    #[test]
    fn identity_gate_is_noop() {
        let mut t = ghz(3);
        let before = t.clone();
        t.apply_gate(CliffordGateId::identity(), 0, 2).unwrap();
        assert_eq!(t, before);
    }

    #[test]
    fn swap_exchanges_rows() {
        let mut t = StabilizerTableau::zero(2);
        t.apply_gate(CliffordGateId::swap(), 0, 1).unwrap();
        let s: Vec<String> = t.stabilizers().iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["+IZ", "+ZI"]);
    }

    #[test]
    fn cnot_on_zero_measures_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let mut t = StabilizerTableau::zero(2);
            t.apply_gate(CliffordGateId::cnot(), 0, 1).unwrap();
            assert_eq!(t.measure_all_z(&mut rng).to_index(), 0);
        }
    }

    #[test]
    fn ghz_measurement_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws = 100_000;
        let mut zeros = 0;
        for _ in 0..draws {
            let mut t = ghz(3);
            match t.measure_all_z(&mut rng).to_index() {
                0 => zeros += 1,
                7 => {}
                other => panic!("impossible outcome {other}"),
            }
        }
        let f = zeros as f64 / draws as f64;
        assert!((f - 0.5).abs() < 3.0 * (0.25f64 / draws as f64).sqrt());
    }

    #[test]
    fn ghz_overlap_with_zero() {
        for n in 1..8 {
            let g = ghz(n);
            let z = StabilizerTableau::zero(n);
            assert_eq!(g.overlap_sq(&z).unwrap(), 0.5);
            assert_eq!(z.overlap_sq(&z).unwrap(), 1.0);
        }
    }

    #[test]
    fn orthogonal_states_have_zero_overlap() {
        let z = StabilizerTableau::zero(3);
        let b = StabilizerTableau::basis(&BitString::from_index(3, 5));
        assert_eq!(z.overlap_sq(&b).unwrap(), 0.0);
        let mut minus = ghz(3);
        minus.apply_pauli(0, Pauli::Z).unwrap();
        assert_eq!(minus.overlap_sq(&ghz(3)).unwrap(), 0.0);
    }

    #[test]
    fn random_gates_keep_symplectic_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = StabilizerTableau::zero(5);
        for _ in 0..200 {
            let j = rng.gen_range(0..5);
            let k = (j + rng.gen_range(1..5)) % 5;
            t.apply_gate(super::super::gates::sample_two_qubit_clifford(&mut rng), j, k).unwrap();
        }
        assert!(t.is_symplectic());
    }

    #[test]
    fn depolarizing_rejects_bad_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut t = StabilizerTableau::zero(1);
        assert!(t.apply_depolarizing_trajectory(1.5, &mut rng).is_err());
        let before = t.clone();
        t.apply_depolarizing_trajectory(0.0, &mut rng).unwrap();
        assert_eq!(t, before);
    }

    #[test]
    fn depolarizing_z_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let trials = 1_000_000;
        let p = 0.02;
        let zero = BitString::zeros(1);
        let mut acc = 0.0;
        for _ in 0..trials {
            let mut t = StabilizerTableau::zero(1);
            t.apply_depolarizing_trajectory(p, &mut rng).unwrap();
            acc += 2.0 * t.basis_overlap_sq(&zero) - 1.0;
        }
        let mean = acc / trials as f64;
        let sigma = (1.0 - (1.0 - p) * (1.0 - p)).sqrt() / (trials as f64).sqrt();
        assert!((mean - (1.0 - p)).abs() < 3.0 * sigma, "{mean}");
    }
}
