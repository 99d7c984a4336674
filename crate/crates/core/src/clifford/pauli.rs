use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// An N-qubit Pauli operator `i^phase · X^x · Z^z`, bit-packed.
///
/// All X factors are written to the left of all Z factors, so `Y_j` is stored
/// as `x_j = z_j = 1` with one extra power of `i` (`Y = i X Z`). With this
/// convention the product rule needs only one popcount:
/// `(i^a X^x1 Z^z1)(i^b X^x2 Z^z2) = i^(a+b+2|z1 & x2|) X^(x1^x2) Z^(z1^z2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// `P_q` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        let mut out = Self::identity(n);
        out.set(q, p);
        Ok(out)
    }

    /// Hermitian Pauli from per-qubit labels with sign `+1`.
    pub fn from_labels(labels: &[Pauli]) -> Self {
        let mut out = Self::identity(labels.len());
        for (q, &p) in labels.iter().enumerate() {
            out.set(q, p);
        }
        out
    }

    /// Raw constructor from bit masks and the power of `i`.
    pub fn from_parts(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Self {
        debug_assert_eq!(x.len(), words_for(n));
        debug_assert_eq!(z.len(), words_for(n));
        PauliString {
            n,
            x,
            z,
            phase: phase & 3,
        }
    }

    /// Overwrites qubit `q` with the Hermitian label `p`, keeping the overall sign.
    pub fn set(&mut self, q: usize, p: Pauli) {
        let sign = self.hermitian_phase_offset();
        let (xb, zb) = p.bits();
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
        self.phase = (sign + self.y_count()) & 3;
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn label(&self, q: usize) -> Pauli {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn y_count(&self) -> u8 {
        (self
            .x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            & 3) as u8
    }

    /// Power of `i` left after factoring out the Hermitian label string.
    fn hermitian_phase_offset(&self) -> u8 {
        (self.phase + 4 - self.y_count()) & 3
    }

    /// `Some(±1)` for Hermitian operators, `None` for `±i` multiples.
    pub fn hermitian_sign(&self) -> Option<i8> {
        match self.hermitian_phase_offset() {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// True when no X or Y factor is present.
    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= (self.x[w] & other.z[w]).count_ones() ^ (self.z[w] & other.x[w]).count_ones();
        }
        parity & 1 == 0
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut out = self.clone();
        out.mul_assign_right(other);
        out
    }

    /// `self ← self · other`.
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        debug_assert_eq!(self.n, other.n);
        let mut cross = 0u32;
        for w in 0..self.x.len() {
            cross += (self.z[w] & other.x[w]).count_ones();
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
        self.phase = (self.phase + other.phase + 2 * (cross & 1) as u8) & 3;
    }

    /// Conjugates by a two-qubit Clifford given as a local table, acting on `(j, k)`.
    pub(crate) fn conjugate_local(&mut self, map: &super::gates::LocalMap, j: usize, k: usize) {
        let p = self.x_bit(j) as u8 | (self.z_bit(j) as u8) << 1 | (self.x_bit(k) as u8) << 2 | (self.z_bit(k) as u8) << 3;
        let out = map[p as usize];
        let y_old = (p & 1 & (p >> 1)) + ((p >> 2) & 1 & (p >> 3));
        let y_new = (out & 1 & (out >> 1)) + ((out >> 2) & 1 & (out >> 3));
        for (q, xb, zb) in [(j, out & 1, (out >> 1) & 1), (k, (out >> 2) & 1, (out >> 3) & 1)] {
            let (w, b) = (q / 64, q % 64);
            self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
            self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
        }
        self.phase = (self.phase + 4 - y_old + y_new + 2 * ((out >> 4) & 1)) & 3;
    }

    /// Multiplies by the scalar `i^k`.
    pub fn mul_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    /// `⟨b|P|b⟩` for a computational basis state: `±1` for Z-type strings, else 0.
    pub fn basis_expectation(&self, b: &super::BitString) -> f64 {
        if !self.is_z_type() {
            return 0.0;
        }
        let parity = self
            .z
            .iter()
            .zip(b.words())
            .map(|(z, w)| (z & w).count_ones())
            .sum::<u32>()
            & 1;
        // Z-type: phase is 0 or 2 for Hermitian strings.
        let sign = match self.phase {
            0 => 1.0,
            2 => -1.0,
            _ => return f64::NAN,
        };
        if parity == 1 {
            -sign
        } else {
            sign
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.hermitian_phase_offset() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            let c = match self.label(q) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Dense label strings such as `"XYZI"`, `"-ZZ"` or `"+iXX"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (offset, body) = if let Some(rest) = s.strip_prefix("-i") {
            (3u8, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else {
            (0, s)
        };
        let labels = body
            .chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!("bad Pauli label {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if labels.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        let mut p = PauliString::from_labels(&labels);
        p.mul_phase(offset);
        Ok(p)
    }
}
