use std::fmt;

use crate::error::{Error, Result};

/// A fixed-length bit string, used for computational-basis outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitString {
    n: usize,
    words: Vec<u64>,
}

impl BitString {
    pub fn zeros(n: usize) -> Self {
        BitString {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut b = Self::zeros(n);
        for q in 0..n {
            b.set(q, true);
        }
        b
    }

    pub fn from_words(n: usize, mut words: Vec<u64>) -> Self {
        words.resize(n.div_ceil(64), 0);
        if n % 64 != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
        BitString { n, words }
    }

    /// Little-endian integer encoding (qubit 0 is bit 0), for small N.
    pub fn from_index(n: usize, index: usize) -> Self {
        Self::from_words(n, vec![index as u64])
    }

    pub fn to_index(&self) -> usize {
        self.words.first().copied().unwrap_or(0) as usize
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, q: usize) -> bool {
        (self.words[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn set(&mut self, q: usize, v: bool) {
        let m = 1u64 << (q % 64);
        if v {
            self.words[q / 64] |= m;
        } else {
            self.words[q / 64] &= !m;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hex digits, most significant nibble first; bit q is bit q of the integer.
    pub fn to_hex(&self) -> String {
        let digits = self.n.div_ceil(4).max(1);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let nib = (self.words.get(bit / 64).copied().unwrap_or(0) >> (bit % 64)) & 0xf;
            s.push(char::from_digit(nib as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(n: usize, s: &str) -> Result<Self> {
        let mut b = Self::zeros(n);
        for (d, c) in s.chars().rev().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))? as u64;
            for k in 0..4 {
                if (v >> k) & 1 == 1 {
                    let q = d * 4 + k;
                    if q >= n {
                        return Err(Error::Parse(format!("hex value exceeds {n} bits")));
                    }
                    b.set(q, true);
                }
            }
        }
        Ok(b)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.get(q) as u8)?;
        }
        Ok(())
    }
}
