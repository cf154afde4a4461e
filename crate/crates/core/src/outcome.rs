//! Outcome labels.
//!
//! Qubit `k` occupies bit position `k` of an [`OutcomeIndex`] (qubit 0 is the
//! least-significant bit). Textual bitstrings are written qubit-0 leftmost, so
//! `"011"` is index `0b110 = 6`.

use crate::error::{Error, Result};

/// A measurement outcome over `n` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomeIndex(pub usize);

impl OutcomeIndex {
    #[inline]
    pub fn bit(self, qubit: usize) -> u8 {
        ((self.0 >> qubit) & 1) as u8
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// Parses a qubit-0-leftmost bitstring.
    pub fn parse(bits: &str) -> Result<(Self, usize)> {
        let n = bits.len();
        if n == 0 || n > usize::BITS as usize - 1 {
            return Err(Error::Parse(format!("bad bitstring length {n}")));
        }
        let mut index = 0usize;
        for (k, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => index |= 1 << k,
                other => return Err(Error::Parse(format!("bad bit `{other}` in `{bits}`"))),
            }
        }
        Ok((OutcomeIndex(index), n))
    }

    pub fn to_bitstring(self, n: usize) -> String {
        (0..n).map(|k| if self.bit(k) == 1 { '1' } else { '0' }).collect()
    }
}

impl From<usize> for OutcomeIndex {
    fn from(i: usize) -> Self {
        OutcomeIndex(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_zero_is_leftmost_and_least_significant() {
        let (idx, n) = OutcomeIndex::parse("011").unwrap();
        assert_eq!(n, 3);
        assert_eq!(idx.0, 6);
        assert_eq!(idx.bit(0), 0);
        assert_eq!(idx.bit(2), 1);
        assert_eq!(idx.to_bitstring(3), "011");
    }

    #[test]
    fn rejects_garbage() {
        assert!(OutcomeIndex::parse("01x").is_err());
        assert!(OutcomeIndex::parse("").is_err());
    }
}
