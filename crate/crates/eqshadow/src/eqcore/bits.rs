//! Bit strings over Z2^n.

use std::fmt;
use std::str::FromStr;

use super::EqError;

/// An element of Z2^n. Bit `i` belongs to qubit `i`; qubit 0 is the least
/// significant bit of the packed index representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    pub fn ones(n: usize) -> Self {
        Self { bits: vec![1; n] }
    }

    /// Basis vector e_i.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut b = Self::zeros(n);
        b.bits[i] = 1;
        b
    }

    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0 or 1");
        Self { bits }
    }

    /// Unpack the low `n` bits of `x` (bit i -> qubit i).
    pub fn from_index(x: u64, n: usize) -> Self {
        Self {
            bits: (0..n).map(|i| ((x >> i) & 1) as u8).collect(),
        }
    }

    /// Pack into an integer index (qubit 0 least significant). Requires n <= 64.
    pub fn to_index(&self) -> u64 {
        assert!(self.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, v: u8) {
        assert!(v <= 1);
        self.bits[i] = v;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &Self) -> Result<u8, EqError> {
        if self.len() != other.len() {
            return Err(EqError::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .fold(0u8, |acc, (&a, &b)| acc ^ (a & b)))
    }

    pub fn xor(&self, other: &Self) -> Result<Self, EqError> {
        if self.len() != other.len() {
            return Err(EqError::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(Self {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        })
    }

    /// In-place reversal of qubit order.
    pub fn reverse(&mut self) {
        self.bits.reverse();
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = EqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(EqError::BadLabelString(format!("bad bit char '{c}'"))),
            }
        }
        Ok(Self { bits })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for x in 0..32u64 {
            let b = BitString::from_index(x, 5);
            assert_eq!(b.to_index(), x);
        }
    }

    #[test]
    fn dot_and_xor() {
        let a = BitString::from_bits(vec![1, 0, 1, 1]);
        let b = BitString::from_bits(vec![1, 1, 0, 1]);
        assert_eq!(a.dot(&b).unwrap(), 0);
        assert_eq!(a.xor(&b).unwrap(), BitString::from_bits(vec![0, 1, 1, 0]));
        assert!(a.dot(&BitString::zeros(3)).is_err());
    }
}
