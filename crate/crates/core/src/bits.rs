//! Fixed-length bit strings.
//!
//! A string `x = x1 x2 ... xn` is packed into an integer with `x1` as the most
//! significant bit, so the integer value is also the row-major index of the
//! string over the variables `x1, ..., xn`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported string length.
pub const MAX_LEN: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    value: usize,
}

impl BitString {
    pub fn new(len: usize, value: usize) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::InvalidArgument(format!(
                "bit string length {len} exceeds {MAX_LEN}"
            )));
        }
        if value >> len != 0 {
            return Err(Error::InvalidArgument(format!(
                "value {value} does not fit in {len} bits"
            )));
        }
        Ok(Self { len, value })
    }

    /// The string with a single one at 1-based position `k`.
    pub fn unit(len: usize, k: usize) -> Result<Self> {
        if k == 0 || k > len {
            return Err(Error::InvalidArgument(format!(
                "position {k} outside 1..={len}"
            )));
        }
        Self::new(len, unit_index(len, k - 1))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> usize {
        self.value
    }

    /// Bit at 1-based position `k`.
    pub fn bit(&self, k: usize) -> u8 {
        assert!(k >= 1 && k <= self.len, "bit position {k} out of range");
        bit(self.value, self.len, k - 1)
    }

    pub fn weight(&self) -> u32 {
        self.value.count_ones()
    }

    /// Inner product modulo 2.
    pub fn dot(&self, other: &BitString) -> u8 {
        assert_eq!(self.len, other.len, "length mismatch in dot product");
        dot(self.value, other.value)
    }

    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        (0..1usize << len).map(move |value| BitString { len, value })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len {
            let c = if bit(self.value, self.len, k) == 1 {
                '1'
            } else {
                '0'
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut value = 0usize;
        for c in s.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => {
                        return Err(Error::Parse {
                            input: s.to_string(),
                            reason: "bit strings contain only 0 and 1".into(),
                        })
                    }
                };
        }
        Self::new(s.chars().count(), value)
    }
}

/// Bit at 0-based position `i` of an `n`-bit packed string.
#[inline]
pub fn bit(x: usize, n: usize, i: usize) -> u8 {
    ((x >> (n - 1 - i)) & 1) as u8
}

/// Packed string with a single one at 0-based position `i`.
#[inline]
pub fn unit_index(n: usize, i: usize) -> usize {
    1 << (n - 1 - i)
}

#[inline]
pub fn dot(x: usize, y: usize) -> u8 {
    ((x & y).count_ones() & 1) as u8
}
