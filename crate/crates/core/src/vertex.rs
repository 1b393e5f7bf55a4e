//! Points of the binary n-cube.
//!
//! Coordinates are 1-based at the API surface and 0-based in storage: bit `i`
//! of the word holds coordinate `i + 1`. Vertices order lexicographically by
//! their bitstring, leftmost character first, which is coordinate 1.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 63;

/// Mask with the low `n` bits set.
#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

/// Sort key matching the lexicographic bitstring order.
#[inline]
pub(crate) fn lex_key(bits: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        bits.reverse_bits() >> (64 - n)
    }
}

/// Inverse of [`lex_key`].
#[inline]
pub(crate) fn from_lex_key(key: u64, n: usize) -> u64 {
    lex_key(key, n)
}

/// Packs the bits of `bits` selected by `mask` into the low positions,
/// preserving their relative order.
#[inline]
pub(crate) fn gather(bits: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    let mut k = 0;
    while m != 0 {
        let i = m.trailing_zeros();
        out |= ((bits >> i) & 1) << k;
        k += 1;
        m &= m - 1;
    }
    out
}

/// Inverse of [`gather`]: spreads the low bits of `packed` onto the positions of `mask`.
#[inline]
pub(crate) fn scatter(packed: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    let mut k = 0;
    while m != 0 {
        let i = m.trailing_zeros();
        out |= ((packed >> k) & 1) << i;
        k += 1;
        m &= m - 1;
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    bits: u64,
    n: u8,
}

impl Vertex {
    /// Builds a vertex from a storage word. Bits above `n` must be clear.
    pub fn from_bits(bits: u64, n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        if bits & !full_mask(n) != 0 {
            return Err(Error::CoordinateOutOfRange {
                coord: 64 - bits.leading_zeros() as usize,
                n,
            });
        }
        Ok(Self { bits, n: n as u8 })
    }

    #[inline]
    pub(crate) fn new_unchecked(bits: u64, n: usize) -> Self {
        debug_assert!(n <= MAX_DIM && bits & !full_mask(n) == 0);
        Self { bits, n: n as u8 }
    }

    pub fn zero(n: usize) -> Self {
        Self::new_unchecked(0, n)
    }

    pub fn ones(n: usize) -> Self {
        Self::new_unchecked(full_mask(n), n)
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// Value at 1-based coordinate `coord`.
    pub fn get(&self, coord: usize) -> bool {
        assert!(
            coord >= 1 && coord <= self.dim(),
            "coordinate {coord} out of range"
        );
        (self.bits >> (coord - 1)) & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Flip the value at 1-based coordinate `coord`.
    pub fn flipped(&self, coord: usize) -> Self {
        assert!(
            coord >= 1 && coord <= self.dim(),
            "coordinate {coord} out of range"
        );
        Self::new_unchecked(self.bits ^ (1 << (coord - 1)), self.dim())
    }

    fn check_dim(&self, other: &Vertex) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.dim())
            .map(|i| if (self.bits >> i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Number of coordinates where `u` and `v` differ.
pub fn hamming(u: &Vertex, v: &Vertex) -> Result<usize> {
    u.check_dim(v)?;
    Ok((u.bits ^ v.bits).count_ones() as usize)
}

/// Coordinate-wise product `u ⊙ v`.
pub fn intersect(u: &Vertex, v: &Vertex) -> Result<Vertex> {
    u.check_dim(v)?;
    Ok(Vertex::new_unchecked(u.bits & v.bits, u.dim()))
}

/// `u ≤ v`: `u` lies between `v` and the origin.
pub fn leq(u: &Vertex, v: &Vertex) -> Result<bool> {
    u.check_dim(v)?;
    Ok(u.bits & !v.bits == 0)
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| lex_key(self.bits, self.dim()).cmp(&lex_key(other.bits, other.dim())))
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 0 {
            return f.write_str("ε");
        }
        f.write_str(&self.to_bitstring())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" {
            return Ok(Vertex::zero(0));
        }
        let n = s.chars().count();
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("unexpected character {other:?} in bitstring"),
                    })
                }
            }
        }
        Ok(Vertex::new_unchecked(bits, n))
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&v("0000"), &v("0000")).unwrap(), 0);
        assert_eq!(hamming(&v("00"), &v("11")).unwrap(), 2);
        assert_eq!(hamming(&v("1101"), &v("0100")).unwrap(), 2);
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(intersect(&v("110"), &v("101")).unwrap(), v("100"));
        assert_eq!(intersect(&v("011"), &v("011")).unwrap(), v("011"));
        assert_eq!(intersect(&v("111"), &v("000")).unwrap(), v("000"));
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&v("100"), &v("110")).unwrap());
        assert!(leq(&v("101"), &v("101")).unwrap());
        assert!(!leq(&v("010"), &v("101")).unwrap());
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        assert!(matches!(
            hamming(&v("01"), &v("011")),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
        assert!(intersect(&v("0"), &v("00")).is_err());
        assert!(leq(&v("0"), &v("00")).is_err());
    }

    #[test]
    fn bitstring_is_coordinate_one_first() {
        let x = v("100");
        assert!(x.get(1));
        assert!(!x.get(3));
        assert_eq!(x.bits(), 1);
        assert_eq!(x.to_string(), "100");
    }

    #[test]
    fn order_is_lexicographic() {
        let mut xs = [v("11"), v("01"), v("10"), v("00")];
        xs.sort();
        let s: Vec<_> = xs.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["00", "01", "10", "11"]);
    }

    #[test]
    fn gather_scatter_invert() {
        let mask = 0b1011_0100;
        for packed in 0..16u64 {
            assert_eq!(gather(scatter(packed, mask), mask), packed);
        }
        assert_eq!(lex_key(0b001, 3), 0b100);
        assert_eq!(from_lex_key(lex_key(0b011, 3), 3), 0b011);
    }

    #[test]
    fn rejects_bits_above_dimension() {
        assert!(Vertex::from_bits(0b100, 2).is_err());
        assert!(Vertex::from_bits(0, 64).is_err());
    }
}
