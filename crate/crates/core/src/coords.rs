//! Sets of coordinates of the n-cube, stored as bit masks and exposed 1-based.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vertex::MAX_DIM;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CoordSet(u64);

impl CoordSet {
    pub const EMPTY: CoordSet = CoordSet(0);

    pub fn from_mask(mask: u64) -> Self {
        CoordSet(mask)
    }

    /// All of `[n]`.
    pub fn full(n: usize) -> Self {
        CoordSet(crate::vertex::full_mask(n))
    }

    /// Builds a set from 1-based coordinates, each of which must lie in `[1, n]`.
    pub fn from_coords<I: IntoIterator<Item = usize>>(coords: I, n: usize) -> Result<Self> {
        let mut mask = 0u64;
        for c in coords {
            if c == 0 || c > n || c > MAX_DIM {
                return Err(Error::CoordinateOutOfRange { coord: c, n });
            }
            mask |= 1 << (c - 1);
        }
        Ok(CoordSet(mask))
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, coord: usize) -> bool {
        (1..=64).contains(&coord) && (self.0 >> (coord - 1)) & 1 == 1
    }

    pub fn is_subset(&self, other: &CoordSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn within(&self, n: usize) -> bool {
        self.0 & !crate::vertex::full_mask(n) == 0
    }

    pub fn union(&self, other: &CoordSet) -> CoordSet {
        CoordSet(self.0 | other.0)
    }

    /// Ascending 1-based coordinates.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i + 1)
            }
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Canonical ordering key: size first, then the sorted coordinate list.
    pub fn canonical_key(&self) -> (usize, Vec<usize>) {
        (self.len(), self.to_vec())
    }
}

impl fmt::Debug for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for CoordSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoordSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<usize>::deserialize(deserializer)?;
        CoordSet::from_coords(coords, MAX_DIM).map_err(serde::de::Error::custom)
    }
}

/// Calls `f` on every `k`-subset of the bits in `universe`, in lexicographic
/// order of the ascending coordinate lists.
pub(crate) fn for_each_subset_of_size(universe: u64, k: usize, mut f: impl FnMut(u64) -> bool) {
    let positions: Vec<u32> = {
        let mut m = universe;
        let mut out = Vec::new();
        while m != 0 {
            out.push(m.trailing_zeros());
            m &= m - 1;
        }
        out
    };
    let len = positions.len();
    if k > len {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mask = idx.iter().fold(0u64, |acc, &i| acc | 1 << positions[i]);
        if !f(mask) {
            return;
        }
        // rightmost index that can still move
        let mut i = k;
        while i > 0 && idx[i - 1] == len - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_based_round_trip() {
        let s = CoordSet::from_coords([3, 1], 4).unwrap();
        assert_eq!(s.to_vec(), vec![1, 3]);
        assert_eq!(s.mask(), 0b101);
        assert!(CoordSet::from_coords([0], 4).is_err());
        assert!(CoordSet::from_coords([5], 4).is_err());
    }

    #[test]
    fn subsets_of_size_enumerate_in_lex_order() {
        let mut seen = Vec::new();
        for_each_subset_of_size(0b1111, 2, |m| {
            seen.push(CoordSet(m).to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        let mut count = 0;
        for_each_subset_of_size(0b1011, 0, |m| {
            assert_eq!(m, 0);
            count += 1;
            true
        });
        assert_eq!(count, 1);
        let mut count = 0;
        for_each_subset_of_size(0b1011, 3, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(33, 3), 5456);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }
}
