//! Finite concept classes in the binary n-cube.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::vertex::{full_mask, gather, lex_key, Vertex, MAX_DIM};

/// A set of vertices of `{0,1}^n`, deduplicated and kept in lexicographic order.
///
/// Classes are immutable once built; every operation returns a new class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConceptClass {
    n: usize,
    words: Vec<u64>,
}

impl ConceptClass {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        Ok(Self {
            n,
            words: Vec::new(),
        })
    }

    /// The whole n-cube.
    pub fn full(n: usize) -> Result<Self> {
        if n > 26 {
            return Err(Error::GuardExceeded {
                what: "full cube construction",
                n,
                limit: 26,
            });
        }
        Ok(Self::from_words_unchecked(n, (0..1u64 << n).collect()))
    }

    pub fn new<I: IntoIterator<Item = Vertex>>(n: usize, vertices: I) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        let mut words = Vec::new();
        for v in vertices {
            if v.dim() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: v.dim(),
                });
            }
            words.push(v.bits());
        }
        Ok(Self::from_words_unchecked(n, words))
    }

    /// Builds a class from storage words; each word must fit in `n` bits.
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        let mask = full_mask(n);
        if let Some(w) = words.iter().find(|&&w| w & !mask != 0) {
            return Err(Error::CoordinateOutOfRange {
                coord: 64 - w.leading_zeros() as usize,
                n,
            });
        }
        Ok(Self::from_words_unchecked(n, words))
    }

    pub(crate) fn from_words_unchecked(n: usize, mut words: Vec<u64>) -> Self {
        words.sort_unstable_by_key(|&w| lex_key(w, n));
        words.dedup();
        Self { n, words }
    }

    /// Parses whitespace-separated bitstrings; handy in tests and examples.
    pub fn parse_list(n: usize, list: &str) -> Result<Self> {
        let vs = list
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::parse::<Vertex>)
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, vs)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Storage words in canonical order.
    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Vertex> + '_ {
        let n = self.n;
        self.words.iter().map(move |&w| Vertex::new_unchecked(w, n))
    }

    #[inline]
    pub fn contains_word(&self, w: u64) -> bool {
        let key = lex_key(w, self.n);
        self.words
            .binary_search_by_key(&key, |&x| lex_key(x, self.n))
            .is_ok()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.dim() == self.n && self.contains_word(v.bits())
    }

    pub fn is_subset(&self, other: &ConceptClass) -> bool {
        self.n == other.n && self.words.iter().all(|&w| other.contains_word(w))
    }

    pub fn union(&self, other: &ConceptClass) -> Result<ConceptClass> {
        self.check_dim(other)?;
        let mut words = self.words.clone();
        words.extend_from_slice(&other.words);
        Ok(Self::from_words_unchecked(self.n, words))
    }

    pub fn difference(&self, other: &ConceptClass) -> Result<ConceptClass> {
        self.check_dim(other)?;
        let idx = other.index();
        let words = self
            .words
            .iter()
            .copied()
            .filter(|&w| !idx.contains(w))
            .collect();
        Ok(Self { n: self.n, words })
    }

    pub fn without(&self, v: &Vertex) -> ConceptClass {
        Self {
            n: self.n,
            words: self
                .words
                .iter()
                .copied()
                .filter(|&w| !(v.dim() == self.n && w == v.bits()))
                .collect(),
        }
    }

    pub(crate) fn check_dim(&self, other: &ConceptClass) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub(crate) fn check_coords(&self, j: &CoordSet) -> Result<()> {
        if !j.within(self.n) {
            let coord = 64 - j.mask().leading_zeros() as usize;
            return Err(Error::CoordinateOutOfRange { coord, n: self.n });
        }
        Ok(())
    }

    pub(crate) fn index(&self) -> Index {
        Index::build(self.n, &self.words)
    }

    /// Projection onto the coordinates `j`, yielding a class on `|j|` coordinates.
    pub fn project(&self, j: &CoordSet) -> Result<ConceptClass> {
        self.check_coords(j)?;
        let words = self.words.iter().map(|&w| gather(w, j.mask())).collect();
        Ok(Self::from_words_unchecked(j.len(), words))
    }

    /// `{0,1}^n` minus this class.
    pub fn complement(&self) -> Result<ConceptClass> {
        if self.n > 26 {
            return Err(Error::GuardExceeded {
                what: "complement",
                n: self.n,
                limit: 26,
            });
        }
        let idx = self.index();
        let words = (0..1u64 << self.n).filter(|&w| !idx.contains(w)).collect();
        Ok(Self::from_words_unchecked(self.n, words))
    }

    /// XOR every member with `o`; `o` becomes the new origin.
    pub fn xor_all(&self, o: u64) -> ConceptClass {
        Self::from_words_unchecked(self.n, self.words.iter().map(|&w| w ^ o).collect())
    }

    /// Splits `project(J)` into the reduction (points with two or more
    /// pre-images) and the tail (points with exactly one).
    pub fn reduction_tail(&self, j: &CoordSet) -> Result<(ConceptClass, ConceptClass)> {
        self.check_coords(j)?;
        let mut fibres: HashMap<u64, usize> = HashMap::new();
        for &w in &self.words {
            *fibres.entry(gather(w, j.mask())).or_default() += 1;
        }
        let (red, tail): (Vec<_>, Vec<_>) = fibres.into_iter().partition(|&(_, c)| c >= 2);
        let m = j.len();
        Ok((
            Self::from_words_unchecked(m, red.into_iter().map(|(p, _)| p).collect()),
            Self::from_words_unchecked(m, tail.into_iter().map(|(p, _)| p).collect()),
        ))
    }

    /// `true` when `v ⊙ w` lies in the class for every pair of members.
    pub fn is_intersection_closed(&self) -> bool {
        self.intersection_witness().is_none()
    }

    pub(crate) fn intersection_witness(&self) -> Option<(u64, u64)> {
        let idx = self.index();
        for (i, &a) in self.words.iter().enumerate() {
            for &b in &self.words[i + 1..] {
                if !idx.contains(a & b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub(crate) fn vertex(&self, w: u64) -> Vertex {
        Vertex::new_unchecked(w, self.n)
    }
}

impl fmt::Debug for ConceptClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConceptClass(n={}, {{", self.n)?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}})")
    }
}

/// Fast membership for a fixed set of words: a dense bitmap for small `n`,
/// a hash set otherwise.
pub(crate) enum Index {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl Index {
    pub(crate) fn build(n: usize, words: &[u64]) -> Index {
        if n <= 20 {
            let mut bits = vec![0u64; (1usize << n).div_ceil(64)];
            for &w in words {
                bits[(w >> 6) as usize] |= 1 << (w & 63);
            }
            Index::Dense(bits)
        } else {
            Index::Sparse(words.iter().copied().collect())
        }
    }

    #[inline]
    pub(crate) fn contains(&self, w: u64) -> bool {
        match self {
            Index::Dense(bits) => bits
                .get((w >> 6) as usize)
                .is_some_and(|b| (b >> (w & 63)) & 1 == 1),
            Index::Sparse(set) => set.contains(&w),
        }
    }
}
