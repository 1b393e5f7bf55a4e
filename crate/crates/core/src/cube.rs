//! Subcubes, edges and the one-inclusion structure of a class.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::class::ConceptClass;
use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::vertex::{full_mask, lex_key, Vertex};

/// Subcube of `{0,1}^n`: free coordinates (colours) and fixed values
/// elsewhere (the anchor). Anchor bits under the colours are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cube {
    n: u8,
    colours: u64,
    anchor: u64,
}

impl Cube {
    pub fn new(n: usize, colours: CoordSet, anchor: u64) -> Result<Self> {
        if !colours.within(n) {
            return Err(Error::CoordinateOutOfRange {
                coord: 64 - colours.mask().leading_zeros() as usize,
                n,
            });
        }
        if anchor & !full_mask(n) != 0 {
            return Err(Error::CoordinateOutOfRange {
                coord: 64 - anchor.leading_zeros() as usize,
                n,
            });
        }
        Ok(Self::raw(n, colours.mask(), anchor))
    }

    #[inline]
    pub(crate) fn raw(n: usize, colours: u64, anchor: u64) -> Self {
        Cube {
            n: n as u8,
            colours,
            anchor: anchor & !colours,
        }
    }

    /// The 0-cube `{v}`.
    pub fn point(v: &Vertex) -> Self {
        Self::raw(v.dim(), 0, v.bits())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n as usize
    }

    pub fn dim(&self) -> usize {
        self.colours.count_ones() as usize
    }

    pub fn colours(&self) -> CoordSet {
        CoordSet::from_mask(self.colours)
    }

    pub fn colour_mask(&self) -> u64 {
        self.colours
    }

    /// Anchor as a storage word (zero on the colours).
    pub fn anchor_bits(&self) -> u64 {
        self.anchor
    }

    /// Anchor as `coordinate -> bit`, over the non-colour coordinates.
    pub fn anchor_map(&self) -> BTreeMap<usize, u8> {
        let fixed = full_mask(self.ambient_dim()) & !self.colours;
        CoordSet::from_mask(fixed)
            .iter()
            .map(|c| (c, ((self.anchor >> (c - 1)) & 1) as u8))
            .collect()
    }

    pub fn contains_word(&self, w: u64) -> bool {
        (w & !self.colours) == self.anchor
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.dim() == self.ambient_dim() && self.contains_word(v.bits())
    }

    /// All `2^dim` member words, in no particular order.
    pub fn words(&self) -> impl Iterator<Item = u64> + '_ {
        // standard submask walk
        let colours = self.colours;
        let anchor = self.anchor;
        let mut sub = Some(0u64);
        std::iter::from_fn(move || {
            let s = sub?;
            sub = if s == colours {
                None
            } else {
                Some((s.wrapping_sub(colours)) & colours)
            };
            Some(anchor | s)
        })
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let n = self.ambient_dim();
        let mut vs: Vec<Vertex> = self.words().map(|w| Vertex::new_unchecked(w, n)).collect();
        vs.sort();
        vs
    }

    pub fn is_within(&self, class: &ConceptClass) -> bool {
        self.words().all(|w| class.contains_word(w))
    }

    pub fn is_disjoint_from(&self, class: &ConceptClass) -> bool {
        if self.dim() as u32 > class.len().max(1).ilog2() + 1 {
            // a big cube: scan the class instead of the cube
            return !class.words().iter().any(|&w| self.contains_word(w));
        }
        self.words().all(|w| !class.contains_word(w))
    }

    pub fn is_subcube_of(&self, other: &Cube) -> bool {
        self.colours & !other.colours == 0 && other.contains_word(self.anchor)
    }

    /// Common vertices of two cubes, if any.
    pub fn intersection(&self, other: &Cube) -> Option<Cube> {
        let fixed_both = !self.colours & !other.colours;
        if (self.anchor ^ other.anchor) & fixed_both != 0 {
            return None;
        }
        let colours = self.colours & other.colours;
        let anchor = (self.anchor | other.anchor) & !colours;
        Some(Cube::raw(self.ambient_dim(), colours, anchor))
    }

    fn sort_key(&self) -> (usize, Vec<usize>, u64) {
        let (d, cs) = self.colours().canonical_key();
        (d, cs, lex_key(self.anchor, self.ambient_dim()))
    }
}

impl Ord for Cube {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for Cube {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cube {
    /// Bitstring with `*` on the colours, e.g. `1*0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.ambient_dim() {
            let ch = if (self.colours >> i) & 1 == 1 {
                '*'
            } else if (self.anchor >> i) & 1 == 1 {
                '1'
            } else {
                '0'
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cube({self})")
    }
}

/// JSON shape `{colours: [..], anchor: {coord: bit}}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CubeRecord {
    pub colours: Vec<usize>,
    pub anchor: BTreeMap<usize, u8>,
}

impl From<&Cube> for CubeRecord {
    fn from(c: &Cube) -> Self {
        CubeRecord {
            colours: c.colours().to_vec(),
            anchor: c.anchor_map(),
        }
    }
}

impl CubeRecord {
    pub fn to_cube(&self, n: usize) -> Result<Cube> {
        let colours = CoordSet::from_coords(self.colours.iter().copied(), n)?;
        let mut anchor = 0u64;
        for (&c, &b) in &self.anchor {
            if c == 0 || c > n || colours.contains(c) {
                return Err(Error::CoordinateOutOfRange { coord: c, n });
            }
            if b > 1 {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("anchor bit {b} at coordinate {c}"),
                });
            }
            anchor |= (b as u64) << (c - 1);
        }
        if self.anchor.len() + colours.len() != n {
            return Err(Error::Parse {
                line: 0,
                message: "anchor and colours do not partition [n]".into(),
            });
        }
        Cube::new(n, colours, anchor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    /// Endpoint with 0 at the colour.
    pub low: Vertex,
    /// Endpoint with 1 at the colour.
    pub high: Vertex,
    /// 1-based differing coordinate.
    pub colour: usize,
}

/// All Hamming-1 pairs inside the class, ordered by lower endpoint then colour.
pub fn one_inclusion_edges(class: &ConceptClass) -> Vec<Edge> {
    let idx = class.index();
    let n = class.dim();
    let mut out = Vec::new();
    for &w in class.words() {
        for i in 0..n {
            let bit = 1u64 << i;
            if w & bit == 0 && idx.contains(w | bit) {
                out.push(Edge {
                    low: class.vertex(w),
                    high: class.vertex(w | bit),
                    colour: i + 1,
                });
            }
        }
    }
    out
}

/// Every cube contained in the class, optionally only the maximal ones,
/// in canonical order (dimension, colours, anchor).
///
/// Built bottom-up: a cube with colours `I ∪ {j}` (`j` above every colour in
/// `I`) is present exactly when its two colour-`j` faces are.
pub fn enumerate_cubes(class: &ConceptClass, maximal_only: bool) -> Vec<Cube> {
    let levels = cube_levels(class);
    let n = class.dim();
    let mut out = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        for &(colours, anchor) in level {
            if maximal_only {
                let next = levels.get(k + 1);
                let free = full_mask(n) & !colours;
                let extends = next.is_some_and(|next| {
                    CoordSet::from_mask(free).iter().any(|c| {
                        let bit = 1u64 << (c - 1);
                        next.contains(&(colours | bit, anchor & !bit))
                    })
                });
                if extends {
                    continue;
                }
            }
            out.push(Cube::raw(n, colours, anchor));
        }
    }
    out.sort();
    out
}

pub(crate) fn cube_levels(class: &ConceptClass) -> Vec<HashSet<(u64, u64)>> {
    let n = class.dim();
    let mut levels: Vec<HashSet<(u64, u64)>> = Vec::new();
    let base: HashSet<(u64, u64)> = class.words().iter().map(|&w| (0u64, w)).collect();
    if base.is_empty() {
        return levels;
    }
    levels.push(base);
    loop {
        let cur = levels.last().unwrap();
        let mut next = HashSet::new();
        for &(colours, anchor) in cur {
            let start = if colours == 0 {
                0
            } else {
                64 - colours.leading_zeros() as usize
            };
            for j in start..n {
                let bit = 1u64 << j;
                if anchor & bit == 0 && cur.contains(&(colours, anchor | bit)) {
                    next.insert((colours | bit, anchor));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    levels
}

/// Result of a shortest-path closedness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathCheck {
    Closed,
    /// A pair whose distance inside the class exceeds their Hamming distance.
    Violated(Vertex, Vertex),
}

impl PathCheck {
    pub fn is_closed(&self) -> bool {
        matches!(self, PathCheck::Closed)
    }
}

/// BFS from every vertex of the one-inclusion graph, comparing graph
/// distance with Hamming distance.
pub fn is_shortest_path_closed(class: &ConceptClass) -> PathCheck {
    let words = class.words();
    let n = class.dim();
    let m = words.len();
    if m <= 1 {
        return PathCheck::Closed;
    }
    let pos: std::collections::HashMap<u64, usize> =
        words.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let adj: Vec<Vec<usize>> = words
        .iter()
        .map(|&w| {
            (0..n)
                .filter_map(|i| pos.get(&(w ^ (1 << i))).copied())
                .collect()
        })
        .collect();
    let mut dist = vec![usize::MAX; m];
    let mut queue = std::collections::VecDeque::with_capacity(m);
    // scan from the lexicographically largest vertex down
    for s in (0..m).rev() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for t in (0..s).rev() {
            let h = (words[s] ^ words[t]).count_ones() as usize;
            if dist[t] != h {
                return PathCheck::Violated(class.vertex(words[s]), class.vertex(words[t]));
            }
        }
    }
    PathCheck::Closed
}
