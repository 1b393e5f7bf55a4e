//! Unlabelled compression schemes: representation maps, their verification,
//! corner peeling, the cubical colour condition (ccc) machinery and the
//! compress / reconstruct protocol built on top.

mod ccc;
mod chain;
mod peel;
mod protocol;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::class::ConceptClass;
use crate::coords::CoordSet;
use crate::error::Result;
use crate::vertex::Vertex;

pub use ccc::{
    ccc_check, complementary_cubes, extend_scheme, sandwich_bijection, CccCertificate,
    SandwichBijection, SandwichTriple,
};
pub use chain::{
    build_scheme, build_scheme_traced, find_ccc_subclass, CccSubclass, ChainStep, SchemeTrace,
    Strategy, EXHAUSTIVE_MAX_DIM, EXHAUSTIVE_MAX_SIZE,
};
pub use peel::{corner_peel, is_corner};
pub use protocol::{compress_sample, reconstruct, SchemeCache};

/// An injection from concepts to coordinate sets of size at most `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationMap {
    n: usize,
    k: usize,
    entries: BTreeMap<Vertex, CoordSet>,
}

impl RepresentationMap {
    pub fn new(n: usize) -> Self {
        RepresentationMap {
            n,
            k: 0,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries<I: IntoIterator<Item = (Vertex, CoordSet)>>(n: usize, entries: I) -> Self {
        let mut r = Self::new(n);
        for (v, s) in entries {
            r.insert(v, s);
        }
        r
    }

    /// Adds or replaces an entry; the size bound grows to cover it.
    pub fn insert(&mut self, v: Vertex, rep: CoordSet) {
        self.k = self.k.max(rep.len());
        self.entries.insert(v, rep);
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Size bound: the largest representation set.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, v: &Vertex) -> Option<CoordSet> {
        self.entries.get(v).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vertex, &CoordSet)> {
        self.entries.iter()
    }

    /// Concept represented by `rep`, if any.
    pub fn invert(&self, rep: &CoordSet) -> Option<Vertex> {
        self.entries
            .iter()
            .find_map(|(v, s)| (s == rep).then_some(*v))
    }

    pub fn inverse(&self) -> HashMap<CoordSet, Vertex> {
        self.entries.iter().map(|(v, s)| (*s, *v)).collect()
    }

    pub fn to_json(&self) -> String {
        let rec = SchemeRecord {
            n: self.n,
            k: self.k,
            entries: self
                .entries
                .iter()
                .map(|(v, s)| EntryRecord {
                    vertex: *v,
                    rep: s.to_vec(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&rec).expect("scheme serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: SchemeRecord = serde_json::from_str(text)?;
        let mut r = RepresentationMap::new(rec.n);
        for e in rec.entries {
            if e.vertex.dim() != rec.n {
                return Err(crate::error::Error::DimensionMismatch {
                    left: rec.n,
                    right: e.vertex.dim(),
                });
            }
            r.insert(e.vertex, CoordSet::from_coords(e.rep, rec.n)?);
        }
        r.k = r.k.max(rec.k);
        Ok(r)
    }
}

#[derive(Serialize, Deserialize)]
struct SchemeRecord {
    n: usize,
    k: usize,
    entries: Vec<EntryRecord>,
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    vertex: Vertex,
    rep: Vec<usize>,
}

impl fmt::Display for RepresentationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n={} k={} entries={}",
            self.n,
            self.k,
            self.entries.len()
        )?;
        for (v, s) in &self.entries {
            writeln!(f, "{v} -> {s}")?;
        }
        Ok(())
    }
}

/// Why a map fails to be a representation map of a class.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SchemeViolation {
    #[error("map is over {found} coordinates but the class over {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("concept {0} has no representation")]
    MissingConcept(Vertex),
    #[error("{0} is mapped but not in the class")]
    ForeignEntry(Vertex),
    #[error("{vertex} maps to {size} coordinates, more than k = {k}")]
    Oversized {
        vertex: Vertex,
        size: usize,
        k: usize,
    },
    #[error("{0} and {1} share a representation")]
    NotInjective(Vertex, Vertex),
    #[error("{0} and {1} agree on the union of their representations")]
    Clash(Vertex, Vertex),
}

/// Checks that `r` is a representation map of size `k` for the class:
/// defined exactly on the class, injective, bounded by `k`, and
/// non-clashing (every pair differs on the union of their sets).
pub fn verify_scheme(
    class: &ConceptClass,
    r: &RepresentationMap,
    k: usize,
) -> std::result::Result<(), SchemeViolation> {
    if r.dim() != class.dim() {
        return Err(SchemeViolation::DimensionMismatch {
            expected: class.dim(),
            found: r.dim(),
        });
    }
    let mut reps = Vec::with_capacity(class.len());
    for v in class.vertices() {
        let s = r.get(&v).ok_or(SchemeViolation::MissingConcept(v))?;
        if s.len() > k {
            return Err(SchemeViolation::Oversized {
                vertex: v,
                size: s.len(),
                k,
            });
        }
        reps.push((v.bits(), s.mask()));
    }
    if r.len() != class.len() {
        let extra = r.entries().map(|(v, _)| *v).find(|v| !class.contains(v));
        if let Some(v) = extra {
            return Err(SchemeViolation::ForeignEntry(v));
        }
    }
    let mut owner: HashMap<u64, u64> = HashMap::with_capacity(reps.len());
    for &(w, s) in &reps {
        if let Some(&prev) = owner.get(&s) {
            return Err(SchemeViolation::NotInjective(
                class.vertex(prev),
                class.vertex(w),
            ));
        }
        owner.insert(s, w);
    }
    let clash = reps.par_iter().enumerate().find_map_first(|(i, &(a, sa))| {
        reps[i + 1..]
            .iter()
            .find(|&&(b, sb)| (a ^ b) & (sa | sb) == 0)
            .map(|&(b, _)| (a, b))
    });
    if let Some((a, b)) = clash {
        return Err(SchemeViolation::Clash(class.vertex(a), class.vertex(b)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    fn cs(n: usize, c: &[usize]) -> CoordSet {
        CoordSet::from_coords(c.iter().copied(), n).unwrap()
    }

    fn cls(n: usize, s: &str) -> ConceptClass {
        ConceptClass::parse_list(n, s).unwrap()
    }

    #[test]
    fn verify_examples() {
        let c = cls(2, "00 01 11");
        let r = RepresentationMap::from_entries(
            2,
            [
                (v("00"), cs(2, &[2])),
                (v("11"), cs(2, &[1])),
                (v("01"), cs(2, &[])),
            ],
        );
        assert_eq!(verify_scheme(&c, &r, 1), Ok(()));

        let dup = RepresentationMap::from_entries(
            2,
            [
                (v("00"), cs(2, &[2])),
                (v("11"), cs(2, &[2])),
                (v("01"), cs(2, &[])),
            ],
        );
        assert!(matches!(
            verify_scheme(&c, &dup, 1),
            Err(SchemeViolation::NotInjective(..))
        ));

        let pair = cls(2, "00 11");
        let empty =
            RepresentationMap::from_entries(2, [(v("00"), cs(2, &[])), (v("11"), cs(2, &[]))]);
        assert!(verify_scheme(&pair, &empty, 0).is_err());
    }

    #[test]
    fn clash_is_detected() {
        // injective but 00 and 01 agree on {1}
        let c = cls(2, "00 01");
        let r = RepresentationMap::from_entries(2, [(v("00"), cs(2, &[1])), (v("01"), cs(2, &[]))]);
        assert_eq!(
            verify_scheme(&c, &r, 1),
            Err(SchemeViolation::Clash(v("00"), v("01")))
        );
    }

    #[test]
    fn missing_oversized_and_foreign_entries() {
        let c = cls(2, "00 01");
        let r = RepresentationMap::from_entries(2, [(v("00"), cs(2, &[2]))]);
        assert_eq!(
            verify_scheme(&c, &r, 1),
            Err(SchemeViolation::MissingConcept(v("01")))
        );
        let r =
            RepresentationMap::from_entries(2, [(v("00"), cs(2, &[1, 2])), (v("01"), cs(2, &[]))]);
        assert!(matches!(
            verify_scheme(&c, &r, 1),
            Err(SchemeViolation::Oversized { .. })
        ));
        let r = RepresentationMap::from_entries(
            2,
            [
                (v("00"), cs(2, &[2])),
                (v("01"), cs(2, &[])),
                (v("11"), cs(2, &[1])),
            ],
        );
        assert_eq!(
            verify_scheme(&c, &r, 1),
            Err(SchemeViolation::ForeignEntry(v("11")))
        );
    }

    #[test]
    fn json_round_trip() {
        let r = RepresentationMap::from_entries(
            3,
            [
                (v("000"), cs(3, &[])),
                (v("100"), cs(3, &[1])),
                (v("110"), cs(3, &[1, 2])),
            ],
        );
        let json = r.to_json();
        assert!(json.contains("\"entries\""));
        assert_eq!(RepresentationMap::from_json(&json).unwrap(), r);
        assert_eq!(r.k(), 2);
        assert_eq!(r.invert(&cs(3, &[1])), Some(v("100")));
    }
}
