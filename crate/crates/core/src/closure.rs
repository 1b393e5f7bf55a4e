//! Intersection closure, change of origin, and the k-close cube condition.
//!
//! The smallest VC dimension of an intersection closure over all origins
//! equals the least `k` admitting a k-close certificate. Both sides are
//! computed here independently: [`min_closure_vc_bruteforce`] sweeps origins,
//! [`min_k_close`] searches certificates.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::ConceptClass;
use crate::coords::{binomial, for_each_subset_of_size, CoordSet};
use crate::cube::{Cube, CubeRecord};
use crate::error::{Error, Result};
use crate::vc::vc_dimension;
use crate::vertex::{from_lex_key, full_mask, gather, scatter, Vertex};

/// Largest `n` accepted by the exhaustive origin and centre sweeps.
pub const SWEEP_LIMIT: usize = 16;

/// Smallest intersection-closed superset of a non-empty class.
pub fn intersection_closure(class: &ConceptClass) -> Result<ConceptClass> {
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    let mut seen: HashSet<u64> = class.words().iter().copied().collect();
    let mut all: Vec<u64> = class.words().to_vec();
    let mut frontier = all.clone();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for &f in &frontier {
            for &a in &all {
                let x = f & a;
                if seen.insert(x) {
                    fresh.push(x);
                }
            }
        }
        all.extend_from_slice(&fresh);
        frontier = fresh;
    }
    Ok(ConceptClass::from_words_unchecked(class.dim(), all))
}

/// XOR every vertex with `origin`, making `origin` the new all-zero point.
pub fn reorient(class: &ConceptClass, origin: &Vertex) -> Result<ConceptClass> {
    if origin.dim() != class.dim() {
        return Err(Error::DimensionMismatch {
            left: class.dim(),
            right: origin.dim(),
        });
    }
    Ok(class.xor_all(origin.bits()))
}

/// Minimum over all `2^n` origins of the VC dimension of the closure, with
/// the lexicographically first origin attaining it.
pub fn min_closure_vc_bruteforce(class: &ConceptClass) -> Result<(usize, Vertex)> {
    min_closure_vc_bruteforce_with_limit(class, SWEEP_LIMIT)
}

pub fn min_closure_vc_bruteforce_with_limit(
    class: &ConceptClass,
    limit: usize,
) -> Result<(usize, Vertex)> {
    let n = class.dim();
    if n > limit {
        return Err(Error::GuardExceeded {
            what: "origin sweep",
            n,
            limit,
        });
    }
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    let best = (0..1u64 << n)
        .into_par_iter()
        .map(|key| {
            let o = from_lex_key(key, n);
            let closed = intersection_closure(&class.xor_all(o)).expect("non-empty");
            (vc_dimension(&closed) as usize, key)
        })
        .min()
        .expect("at least one origin");
    Ok((best.0, Vertex::new_unchecked(from_lex_key(best.1, n), n)))
}

/// Witness that a class satisfies the k-close cube condition: a centre `v`
/// and, for every colour set of size `n - k - 1`, a cube with those colours
/// lying outside the class whose anchor differs from `v` in at most one
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCloseCertificate {
    pub k: usize,
    pub v: Vertex,
    pub cubes: Vec<Cube>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct CertificateRecord {
    k: usize,
    v: Vertex,
    cubes: Vec<CubeRecord>,
}

impl KCloseCertificate {
    pub fn to_json(&self) -> String {
        let rec = CertificateRecord {
            k: self.k,
            v: self.v,
            cubes: self.cubes.iter().map(CubeRecord::from).collect(),
        };
        serde_json::to_string_pretty(&rec).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: CertificateRecord = serde_json::from_str(text)?;
        let n = rec.v.dim();
        let cubes = rec
            .cubes
            .iter()
            .map(|c| c.to_cube(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(KCloseCertificate {
            k: rec.k,
            v: rec.v,
            cubes,
        })
    }

    /// Re-checks every certificate invariant against `class`; returns a
    /// description of the first failure.
    pub fn check(&self, class: &ConceptClass) -> std::result::Result<(), String> {
        let n = class.dim();
        if self.v.dim() != n {
            return Err(format!("centre has dimension {} not {n}", self.v.dim()));
        }
        let expected = if self.k + 1 > n {
            0
        } else {
            binomial(n as u64, (n - self.k - 1) as u64) as usize
        };
        if self.cubes.len() != expected {
            return Err(format!("{} cubes, expected {expected}", self.cubes.len()));
        }
        let mut colour_sets = HashSet::new();
        for c in &self.cubes {
            if c.ambient_dim() != n || c.dim() != n - self.k - 1 {
                return Err(format!("cube {c} has the wrong dimension"));
            }
            if !colour_sets.insert(c.colour_mask()) {
                return Err(format!("colour set {} repeats", c.colours()));
            }
            if !c.is_disjoint_from(class) {
                return Err(format!("cube {c} meets the class"));
            }
            let fixed = full_mask(n) & !c.colour_mask();
            let miss = ((c.anchor_bits() ^ self.v.bits()) & fixed).count_ones();
            if miss > 1 {
                return Err(format!("cube {c} is {miss} away from the centre"));
            }
        }
        Ok(())
    }
}

/// Searches for a k-close certificate. Centres are tried in descending
/// lexicographic order, starting from the all-ones vertex; per colour set
/// the anchor equal to the centre is preferred, then the one-flip anchors
/// in coordinate order. The first certificate wins.
pub fn k_close_condition(class: &ConceptClass, k: usize) -> Option<KCloseCertificate> {
    let n = class.dim();
    if k + 1 > n {
        return Some(KCloseCertificate {
            k,
            v: Vertex::ones(n),
            cubes: Vec::new(),
        });
    }
    let width = k + 1;
    // anchor domains in lexicographic order, each with the set of projected
    // images of the class
    let mut domains: Vec<(u64, Vec<u64>)> = Vec::new();
    for_each_subset_of_size(full_mask(n), width, |a| {
        let mut seen = vec![0u64; (1usize << width).div_ceil(64)];
        for &w in class.words() {
            let p = gather(w, a);
            seen[(p >> 6) as usize] |= 1 << (p & 63);
        }
        domains.push((a, seen));
        true
    });
    let occupied = |seen: &[u64], p: u64| (seen[(p >> 6) as usize] >> (p & 63)) & 1 == 1;

    let top = full_mask(n);
    let found = (0..1u64 << n).into_par_iter().find_map_first(|step| {
        let v = from_lex_key(top - step, n);
        let mut cubes = Vec::with_capacity(domains.len());
        for (a, seen) in &domains {
            let pv = gather(v, *a);
            let pick = std::iter::once(pv)
                .chain((0..width).map(|i| pv ^ (1 << i)))
                .find(|&p| !occupied(seen, p))?;
            let colours = full_mask(n) & !a;
            cubes.push(Cube::raw(n, colours, scatter(pick, *a)));
        }
        Some((v, cubes))
    })?;
    let (v, mut cubes) = found;
    cubes.sort();
    Some(KCloseCertificate {
        k,
        v: Vertex::new_unchecked(v, n),
        cubes,
    })
}

/// Least `k` with a k-close certificate, scanning upward from zero.
pub fn min_k_close(class: &ConceptClass) -> Result<usize> {
    Ok(min_k_close_certificate(class, SWEEP_LIMIT)?.k)
}

pub fn min_k_close_certificate(class: &ConceptClass, limit: usize) -> Result<KCloseCertificate> {
    let n = class.dim();
    if n > limit {
        return Err(Error::GuardExceeded {
            what: "k-close search",
            n,
            limit,
        });
    }
    Ok((0..=n)
        .find_map(|k| k_close_condition(class, k))
        .expect("k = n always holds vacuously"))
}

/// Coordinates used by a certificate cube's anchor.
pub fn anchor_domain(cube: &Cube) -> CoordSet {
    CoordSet::from_mask(full_mask(cube.ambient_dim()) & !cube.colour_mask())
}
