//! Shortest-path closure of an intersection-closed class and verification of
//! the embedding guarantees: the output is intersection closed, shortest-path
//! closed and extremal, with VC dimension at most eleven times the input's.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::class::ConceptClass;
use crate::coords::CoordSet;
use crate::cube::{is_shortest_path_closed, PathCheck};
use crate::error::{Error, Result};
use crate::vc::{is_extremal, sauer_bound, vc_dimension};
use crate::vertex::{gather, Vertex};

/// VC growth factor guaranteed by the embedding.
pub const GROWTH_FACTOR: usize = 11;

/// A permutation of `[n]`, listed 1-based: `order[0]` is cleared first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateOrdering(Vec<usize>);

impl CoordinateOrdering {
    pub fn identity(n: usize) -> Self {
        CoordinateOrdering((1..=n).collect())
    }

    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n + 1];
        for &c in &order {
            if c == 0 || c > n || seen[c] {
                return Err(Error::InvalidOrdering(format!(
                    "{order:?} is not a permutation of 1..={n}"
                )));
            }
            seen[c] = true;
        }
        Ok(CoordinateOrdering(order))
    }

    pub fn shuffled(n: usize, seed: u64) -> Self {
        let mut order: Vec<usize> = (1..=n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        CoordinateOrdering(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    fn bit_order(&self) -> Vec<u64> {
        self.0.iter().map(|&c| 1u64 << (c - 1)).collect()
    }
}

fn walk(v: u64, w: u64, order: &[u64], mut visit: impl FnMut(u64)) {
    let mut cur = v;
    visit(cur);
    let mut j = 0;
    while cur != w {
        while cur & order[j] == w & order[j] {
            j += 1;
        }
        cur &= !order[j];
        visit(cur);
    }
}

/// The path from `v` down to `w` that repeatedly clears the earliest
/// coordinate (under `ord`) where the current vertex still exceeds `w`.
/// Both endpoints are included.
pub fn lambda_path(v: &Vertex, w: &Vertex, ord: &CoordinateOrdering) -> Result<Vec<Vertex>> {
    if v.dim() != w.dim() || ord.len() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: v.dim(),
            right: if v.dim() != w.dim() {
                w.dim()
            } else {
                ord.len()
            },
        });
    }
    if w.bits() & !v.bits() != 0 {
        return Err(Error::NotBelow {
            below: *w,
            above: *v,
        });
    }
    let n = v.dim();
    let mut path = Vec::with_capacity((v.bits() ^ w.bits()).count_ones() as usize + 1);
    walk(v.bits(), w.bits(), &ord.bit_order(), |x| {
        path.push(Vertex::new_unchecked(x, n))
    });
    Ok(path)
}

/// Adds every vertex of `λ(v, w)` for all pairs `w < v` of the input.
/// The input must be intersection closed.
pub fn shortest_path_closure(
    class: &ConceptClass,
    ord: &CoordinateOrdering,
) -> Result<ConceptClass> {
    if ord.len() != class.dim() {
        return Err(Error::DimensionMismatch {
            left: class.dim(),
            right: ord.len(),
        });
    }
    if let Some((a, b)) = class.intersection_witness() {
        return Err(Error::NotIntersectionClosed(
            class.vertex(a),
            class.vertex(b),
        ));
    }
    let order = ord.bit_order();
    let words = class.words();
    let mut out: HashSet<u64> = words.iter().copied().collect();
    for &v in words {
        for &w in words {
            if w != v && w & !v == 0 {
                walk(v, w, &order, |x| {
                    out.insert(x);
                });
            }
        }
    }
    Ok(ConceptClass::from_words_unchecked(
        class.dim(),
        out.into_iter().collect(),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub d: i64,
    pub d_star: i64,
    pub size: usize,
    pub size_star: usize,
    pub intersection_closed: bool,
    pub shortest_path_closed: bool,
    pub extremal: bool,
    pub ratio: f64,
    pub within_vc_bound: bool,
    pub within_size_bound: bool,
    /// One line per failed guarantee, with a witness where there is one.
    pub violations: Vec<String>,
}

impl EmbeddingReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for EmbeddingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d={} d*={} ratio={:.3}", self.d, self.d_star, self.ratio)?;
        writeln!(f, "|C|={} |C*|={}", self.size, self.size_star)?;
        writeln!(f, "intersection_closed={}", self.intersection_closed)?;
        writeln!(f, "shortest_path_closed={}", self.shortest_path_closed)?;
        writeln!(f, "extremal={}", self.extremal)?;
        writeln!(f, "vc_bound={}", self.within_vc_bound)?;
        writeln!(f, "size_bound={}", self.within_size_bound)?;
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

/// Evaluates every guarantee of the embedding `class ⊆ embedded`.
pub fn verify_embedding(class: &ConceptClass, embedded: &ConceptClass) -> Result<EmbeddingReport> {
    class.check_dim(embedded)?;
    if let Some(&w) = class.words().iter().find(|&&w| !embedded.contains_word(w)) {
        return Err(Error::NotContained(class.vertex(w)));
    }
    let mut violations = Vec::new();

    let d = vc_dimension(class);
    let d_star = vc_dimension(embedded);

    let ic = embedded.intersection_witness();
    if let Some((a, b)) = ic {
        violations.push(format!(
            "not intersection closed: {} ⊙ {} missing",
            embedded.vertex(a),
            embedded.vertex(b)
        ));
    }
    let spc = is_shortest_path_closed(embedded);
    if let PathCheck::Violated(a, b) = &spc {
        violations.push(format!("not shortest-path closed: no geodesic {a} -> {b}"));
    }
    let extremal = is_extremal(embedded);
    if !extremal {
        violations.push("not extremal".into());
    }
    let within_vc_bound = d_star <= (GROWTH_FACTOR as i64) * d.max(0);
    if !within_vc_bound {
        violations.push(format!("d* = {d_star} exceeds 11 * {d}"));
    }
    let size_cap = embedded.dim() as u128 * (class.len() as u128).pow(2);
    let within_size_bound = (embedded.len() as u128) <= size_cap.max(class.len() as u128);
    if !within_size_bound {
        violations.push(format!(
            "|C*| = {} exceeds n|C|^2 = {size_cap}",
            embedded.len()
        ));
    }
    let ratio = if d > 0 { d_star as f64 / d as f64 } else { 1.0 };
    Ok(EmbeddingReport {
        d,
        d_star,
        size: class.len(),
        size_star: embedded.len(),
        intersection_closed: ic.is_none(),
        shortest_path_closed: spc.is_closed(),
        extremal,
        ratio,
        within_vc_bound,
        within_size_bound,
        violations,
    })
}

/// `|p(C*)|` against `11d · |p(C)|² / 2` for the projection `p` onto `coords`.
/// Returns `(observed, bound)`, with the bound doubled to stay in integers:
/// the check is `2 * observed <= bound2`.
pub fn projected_size_check(
    class: &ConceptClass,
    embedded: &ConceptClass,
    coords: &CoordSet,
    d: usize,
) -> Result<(usize, u128)> {
    let pc = class.project(coords)?;
    let pcs: HashSet<u64> = embedded
        .words()
        .iter()
        .map(|&w| gather(w, coords.mask()))
        .collect();
    let bound2 = (GROWTH_FACTOR * d) as u128 * (pc.len() as u128).pow(2);
    Ok((pcs.len(), bound2))
}

/// One row of the composite projection bound used for small `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeBound {
    pub d: usize,
    /// `Σ_{i≤d} C(11d, i)`: the largest possible projection of a VC-`d` class
    /// onto `11d` coordinates.
    pub sauer: u128,
    /// `11d · sauer² / 2`.
    pub composite: u128,
    /// `2^{11d}`.
    pub cube: u128,
}

impl CompositeBound {
    pub fn holds(&self) -> bool {
        self.composite < self.cube
    }
}

/// The composite bound for a given `d`; `sauer² · 11d` is always even for
/// the `d` this is used with, so the halving is exact.
pub fn composite_projection_bound(d: usize) -> CompositeBound {
    let m = GROWTH_FACTOR * d;
    let sauer = sauer_bound(m as i64, d as i64).expect("d <= 11d");
    CompositeBound {
        d,
        sauer,
        composite: m as u128 * sauer * sauer / 2,
        cube: 1u128 << m,
    }
}
