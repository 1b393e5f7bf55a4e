//! ccc chains `C ⊋ D ⊋ … ⊋ B` of extremal classes, descending until the
//! VC dimension drops to one, and the scheme obtained by peeling the base
//! and extending back up through each pair.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::class::ConceptClass;
use crate::cube::{enumerate_cubes, one_inclusion_edges};
use crate::error::{Error, Result};
use crate::vc::{is_extremal, vc_dimension};
use crate::vertex::{lex_key, Vertex};

use super::ccc::{ccc_unchecked, extend_with, sandwich_unchecked, CccCertificate};
use super::peel::{corner_colours, corner_peel};
use super::RepresentationMap;

/// Exhaustive subclass search only runs on classes this small.
pub const EXHAUSTIVE_MAX_DIM: usize = 6;
pub const EXHAUSTIVE_MAX_SIZE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Remove the smallest component left after deleting one colour's edges.
    Splitting,
    /// Remove a single corner vertex.
    CornerReduction,
    /// Search all subsets, largest first.
    Exhaustive,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Splitting => "splitting",
            Strategy::CornerReduction => "corner-reduction",
            Strategy::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CccSubclass {
    pub sub: ConceptClass,
    pub strategy: Strategy,
    pub certificate: CccCertificate,
}

/// One pair of the chain, summarised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub strategy: Strategy,
    pub class_size: usize,
    pub sub_size: usize,
    pub vc_dimension: i64,
    /// Largest cube dimension among the maximal cubes of the class that
    /// leave the subclass; this is the size of the new representations.
    pub max_new_rep: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeTrace {
    pub steps: Vec<ChainStep>,
    pub base_size: usize,
    pub base_vc_dimension: i64,
    pub k: usize,
}

fn accept(class: &ConceptClass, sub: ConceptClass, strategy: Strategy) -> Option<CccSubclass> {
    if sub.is_empty() || !is_extremal(&sub) {
        return None;
    }
    let certificate = ccc_unchecked(class, &sub)?;
    Some(CccSubclass {
        sub,
        strategy,
        certificate,
    })
}

/// Connected components of the one-inclusion graph after deleting every
/// edge of colour `x`.
fn components_without_colour(class: &ConceptClass, x: usize) -> Vec<Vec<u64>> {
    let words = class.words();
    let members: HashSet<u64> = words.iter().copied().collect();
    let n = class.dim();
    let mut seen: HashSet<u64> = HashSet::with_capacity(words.len());
    let mut out = Vec::new();
    for &start in words {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(w) = stack.pop() {
            for c in (1..=n).filter(|&c| c != x) {
                let u = w ^ (1u64 << (c - 1));
                if members.contains(&u) && seen.insert(u) {
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_by_key(|&w| lex_key(w, n));
        out.push(comp);
    }
    out
}

fn by_splitting(class: &ConceptClass) -> Option<CccSubclass> {
    let n = class.dim();
    let colours: Vec<usize> = {
        let mut cs: Vec<usize> = one_inclusion_edges(class)
            .iter()
            .map(|e| e.colour)
            .collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    };
    let mut candidates: Vec<(usize, usize, u64, Vec<u64>)> = Vec::new();
    for &x in &colours {
        let comps = components_without_colour(class, x);
        if comps.len() < 2 {
            continue;
        }
        for comp in comps {
            candidates.push((comp.len(), x, lex_key(comp[0], n), comp));
        }
    }
    candidates.sort_by_key(|a| (a.0, a.1, a.2));
    for (_, _, _, comp) in candidates {
        let removed: HashSet<u64> = comp.into_iter().collect();
        let kept = class
            .words()
            .iter()
            .copied()
            .filter(|w| !removed.contains(w))
            .collect();
        if let Some(found) = accept(
            class,
            ConceptClass::from_words_unchecked(n, kept),
            Strategy::Splitting,
        ) {
            return Some(found);
        }
    }
    None
}

fn by_corner_reduction(class: &ConceptClass) -> Option<CccSubclass> {
    let n = class.dim();
    let members: HashSet<u64> = class.words().iter().copied().collect();
    class
        .words()
        .iter()
        .rev()
        .filter(|&&w| corner_colours(&members, w, n).is_some())
        .find_map(|&w| {
            accept(
                class,
                class.without(&Vertex::new_unchecked(w, n)),
                Strategy::CornerReduction,
            )
        })
}

fn by_exhaustion(class: &ConceptClass) -> Option<CccSubclass> {
    if class.dim() > EXHAUSTIVE_MAX_DIM || class.len() > EXHAUSTIVE_MAX_SIZE {
        return None;
    }
    let n = class.dim();
    let words = class.words();
    let m = words.len();
    for size in (1..m).rev() {
        let mut found = None;
        crate::coords::for_each_subset_of_size((1u64 << m) - 1, size, |pick| {
            // pick selects positions in canonical order, bit i = position i
            let kept = (0..m)
                .filter(|&i| pick >> i & 1 == 1)
                .map(|i| words[i])
                .collect();
            found = accept(
                class,
                ConceptClass::from_words_unchecked(n, kept),
                Strategy::Exhaustive,
            );
            found.is_none()
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// A proper extremal subclass satisfying ccc with `class`, trying
/// splitting, then corner reduction, then (for small classes) exhaustive
/// search. `Ok(None)` when every strategy fails.
pub fn find_ccc_subclass(class: &ConceptClass) -> Result<Option<CccSubclass>> {
    if class.len() < 2 {
        return Err(Error::TooSmall(2));
    }
    if !is_extremal(class) {
        return Err(Error::NotExtremal("class"));
    }
    Ok(by_splitting(class)
        .or_else(|| by_corner_reduction(class))
        .or_else(|| by_exhaustion(class)))
}

/// Builds a representation map for an extremal class through a ccc chain.
pub fn build_scheme(class: &ConceptClass) -> Result<RepresentationMap> {
    build_scheme_traced(class).map(|(r, _)| r)
}

pub fn build_scheme_traced(class: &ConceptClass) -> Result<(RepresentationMap, SchemeTrace)> {
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    if !is_extremal(class) {
        return Err(Error::NotExtremal("class"));
    }
    let mut chain = vec![class.clone()];
    let mut steps = Vec::new();
    loop {
        let top = chain.last().expect("chain is never empty");
        let d = vc_dimension(top);
        if d <= 1 {
            break;
        }
        let Some(found) = find_ccc_subclass(top)? else {
            return Err(Error::NoCccChain { stuck: top.clone() });
        };
        let max_new_rep = enumerate_cubes(top, true)
            .iter()
            .filter(|c| !c.is_within(&found.sub))
            .map(|c| c.dim())
            .max()
            .unwrap_or(0);
        steps.push(ChainStep {
            strategy: found.strategy,
            class_size: top.len(),
            sub_size: found.sub.len(),
            vc_dimension: d,
            max_new_rep,
        });
        chain.push(found.sub);
    }

    let base = chain.last().expect("chain is never empty");
    let mut r = corner_peel(base).ok_or_else(|| Error::NoCccChain {
        stuck: base.clone(),
    })?;
    let base_size = base.len();
    let base_vc_dimension = vc_dimension(base);
    for pair in chain.windows(2).rev() {
        let (upper, lower) = (&pair[0], &pair[1]);
        let bijection = sandwich_unchecked(upper, lower)?;
        r = extend_with(upper, &r, &bijection)?;
    }
    let k = r.k();
    Ok((
        r,
        SchemeTrace {
            steps,
            base_size,
            base_vc_dimension,
            k,
        },
    ))
}
