//! The cubical colour condition for a pair `D ⊊ C` of extremal classes and
//! the special-vertex extension of a representation map from `D` to `C`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::class::ConceptClass;
use crate::coords::CoordSet;
use crate::cube::{cube_levels, enumerate_cubes, Cube};
use crate::error::{Error, Result};
use crate::vc::is_extremal;
use crate::vertex::{full_mask, gather, lex_key, scatter, Vertex};

use super::{verify_scheme, RepresentationMap};

/// For each colour set of a non-maximal cube of `C`, a cube of `D` with
/// exactly those colours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CccCertificate {
    pub pairs: Vec<(CoordSet, Cube)>,
}

impl CccCertificate {
    pub fn check(&self, sub: &ConceptClass) -> bool {
        self.pairs
            .iter()
            .all(|(cols, cube)| cube.colours() == *cols && cube.is_within(sub))
    }
}

/// Lexicographically first cube of the class with colours exactly `mask`.
fn first_cube_with_colours(class: &ConceptClass, mask: u64) -> Option<Cube> {
    let need = 1usize << mask.count_ones();
    let mut fibres: HashMap<u64, usize> = HashMap::new();
    for &w in class.words() {
        *fibres.entry(w & !mask).or_default() += 1;
    }
    let n = class.dim();
    fibres
        .into_iter()
        .filter(|&(_, c)| c == need)
        .map(|(a, _)| a)
        .min_by_key(|&a| lex_key(a, n))
        .map(|a| Cube::raw(n, mask, a))
}

/// Colour sets of cubes of the class that sit inside a larger cube.
fn non_maximal_colour_sets(class: &ConceptClass) -> Vec<u64> {
    let levels = cube_levels(class);
    let n = class.dim();
    let mut out = BTreeSet::new();
    for (k, level) in levels.iter().enumerate() {
        let Some(next) = levels.get(k + 1) else {
            break;
        };
        for &(colours, anchor) in level {
            if out.contains(&(
                colours.count_ones(),
                CoordSet::from_mask(colours).to_vec(),
                colours,
            )) {
                continue;
            }
            let free = full_mask(n) & !colours;
            let extends = CoordSet::from_mask(free).iter().any(|c| {
                let bit = 1u64 << (c - 1);
                next.contains(&(colours | bit, anchor & !bit))
            });
            if extends {
                out.insert((
                    colours.count_ones(),
                    CoordSet::from_mask(colours).to_vec(),
                    colours,
                ));
            }
        }
    }
    out.into_iter().map(|(_, _, m)| m).collect()
}

fn check_pair(class: &ConceptClass, sub: &ConceptClass) -> Result<()> {
    class.check_dim(sub)?;
    if sub.is_empty() || sub.len() >= class.len() || !sub.is_subset(class) {
        return Err(Error::NotProperSubclass);
    }
    Ok(())
}

/// Tests the cubical colour condition for `sub ⊊ class`, both extremal.
pub fn ccc_check(class: &ConceptClass, sub: &ConceptClass) -> Result<Option<CccCertificate>> {
    check_pair(class, sub)?;
    if !is_extremal(class) {
        return Err(Error::NotExtremal("class"));
    }
    if !is_extremal(sub) {
        return Err(Error::NotExtremal("subclass"));
    }
    Ok(ccc_unchecked(class, sub))
}

pub(crate) fn ccc_unchecked(class: &ConceptClass, sub: &ConceptClass) -> Option<CccCertificate> {
    let mut pairs = Vec::new();
    for mask in non_maximal_colour_sets(class) {
        let witness = first_cube_with_colours(sub, mask)?;
        pairs.push((CoordSet::from_mask(mask), witness));
    }
    Some(CccCertificate { pairs })
}

/// A maximal cube `c` of `C` not inside `D`, its complementary cube `c*`
/// (maximal in the complement of `D`), and their single common vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichTriple {
    pub cube: Cube,
    pub complement_cube: Cube,
    pub special: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichBijection {
    pub triples: Vec<SandwichTriple>,
}

/// Pairs each maximal cube of `C` not contained in `D` with its special
/// vertex. Projecting `D` onto the cube's colours misses exactly one point
/// `w`; the fibre over `w` is the complementary cube and meets the cube in
/// the special vertex.
pub fn sandwich_bijection(class: &ConceptClass, sub: &ConceptClass) -> Result<SandwichBijection> {
    if ccc_check(class, sub)?.is_none() {
        return Err(Error::Sandwich("pair does not satisfy ccc".into()));
    }
    sandwich_unchecked(class, sub)
}

pub(crate) fn sandwich_unchecked(
    class: &ConceptClass,
    sub: &ConceptClass,
) -> Result<SandwichBijection> {
    let n = class.dim();
    let outside: Vec<Cube> = enumerate_cubes(class, true)
        .into_iter()
        .filter(|c| !c.is_within(sub))
        .collect();
    let mut triples = Vec::with_capacity(outside.len());
    for c in outside {
        let mask = c.colour_mask();
        let d = c.dim();
        let image: HashSet<u64> = sub.words().iter().map(|&w| gather(w, mask)).collect();
        let missing: Vec<u64> = (0..1u64 << d).filter(|p| !image.contains(p)).collect();
        let w = match missing.as_slice() {
            [w] => *w,
            [] => {
                return Err(Error::Sandwich(format!(
                    "projection of the subclass onto the colours of {c} is onto"
                )))
            }
            many => {
                return Err(Error::Sandwich(format!(
                    "projection of the subclass onto the colours of {c} misses {} points",
                    many.len()
                )))
            }
        };
        let lifted = scatter(w, mask);
        let complement_cube = Cube::raw(n, full_mask(n) & !mask, lifted);
        let special = Vertex::new_unchecked(c.anchor_bits() | lifted, n);
        triples.push(SandwichTriple {
            cube: c,
            complement_cube,
            special,
        });
    }

    // the special vertices must be exactly C \ D, once each
    let specials: HashSet<u64> = triples.iter().map(|t| t.special.bits()).collect();
    let removed: HashSet<u64> = class
        .words()
        .iter()
        .copied()
        .filter(|&w| !sub.contains_word(w))
        .collect();
    if specials.len() != triples.len() || specials != removed {
        return Err(Error::Sandwich(format!(
            "{} maximal cubes outside the subclass but {} removed vertices ({} distinct special vertices)",
            triples.len(),
            removed.len(),
            specials.len()
        )));
    }
    Ok(SandwichBijection { triples })
}

/// Maximal cubes of the complement of `sub` that meet `class`.
pub fn complementary_cubes(class: &ConceptClass, sub: &ConceptClass) -> Result<Vec<Cube>> {
    class.check_dim(sub)?;
    let outside = sub.complement()?;
    Ok(enumerate_cubes(&outside, true)
        .into_iter()
        .filter(|c| class.words().iter().any(|&w| c.contains_word(w)))
        .collect())
}

/// Extends a representation map of `D` to one of `C` by sending each
/// special vertex to the colours of its maximal cube.
pub fn extend_scheme(
    class: &ConceptClass,
    sub: &ConceptClass,
    sub_map: &RepresentationMap,
) -> Result<RepresentationMap> {
    verify_scheme(sub, sub_map, sub_map.k())?;
    let bijection = sandwich_bijection(class, sub)?;
    extend_with(class, sub_map, &bijection)
}

pub(crate) fn extend_with(
    class: &ConceptClass,
    sub_map: &RepresentationMap,
    bijection: &SandwichBijection,
) -> Result<RepresentationMap> {
    let mut r = sub_map.clone();
    for t in &bijection.triples {
        r.insert(t.special, t.cube.colours());
    }
    verify_scheme(class, &r, r.k())?;
    Ok(r)
}
