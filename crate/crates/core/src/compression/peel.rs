use std::collections::HashSet;

use crate::class::ConceptClass;
use crate::coords::CoordSet;
use crate::vertex::Vertex;

use super::{verify_scheme, RepresentationMap};

/// Colours of the unique maximal cube through `w`, if `w` lies in exactly
/// one maximal cube of `members`.
///
/// Every cube through `w` uses only the directions in which `w` has a
/// neighbour, so `w` is in a unique maximal cube exactly when the cube
/// spanned by all of those directions is present.
pub(crate) fn corner_colours(members: &HashSet<u64>, w: u64, n: usize) -> Option<u64> {
    let free: u64 = (0..n)
        .map(|i| 1u64 << i)
        .filter(|&b| members.contains(&(w ^ b)))
        .fold(0, |a, b| a | b);
    let mut sub = free;
    loop {
        if !members.contains(&(w ^ sub)) {
            return None;
        }
        if sub == 0 {
            return Some(free);
        }
        sub = (sub - 1) & free;
    }
}

/// `Some(colours)` when `v` lies in a unique maximal cube of the class.
pub fn is_corner(class: &ConceptClass, v: &Vertex) -> Option<CoordSet> {
    if !class.contains(v) {
        return None;
    }
    let members: HashSet<u64> = class.words().iter().copied().collect();
    corner_colours(&members, v.bits(), class.dim()).map(CoordSet::from_mask)
}

/// Corner peeling: repeatedly remove the lexicographically smallest vertex
/// lying in a unique maximal cube, mapping it to that cube's colours.
///
/// Returns `None` if the process gets stuck, or if the finished map fails
/// [`verify_scheme`] at its own size bound; a returned map is always valid.
pub fn corner_peel(class: &ConceptClass) -> Option<RepresentationMap> {
    let n = class.dim();
    let order = class.words();
    let mut members: HashSet<u64> = order.iter().copied().collect();
    let mut alive = vec![true; order.len()];
    let mut r = RepresentationMap::new(n);
    for _ in 0..order.len() {
        let (i, colours) = order
            .iter()
            .enumerate()
            .filter(|(i, _)| alive[*i])
            .find_map(|(i, &w)| corner_colours(&members, w, n).map(|c| (i, c)))?;
        alive[i] = false;
        members.remove(&order[i]);
        r.insert(class.vertex(order[i]), CoordSet::from_mask(colours));
    }
    verify_scheme(class, &r, r.k()).ok()?;
    Some(r)
}
