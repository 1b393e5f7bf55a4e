//! Shattering, VC dimension, and the maximum / extremal classification.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::class::ConceptClass;
use crate::coords::{binomial, CoordSet};
use crate::cube::Cube;
use crate::error::{Error, Result};
use crate::vertex::{full_mask, gather};

/// Does the class shatter the coordinates in `mask`?
pub(crate) fn shatters(class: &ConceptClass, mask: u64) -> bool {
    let k = mask.count_ones();
    if k >= 63 || (class.len() as u128) < (1u128 << k) {
        return false;
    }
    let need = 1usize << k;
    if k <= 20 {
        let mut seen = vec![false; need];
        let mut count = 0;
        for &w in class.words() {
            let p = gather(w, mask) as usize;
            if !seen[p] {
                seen[p] = true;
                count += 1;
                if count == need {
                    return true;
                }
            }
        }
        false
    } else {
        let set: HashSet<u64> = class.words().iter().map(|&w| gather(w, mask)).collect();
        set.len() == need
    }
}

/// Is there a cube of the class whose colours are exactly `mask`?
pub(crate) fn has_cube_type(class: &ConceptClass, mask: u64) -> bool {
    let k = mask.count_ones();
    if k >= 63 || (class.len() as u128) < (1u128 << k) {
        return false;
    }
    let need = 1u32 << k;
    let mut fibres: HashMap<u64, u32> = HashMap::new();
    for &w in class.words() {
        let c = fibres.entry(w & !mask).or_default();
        *c += 1;
        if *c == need {
            return true;
        }
    }
    false
}

/// Level-wise search over a downward-closed family of coordinate sets: a set
/// is only tested once all its one-smaller subsets have passed.
fn downward_closed_family(n: usize, nonempty: bool, test: impl Fn(u64) -> bool) -> Vec<CoordSet> {
    if !nonempty {
        return Vec::new();
    }
    let mut out = vec![CoordSet::EMPTY];
    let mut level: Vec<u64> = vec![0];
    while !level.is_empty() {
        let members: HashSet<u64> = level.iter().copied().collect();
        let mut next = Vec::new();
        for &s in &level {
            let start = if s == 0 {
                0
            } else {
                64 - s.leading_zeros() as usize
            };
            for j in start..n {
                let cand = s | 1 << j;
                let mut rest = s;
                let all_subsets = loop {
                    if rest == 0 {
                        break true;
                    }
                    let bit = rest & rest.wrapping_neg();
                    rest &= rest - 1;
                    if !members.contains(&(cand & !bit)) {
                        break false;
                    }
                };
                if all_subsets && test(cand) {
                    next.push(cand);
                }
            }
        }
        let mut sorted: Vec<CoordSet> = next.iter().map(|&m| CoordSet::from_mask(m)).collect();
        sorted.sort_by_key(|s| s.canonical_key());
        out.extend(sorted);
        level = next;
    }
    out
}

/// Every coordinate set the class shatters, by size then lexicographically.
pub fn shattered_sets(class: &ConceptClass) -> Vec<CoordSet> {
    downward_closed_family(class.dim(), !class.is_empty(), |m| shatters(class, m))
}

/// Distinct colour sets of cubes in the class, by size then lexicographically.
pub fn cube_types(class: &ConceptClass) -> Vec<CoordSet> {
    downward_closed_family(class.dim(), !class.is_empty(), |m| has_cube_type(class, m))
}

/// Largest shattered set size; `-1` for the empty class.
pub fn vc_dimension(class: &ConceptClass) -> i64 {
    if class.is_empty() {
        return -1;
    }
    // Scan sizes upward; downward closure means the first size with no
    // shattered set ends the search.
    let n = class.dim();
    let mut level: Vec<u64> = vec![0];
    let mut d = 0i64;
    loop {
        let members: HashSet<u64> = level.iter().copied().collect();
        let mut next = Vec::new();
        for &s in &level {
            let start = if s == 0 {
                0
            } else {
                64 - s.leading_zeros() as usize
            };
            for j in start..n {
                let cand = s | 1 << j;
                let ok = CoordSet::from_mask(s)
                    .iter()
                    .all(|c| members.contains(&(cand & !(1u64 << (c - 1)))));
                if ok && shatters(class, cand) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            return d;
        }
        d += 1;
        level = next;
    }
}

/// `Σ_{i=0}^{d} C(n, i)`.
pub fn sauer_bound(n: i64, d: i64) -> Result<u128> {
    if n < 0 || d < 0 || d > n {
        return Err(Error::InvalidSpec(format!(
            "sauer bound needs 0 <= d <= n, got n={n} d={d}"
        )));
    }
    Ok((0..=d).map(|i| binomial(n as u64, i as u64)).sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub n: usize,
    pub cardinality: usize,
    pub vc_dimension: i64,
    pub shattered_count: usize,
    pub cube_type_count: usize,
    pub is_maximum: bool,
    pub is_extremal: bool,
    pub sauer_bound_value: u128,
}

impl ClassReport {
    /// Flat `key=value` lines.
    pub fn to_key_values(&self) -> String {
        format!(
            "n={}\ncardinality={}\nvc_dimension={}\nshattered_count={}\ncube_type_count={}\nsauer_bound={}\nmaximum={}\nextremal={}\n",
            self.n,
            self.cardinality,
            self.vc_dimension,
            self.shattered_count,
            self.cube_type_count,
            self.sauer_bound_value,
            self.is_maximum,
            self.is_extremal
        )
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} |C|={} d={}",
            self.n, self.cardinality, self.vc_dimension
        )?;
        if self.is_maximum {
            write!(f, " maximum")?;
        }
        write!(
            f,
            " {}",
            if self.is_extremal {
                "extremal"
            } else {
                "non-extremal"
            }
        )?;
        write!(
            f,
            " (shattered={} cube-types={} sauer={})",
            self.shattered_count, self.cube_type_count, self.sauer_bound_value
        )
    }
}

/// Full classification. Extremality is decided per shattered set by looking
/// for a cube with exactly those colours; in debug builds the cardinality
/// equalities are cross-checked against that verdict.
pub fn classify(class: &ConceptClass) -> ClassReport {
    let shattered = shattered_sets(class);
    let types = cube_types(class);
    let d = shattered.iter().map(|s| s.len() as i64).max().unwrap_or(-1);
    let sauer = if d < 0 {
        0
    } else {
        sauer_bound(class.dim() as i64, d).expect("d <= n")
    };
    let type_set: HashSet<u64> = types.iter().map(|t| t.mask()).collect();
    let is_extremal = !class.is_empty() && shattered.iter().all(|s| type_set.contains(&s.mask()));
    let report = ClassReport {
        n: class.dim(),
        cardinality: class.len(),
        vc_dimension: d,
        shattered_count: shattered.len(),
        cube_type_count: types.len(),
        is_maximum: !class.is_empty() && class.len() as u128 == sauer,
        is_extremal,
        sauer_bound_value: sauer,
    };
    debug_assert!(
        class.is_empty()
            || (report.is_extremal
                == (report.cardinality == report.shattered_count
                    && report.cardinality == report.cube_type_count)),
        "sandwich counting disagrees with the direct extremality check: {report}"
    );
    report
}

pub fn is_extremal(class: &ConceptClass) -> bool {
    if class.is_empty() {
        return false;
    }
    // Every shattered set must also be a cube type; both families are
    // downward closed, so searching the shattered family and testing each
    // member suffices.
    let n = class.dim();
    let mut level: Vec<u64> = vec![0];
    while !level.is_empty() {
        let members: HashSet<u64> = level.iter().copied().collect();
        let mut next = Vec::new();
        for &s in &level {
            let start = if s == 0 {
                0
            } else {
                64 - s.leading_zeros() as usize
            };
            for j in start..n {
                let cand = s | 1 << j;
                let ok = CoordSet::from_mask(s)
                    .iter()
                    .all(|c| members.contains(&(cand & !(1u64 << (c - 1)))));
                if ok && shatters(class, cand) {
                    if !has_cube_type(class, cand) {
                        return false;
                    }
                    next.push(cand);
                }
            }
        }
        level = next;
    }
    true
}

/// Is `cubes` a complete collection of `d`-cubes in `{0,1}^n`: exactly
/// `C(n, d)` cubes whose colour sets run over every `d`-subset once?
pub fn is_complete_collection(cubes: &[Cube], n: usize, d: usize) -> Result<bool> {
    if let Some(c) = cubes.iter().find(|c| c.dim() != d) {
        return Err(Error::InvalidSpec(format!(
            "complete collection needs {d}-cubes, found a {}-cube",
            c.dim()
        )));
    }
    if let Some(c) = cubes.iter().find(|c| c.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: c.ambient_dim(),
        });
    }
    if cubes.len() as u128 != binomial(n as u64, d as u64) {
        return Ok(false);
    }
    let colours: HashSet<u64> = cubes.iter().map(|c| c.colour_mask()).collect();
    Ok(colours.len() == cubes.len() && colours.iter().all(|&m| m & !full_mask(n) == 0))
}
