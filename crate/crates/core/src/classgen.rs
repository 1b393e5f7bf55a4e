//! Seeded generators for the class families used throughout the tests:
//! full cubes, Hamming balls, closed-below classes, random intersection
//! closures, unions of monomial subcubes, hyperrectangles over a point set,
//! trees, and grown extremal classes of VC dimension two.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::ConceptClass;
use crate::closure::intersection_closure;
use crate::coords::{binomial, for_each_subset_of_size};
use crate::error::{Error, Result};
use crate::vc::{classify, is_extremal, sauer_bound, vc_dimension};
use crate::vertex::{full_mask, MAX_DIM};

/// Generators refuse to materialise more vertices than this.
pub const MAX_GENERATED: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    FullCube,
    HammingBall,
    DownwardClosed,
    RandomIntersectionClosed,
    MonomialUnion,
    Hyperrectangle,
    Tree,
    RandomExtremalVc2,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::FullCube,
        Family::HammingBall,
        Family::DownwardClosed,
        Family::RandomIntersectionClosed,
        Family::MonomialUnion,
        Family::Hyperrectangle,
        Family::Tree,
        Family::RandomExtremalVc2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::FullCube => "full_cube",
            Family::HammingBall => "hamming_ball",
            Family::DownwardClosed => "downward_closed",
            Family::RandomIntersectionClosed => "random_intersection_closed",
            Family::MonomialUnion => "monomial_union",
            Family::Hyperrectangle => "hyperrectangle",
            Family::Tree => "tree",
            Family::RandomExtremalVc2 => "random_extremal_vc2",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown family {s:?}")))
    }
}

/// A fully parameterised generator call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GenSpec {
    FullCube {
        n: usize,
    },
    /// All vertices within distance `d` of a centre: the origin, or a
    /// seeded random vertex.
    HammingBall {
        n: usize,
        d: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Downward closure of a random set of vertices of weight at most `d`,
    /// each kept with probability `density`.
    DownwardClosed {
        n: usize,
        d: usize,
        density: f64,
        seed: u64,
    },
    /// Intersection closure of a random subset of the cube. With `max_vc`,
    /// sampled vertices that would push the closure past it are skipped.
    RandomIntersectionClosed {
        n: usize,
        density: f64,
        seed: u64,
        #[serde(default)]
        max_vc: Option<usize>,
    },
    /// Union of `terms` subcubes through the origin on pairwise disjoint
    /// random colour sets of size at most `d`.
    MonomialUnion {
        n: usize,
        d: usize,
        terms: usize,
        seed: u64,
    },
    /// Labellings of the points by axis-parallel boxes; coordinate `i` is
    /// the `i`-th point.
    Hyperrectangle {
        points: Vec<Vec<i64>>,
    },
    Tree {
        n: usize,
        seed: u64,
    },
    /// Grown one vertex at a time, keeping the class extremal of VC
    /// dimension at most two, until `density · (1 + n + C(n,2))` vertices.
    RandomExtremalVc2 {
        n: usize,
        density: f64,
        seed: u64,
    },
}

impl GenSpec {
    pub fn family(&self) -> Family {
        match self {
            GenSpec::FullCube { .. } => Family::FullCube,
            GenSpec::HammingBall { .. } => Family::HammingBall,
            GenSpec::DownwardClosed { .. } => Family::DownwardClosed,
            GenSpec::RandomIntersectionClosed { .. } => Family::RandomIntersectionClosed,
            GenSpec::MonomialUnion { .. } => Family::MonomialUnion,
            GenSpec::Hyperrectangle { .. } => Family::Hyperrectangle,
            GenSpec::Tree { .. } => Family::Tree,
            GenSpec::RandomExtremalVc2 { .. } => Family::RandomExtremalVc2,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            GenSpec::FullCube { n }
            | GenSpec::HammingBall { n, .. }
            | GenSpec::DownwardClosed { n, .. }
            | GenSpec::RandomIntersectionClosed { n, .. }
            | GenSpec::MonomialUnion { n, .. }
            | GenSpec::Tree { n, .. }
            | GenSpec::RandomExtremalVc2 { n, .. } => *n,
            GenSpec::Hyperrectangle { points } => points.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        let density_ok = |p: f64| (0.0..=1.0).contains(&p);
        match self {
            GenSpec::FullCube { n } => {
                if *n > 22 {
                    return bad(format!("full cube on {n} coordinates is too large"));
                }
            }
            GenSpec::HammingBall { n, d, .. } | GenSpec::DownwardClosed { n, d, .. } => {
                if d > n {
                    return bad(format!("d = {d} exceeds n = {n}"));
                }
                let size = sauer_bound(*n as i64, *d as i64)?;
                if size > MAX_GENERATED {
                    return bad(format!("ball of {size} vertices is too large"));
                }
            }
            _ => {}
        }
        match self {
            GenSpec::DownwardClosed { density, .. }
            | GenSpec::RandomIntersectionClosed { density, .. }
            | GenSpec::RandomExtremalVc2 { density, .. }
                if !density_ok(*density) =>
            {
                bad(format!("density {density} is outside [0, 1]"))
            }
            GenSpec::RandomIntersectionClosed { n, .. } if *n > 22 => {
                bad(format!("random subsets of the {n}-cube are too large"))
            }
            GenSpec::MonomialUnion { n, d, terms, .. } => {
                if *d == 0 || *terms == 0 {
                    bad("monomial union needs d >= 1 and terms >= 1".into())
                } else if *terms > *n {
                    bad(format!(
                        "{terms} disjoint non-empty terms do not fit in {n} coordinates"
                    ))
                } else {
                    Ok(())
                }
            }
            GenSpec::Hyperrectangle { points } => {
                let Some(first) = points.first() else {
                    return bad("hyperrectangle needs at least one point".into());
                };
                if first.is_empty() || points.iter().any(|p| p.len() != first.len()) {
                    return bad("points must share a positive dimension".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every vertex of weight at most `d`.
fn ball_words(n: usize, d: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for k in 0..=d {
        for_each_subset_of_size(full_mask(n), k, |m| {
            out.push(m);
            true
        });
    }
    out
}

fn downward_closure(n: usize, generators: &[u64]) -> ConceptClass {
    let mut seen: HashSet<u64> = HashSet::new();
    for &g in generators {
        let mut sub = g;
        loop {
            seen.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & g;
        }
    }
    seen.insert(0);
    ConceptClass::from_words_unchecked(n, seen.into_iter().collect())
}

fn hamming_ball(n: usize, d: usize, seed: Option<u64>) -> ConceptClass {
    let centre = seed.map_or(0, |s| rng(s).gen::<u64>() & full_mask(n));
    let words = ball_words(n, d).into_iter().map(|w| w ^ centre).collect();
    ConceptClass::from_words_unchecked(n, words)
}

fn downward_closed(n: usize, d: usize, density: f64, seed: u64) -> ConceptClass {
    let mut r = rng(seed);
    let picked: Vec<u64> = ball_words(n, d)
        .into_iter()
        .filter(|_| r.gen_bool(density))
        .collect();
    downward_closure(n, &picked)
}

fn random_intersection_closed(
    n: usize,
    density: f64,
    seed: u64,
    max_vc: Option<usize>,
) -> Result<ConceptClass> {
    let mut r = rng(seed);
    let mut sample: Vec<u64> = (0..1u64 << n).filter(|_| r.gen_bool(density)).collect();
    if sample.is_empty() {
        sample.push(r.gen::<u64>() & full_mask(n));
    }
    sample.shuffle(&mut r);
    let Some(cap) = max_vc else {
        return intersection_closure(&ConceptClass::from_words_unchecked(n, sample));
    };
    let mut kept: Vec<u64> = Vec::new();
    let mut current: Option<ConceptClass> = None;
    for w in sample {
        if current.as_ref().is_some_and(|c| c.contains_word(w)) {
            continue;
        }
        let mut trial = current
            .as_ref()
            .map_or_else(Vec::new, |c| c.words().to_vec());
        trial.push(w);
        let closed = intersection_closure(&ConceptClass::from_words_unchecked(n, trial))?;
        if vc_dimension(&closed) <= cap as i64 {
            kept.push(w);
            current = Some(closed);
        }
    }
    // a single vertex has VC dimension 0, so something is always kept
    Ok(current.expect("first sampled vertex is always accepted"))
}

fn monomial_union(n: usize, d: usize, terms: usize, seed: u64) -> ConceptClass {
    let mut r = rng(seed);
    let mut coords: Vec<usize> = (0..n).collect();
    coords.shuffle(&mut r);
    let mut generators = Vec::with_capacity(terms);
    let mut next = 0;
    for t in 0..terms {
        // leave at least one coordinate for each remaining term
        let room = n - next - (terms - t - 1);
        let size = r.gen_range(1..=d.min(room));
        let mask = coords[next..next + size]
            .iter()
            .fold(0u64, |m, &c| m | 1 << c);
        next += size;
        generators.push(mask);
    }
    downward_closure(n, &generators)
}

fn hyperrectangle(points: &[Vec<i64>]) -> Result<ConceptClass> {
    let n = points.len();
    let m = points[0].len();
    let axes: Vec<Vec<i64>> = (0..m)
        .map(|k| {
            let vals: BTreeSet<i64> = points.iter().map(|p| p[k]).collect();
            vals.into_iter().collect()
        })
        .collect();
    let boxes: u128 = axes
        .iter()
        .map(|a| binomial(a.len() as u64 + 1, 2))
        .product();
    if boxes > MAX_GENERATED {
        return Err(Error::InvalidSpec(format!(
            "{boxes} boxes is too many to enumerate"
        )));
    }
    // per axis, the labelling induced by each interval [lo, hi]
    let per_axis: Vec<Vec<u64>> = axes
        .iter()
        .enumerate()
        .map(|(k, vals)| {
            let mut out = Vec::new();
            for (i, &lo) in vals.iter().enumerate() {
                for &hi in &vals[i..] {
                    let mask = points
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| lo <= p[k] && p[k] <= hi)
                        .fold(0u64, |m, (j, _)| m | 1 << j);
                    out.push(mask);
                }
            }
            out
        })
        .collect();
    let mut labellings: HashSet<u64> = HashSet::from([0]);
    let mut partial: HashSet<u64> = HashSet::from([full_mask(n)]);
    for axis in &per_axis {
        partial = partial
            .iter()
            .flat_map(|&p| axis.iter().map(move |&a| p & a))
            .collect();
    }
    labellings.extend(partial);
    Ok(ConceptClass::from_words_unchecked(
        n,
        labellings.into_iter().collect(),
    ))
}

fn tree(n: usize, seed: u64) -> ConceptClass {
    let mut r = rng(seed);
    let root = r.gen::<u64>() & full_mask(n);
    let mut colours: Vec<usize> = (0..n).collect();
    colours.shuffle(&mut r);
    let mut words = vec![root];
    for c in colours {
        let parent = words[r.gen_range(0..words.len())];
        words.push(parent ^ 1 << c);
    }
    ConceptClass::from_words_unchecked(n, words)
}

fn random_extremal_vc2(n: usize, density: f64, seed: u64) -> ConceptClass {
    let mut r = rng(seed);
    let cap = sauer_bound(n as i64, 2.min(n) as i64).expect("valid sauer arguments");
    let target = ((density * cap as f64).round() as usize).max(1);
    let mut words = vec![r.gen::<u64>() & full_mask(n)];
    let mut members: HashSet<u64> = words.iter().copied().collect();
    while words.len() < target {
        let mut frontier: Vec<u64> = words
            .iter()
            .flat_map(|&w| (0..n).map(move |i| w ^ 1 << i))
            .filter(|u| !members.contains(u))
            .collect::<BTreeSet<u64>>()
            .into_iter()
            .collect();
        frontier.shuffle(&mut r);
        let grown = frontier.into_iter().find(|&u| {
            let mut trial = words.clone();
            trial.push(u);
            let c = ConceptClass::from_words_unchecked(n, trial);
            vc_dimension(&c) <= 2 && is_extremal(&c)
        });
        let Some(u) = grown else { break };
        words.push(u);
        members.insert(u);
    }
    ConceptClass::from_words_unchecked(n, words)
}

/// Builds the class described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<ConceptClass> {
    spec.validate()?;
    Ok(match *spec {
        GenSpec::FullCube { n } => ConceptClass::full(n)?,
        GenSpec::HammingBall { n, d, seed } => hamming_ball(n, d, seed),
        GenSpec::DownwardClosed {
            n,
            d,
            density,
            seed,
        } => downward_closed(n, d, density, seed),
        GenSpec::RandomIntersectionClosed {
            n,
            density,
            seed,
            max_vc,
        } => random_intersection_closed(n, density, seed, max_vc)?,
        GenSpec::MonomialUnion { n, d, terms, seed } => monomial_union(n, d, terms, seed),
        GenSpec::Hyperrectangle { ref points } => hyperrectangle(points)?,
        GenSpec::Tree { n, seed } => tree(n, seed),
        GenSpec::RandomExtremalVc2 { n, density, seed } => random_extremal_vc2(n, density, seed),
    })
}

/// Reads one integer point per row, comma separated, no header.
pub fn parse_points_csv(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: row + 1,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(row + 1, |p| p.line() as usize);
        let point = record
            .iter()
            .map(|field| {
                field.parse::<i64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("{field:?}: {e}"),
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        points.push(point);
    }
    Ok(points)
}

/// What a generated class is guaranteed to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Contract {
    /// Maximum of the given VC dimension.
    Maximum(usize),
    /// Intersection closed and extremal.
    ClosedExtremal,
    IntersectionClosed,
    /// Connected maximum class of VC dimension one with `n + 1` vertices.
    Tree,
    /// Extremal with VC dimension at most two.
    ExtremalVc2,
}

impl Contract {
    pub fn of(spec: &GenSpec) -> Contract {
        match *spec {
            GenSpec::FullCube { n } => Contract::Maximum(n),
            GenSpec::HammingBall { d, .. } => Contract::Maximum(d),
            GenSpec::DownwardClosed { .. } | GenSpec::MonomialUnion { .. } => {
                Contract::ClosedExtremal
            }
            GenSpec::RandomIntersectionClosed { .. } | GenSpec::Hyperrectangle { .. } => {
                Contract::IntersectionClosed
            }
            GenSpec::Tree { .. } => Contract::Tree,
            GenSpec::RandomExtremalVc2 { .. } => Contract::ExtremalVc2,
        }
    }

    /// Checks the contract with the analysis routines.
    pub fn check(self, class: &ConceptClass) -> std::result::Result<(), String> {
        let report = classify(class);
        let fail = |what: &str| Err(format!("{what}: {report}"));
        match self {
            Contract::Maximum(d) => {
                if !report.is_maximum || report.vc_dimension != d as i64 {
                    return fail(&format!("expected a maximum class of VC dimension {d}"));
                }
            }
            Contract::ClosedExtremal => {
                if !class.is_intersection_closed() || !report.is_extremal {
                    return fail("expected intersection closed and extremal");
                }
            }
            Contract::IntersectionClosed => {
                let closure = intersection_closure(class).map_err(|e| e.to_string())?;
                if closure != *class {
                    return fail("expected a fixpoint of intersection closure");
                }
            }
            Contract::Tree => {
                if !report.is_maximum || report.vc_dimension != 1 || class.len() != class.dim() + 1
                {
                    return fail("expected a VC-1 maximum class");
                }
            }
            Contract::ExtremalVc2 => {
                if !report.is_extremal || report.vc_dimension > 2 {
                    return fail("expected an extremal class of VC dimension at most 2");
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteEntry {
    pub spec: GenSpec,
    pub class: ConceptClass,
    pub contract: Contract,
}

/// A random spec of the family at test scale (`n ≤ 8`).
pub fn random_spec<R: Rng>(family: Family, r: &mut R) -> GenSpec {
    let seed = r.gen::<u64>();
    match family {
        Family::FullCube => GenSpec::FullCube {
            n: r.gen_range(1..=5),
        },
        Family::HammingBall => {
            let n = r.gen_range(3..=8);
            GenSpec::HammingBall {
                n,
                d: r.gen_range(1..=3),
                seed: Some(seed),
            }
        }
        Family::DownwardClosed => GenSpec::DownwardClosed {
            n: r.gen_range(3..=8),
            d: r.gen_range(1..=3),
            density: r.gen_range(0.1..0.5),
            seed,
        },
        Family::RandomIntersectionClosed => GenSpec::RandomIntersectionClosed {
            n: r.gen_range(3..=8),
            density: r.gen_range(0.05..0.25),
            seed,
            max_vc: Some(3),
        },
        Family::MonomialUnion => {
            let n = r.gen_range(3..=8);
            GenSpec::MonomialUnion {
                n,
                d: r.gen_range(1..=3),
                terms: r.gen_range(1..=3),
                seed,
            }
        }
        Family::Hyperrectangle => {
            let dims = r.gen_range(1..=2);
            let count = r.gen_range(3..=7);
            GenSpec::Hyperrectangle {
                points: (0..count)
                    .map(|_| (0..dims).map(|_| r.gen_range(0..5)).collect())
                    .collect(),
            }
        }
        Family::Tree => GenSpec::Tree {
            n: r.gen_range(2..=8),
            seed,
        },
        Family::RandomExtremalVc2 => GenSpec::RandomExtremalVc2 {
            n: r.gen_range(3..=7),
            density: r.gen_range(0.3..0.9),
            seed,
        },
    }
}

/// `counts[i].1` classes of family `counts[i].0` for each entry, in order.
/// Specs are drawn sequentially from the seed, then generated in parallel.
pub fn generate_suite(seed: u64, counts: &[(Family, usize)]) -> Result<Vec<SuiteEntry>> {
    let mut r = rng(seed);
    let specs: Vec<GenSpec> = counts
        .iter()
        .flat_map(|&(family, count)| std::iter::repeat_n(family, count))
        .map(|family| random_spec(family, &mut r))
        .collect();
    specs
        .into_par_iter()
        .map(|spec| {
            let class = generate(&spec)?;
            let contract = Contract::of(&spec);
            Ok(SuiteEntry {
                spec,
                class,
                contract,
            })
        })
        .collect()
}
