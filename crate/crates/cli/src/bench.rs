//! The closure-growth sweep: generated intersection-closed classes, their
//! shortest-path closures, and how far the VC dimension grows.

use std::io::Write;
use std::time::Instant;

use cubecomp::classgen::{generate, Family, GenSpec};
use cubecomp::spc::{
    composite_projection_bound, shortest_path_closure, verify_embedding, CompositeBound,
    CoordinateOrdering, EmbeddingReport,
};
use cubecomp::vc::vc_dimension;
use cubecomp::{ConceptClass, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const FAMILIES: [Family; 5] = [
    Family::HammingBall,
    Family::DownwardClosed,
    Family::RandomIntersectionClosed,
    Family::MonomialUnion,
    Family::Hyperrectangle,
];

#[derive(Clone, Debug)]
pub struct Instance {
    pub family: Family,
    pub spec: GenSpec,
    pub class: ConceptClass,
}

fn draw_spec<R: Rng>(family: Family, r: &mut R, max_n: usize, max_d: usize) -> GenSpec {
    let n = r.gen_range(4.min(max_n)..=max_n);
    let d = r.gen_range(1..=max_d.min(n));
    let seed = r.gen::<u64>();
    match family {
        Family::HammingBall => GenSpec::HammingBall { n, d, seed: None },
        Family::DownwardClosed => GenSpec::DownwardClosed {
            n,
            d,
            density: r.gen_range(0.05..0.4),
            seed,
        },
        Family::RandomIntersectionClosed => GenSpec::RandomIntersectionClosed {
            n,
            density: (r.gen_range(4.0..24.0) / (1u64 << n) as f64).min(1.0),
            seed,
            max_vc: Some(d),
        },
        Family::MonomialUnion => GenSpec::MonomialUnion {
            n,
            d,
            terms: r.gen_range(1..=3.min(n)),
            seed,
        },
        _ => GenSpec::Hyperrectangle {
            points: (0..n).map(|_| vec![r.gen_range(0..2 * n as i64)]).collect(),
        },
    }
}

/// `count` intersection-closed classes with `n ≤ max_n` and VC dimension
/// between 1 and `max_d`, cycling through the closed families.
pub fn instances(seed: u64, count: usize, max_n: usize, max_d: usize) -> Result<Vec<Instance>> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    while out.len() < count {
        let family = FAMILIES[i % FAMILIES.len()];
        i += 1;
        let spec = draw_spec(family, &mut r, max_n, max_d);
        let class = generate(&spec)?;
        let d = vc_dimension(&class);
        if d < 1 || d > max_d as i64 {
            continue;
        }
        out.push(Instance {
            family,
            spec,
            class,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Row {
    pub family: Family,
    pub embedded: ConceptClass,
    pub report: EmbeddingReport,
    pub seconds: f64,
}

pub fn run_instance(inst: &Instance) -> Result<Row> {
    let start = Instant::now();
    let ord = CoordinateOrdering::identity(inst.class.dim());
    let embedded = shortest_path_closure(&inst.class, &ord)?;
    let report = verify_embedding(&inst.class, &embedded)?;
    Ok(Row {
        family: inst.family,
        embedded,
        report,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all(insts: &[Instance]) -> Result<Vec<Row>> {
    insts.par_iter().map(run_instance).collect()
}

pub fn write_csv<W: Write>(out: W, insts: &[Instance], rows: &[Row], timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| cubecomp::Error::Io(e.into());
    w.write_record(["family", "n", "d", "|C|", "|C*|", "d*", "ratio", "seconds"])
        .map_err(io)?;
    for (inst, row) in insts.iter().zip(rows) {
        let rep = &row.report;
        let seconds = if timing { row.seconds } else { 0.0 };
        w.write_record([
            row.family.name().to_string(),
            inst.class.dim().to_string(),
            rep.d.to_string(),
            rep.size.to_string(),
            rep.size_star.to_string(),
            rep.d_star.to_string(),
            format!("{:.4}", rep.ratio),
            format!("{seconds:.6}"),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn bound_table() -> Vec<CompositeBound> {
    (1..=3).map(composite_projection_bound).collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub instances: usize,
    pub max_ratio: f64,
    pub vc_bound_violations: usize,
    pub size_bound_violations: usize,
    pub structural_violations: usize,
}

pub fn summarise(rows: &[Row]) -> Summary {
    let mut s = Summary {
        instances: rows.len(),
        ..Summary::default()
    };
    for row in rows {
        let rep = &row.report;
        s.max_ratio = s.max_ratio.max(rep.ratio);
        s.vc_bound_violations += usize::from(!rep.within_vc_bound);
        s.size_bound_violations += usize::from(!rep.within_size_bound);
        s.structural_violations +=
            usize::from(!(rep.intersection_closed && rep.shortest_path_closed && rep.extremal));
    }
    s
}

pub fn write_summary<W: Write>(mut out: W, summary: &Summary) -> std::io::Result<()> {
    for b in bound_table() {
        writeln!(
            out,
            "bound d={} sauer(11d,d)={} 11d*sauer^2/2={} 2^(11d)={} holds={}",
            b.d,
            b.sauer,
            b.composite,
            b.cube,
            b.holds()
        )?;
    }
    writeln!(out, "instances={}", summary.instances)?;
    writeln!(out, "max_ratio={:.4}", summary.max_ratio)?;
    writeln!(out, "vc_bound_violations={}", summary.vc_bound_violations)?;
    writeln!(
        out,
        "size_bound_violations={}",
        summary.size_bound_violations
    )?;
    writeln!(
        out,
        "structural_violations={}",
        summary.structural_violations
    )
}
