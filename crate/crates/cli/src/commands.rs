use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use cubecomp::classgen::{self, generate, generate_suite, Family, GenSpec};
use cubecomp::closure::{
    intersection_closure, k_close_condition, min_closure_vc_bruteforce_with_limit,
    min_k_close_certificate, reorient, SWEEP_LIMIT,
};
use cubecomp::compression::{
    build_scheme_traced, corner_peel, verify_scheme, RepresentationMap, SchemeCache,
};
use cubecomp::io::{parse_class, write_class};
use cubecomp::spc::{shortest_path_closure, verify_embedding, CoordinateOrdering};
use cubecomp::vc::{classify, vc_dimension};
use cubecomp::vertex::MAX_DIM;
use cubecomp::{ConceptClass, CoordSet, Error, Vertex};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::args::{BenchArgs, Cli, Command, GenerateArgs, Method};
use crate::bench;

/// Largest `n` for trying every domain in `roundtrip`.
pub const ROUNDTRIP_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
        }
    }

    fn from_ok(ok: bool) -> Status {
        if ok {
            Status::Success
        } else {
            Status::VerificationFailed
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Scheme(_) | Error::NoCccChain { .. } => 1,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

type Outcome = Result<Status, CliError>;

fn read_class(path: &Path) -> Result<ConceptClass, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    parse_class(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn sweep_limit(force: bool) -> usize {
    if force {
        MAX_DIM
    } else {
        SWEEP_LIMIT
    }
}

fn bitstrings(class: &ConceptClass) -> Vec<String> {
    class.vertices().map(|v| v.to_string()).collect()
}

/// Prefixes every line with `# ` so it can lead a `.cls` document.
fn commented(text: &str) -> String {
    text.lines().map(|l| format!("# {l}\n")).collect()
}

pub fn run(cli: &Cli) -> Outcome {
    let out = cli.output.as_ref();
    match &cli.command {
        Command::Analyze { class } => analyze(&read_class(class)?, cli.json, out),
        Command::Closure {
            class,
            origin,
            search_origin,
        } => closure(&read_class(class)?, origin.as_deref(), *search_origin, cli),
        Command::Kcube { class, k } => kcube(&read_class(class)?, *k, cli),
        Command::Spc {
            class,
            ordering,
            shuffle_seed,
        } => spc(&read_class(class)?, ordering.as_deref(), *shuffle_seed, cli),
        Command::Scheme {
            class,
            method,
            trace,
        } => scheme(&read_class(class)?, *method, *trace, out),
        Command::Verify { class, scheme, k } => verify(&read_class(class)?, scheme, *k, cli),
        Command::Roundtrip {
            class,
            sample_domains,
            seed,
        } => roundtrip(&read_class(class)?, *sample_domains, *seed, cli),
        Command::Generate(args) => generate_cmd(args, out),
        Command::Bench(args) => bench_cmd(args, out),
    }
}

fn analyze(class: &ConceptClass, as_json: bool, out: Option<&PathBuf>) -> Outcome {
    let report = classify(class);
    let text = if as_json {
        serde_json::to_string_pretty(&report).expect("report serialises") + "\n"
    } else {
        format!("{report}\n")
    };
    emit(out, &text)?;
    Ok(Status::Success)
}

fn closure(class: &ConceptClass, origin: Option<&str>, search: bool, cli: &Cli) -> Outcome {
    let n = class.dim();
    let origin: Vertex = match origin {
        Some(s) => s
            .parse()
            .map_err(|e: Error| CliError::usage(format!("--origin: {e}")))?,
        None => Vertex::zero(n),
    };
    // close in the frame where `origin` is zero, then move back
    let closed = reorient(&intersection_closure(&reorient(class, &origin)?)?, &origin)?;
    let best = if search {
        Some(min_closure_vc_bruteforce_with_limit(
            class,
            sweep_limit(cli.force),
        )?)
    } else {
        None
    };
    let d = vc_dimension(&closed);
    let text = if cli.json {
        let mut doc = json!({
            "n": n,
            "origin": origin.to_string(),
            "vc_dimension": d,
            "class": bitstrings(&closed),
        });
        if let Some((vc, o)) = &best {
            doc["min_origin"] = json!({ "vc_dimension": vc, "origin": o.to_string() });
        }
        serde_json::to_string_pretty(&doc).expect("json") + "\n"
    } else {
        let mut head = format!("origin={origin}\nvc_dimension={d}\n");
        if let Some((vc, o)) = &best {
            let _ = writeln!(head, "min_closure_vc={vc}\nmin_origin={o}");
        }
        commented(&head) + &write_class(&closed)
    };
    emit(cli.output.as_ref(), &text)?;
    Ok(Status::Success)
}

fn kcube(class: &ConceptClass, k: Option<usize>, cli: &Cli) -> Outcome {
    let n = class.dim();
    let limit = sweep_limit(cli.force);
    if n > limit {
        return Err(Error::GuardExceeded {
            what: "k-close search",
            n,
            limit,
        }
        .into());
    }
    let cert = match k {
        Some(k) => k_close_condition(class, k),
        None => Some(min_k_close_certificate(class, limit)?),
    };
    let text = match (&cert, cli.json) {
        (Some(c), true) => c.to_json() + "\n",
        (None, true) => {
            serde_json::to_string_pretty(&json!({ "k": k, "holds": false })).expect("json") + "\n"
        }
        (Some(c), false) => {
            let mut s = format!("k={}\ncentre={}\n", c.k, c.v);
            for cube in &c.cubes {
                let _ = writeln!(s, "cube {cube}");
            }
            s
        }
        (None, false) => format!("k={} does not hold\n", k.expect("only a fixed k can fail")),
    };
    emit(cli.output.as_ref(), &text)?;
    if let Some(c) = &cert {
        if let Err(why) = c.check(class) {
            eprintln!("certificate failed its own check: {why}");
            return Ok(Status::VerificationFailed);
        }
    }
    Ok(Status::Success)
}

fn ordering(
    n: usize,
    spec: Option<&str>,
    seed: Option<u64>,
) -> Result<CoordinateOrdering, CliError> {
    if let Some(seed) = seed {
        return Ok(CoordinateOrdering::shuffled(n, seed));
    }
    let Some(spec) = spec else {
        return Ok(CoordinateOrdering::identity(n));
    };
    let order = spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| CliError::usage(format!("--ordering: {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if order.len() != n {
        return Err(CliError::usage(format!(
            "--ordering lists {} coordinates but the class has {n}",
            order.len()
        )));
    }
    Ok(CoordinateOrdering::new(order)?)
}

fn spc(class: &ConceptClass, order: Option<&str>, seed: Option<u64>, cli: &Cli) -> Outcome {
    let ord = ordering(class.dim(), order, seed)?;
    let embedded = shortest_path_closure(class, &ord)?;
    let report = verify_embedding(class, &embedded)?;
    let text = if cli.json {
        let doc = json!({ "report": report, "class": bitstrings(&embedded) });
        serde_json::to_string_pretty(&doc).expect("json") + "\n"
    } else {
        commented(&report.to_string()) + &write_class(&embedded)
    };
    emit(cli.output.as_ref(), &text)?;
    if !report.is_ok() {
        for v in &report.violations {
            eprintln!("violation: {v}");
        }
    }
    Ok(Status::from_ok(report.is_ok()))
}

fn scheme(class: &ConceptClass, method: Method, trace: bool, out: Option<&PathBuf>) -> Outcome {
    let r = match method {
        Method::Ccc => {
            let (r, t) = build_scheme_traced(class)?;
            if trace {
                for (i, s) in t.steps.iter().enumerate() {
                    eprintln!(
                        "step {i}: {} |C|={} -> |D|={} d={} new reps <= {}",
                        s.strategy, s.class_size, s.sub_size, s.vc_dimension, s.max_new_rep
                    );
                }
                eprintln!(
                    "base: |B|={} d={} peeled; k={}",
                    t.base_size, t.base_vc_dimension, t.k
                );
            }
            r
        }
        Method::Peel => match corner_peel(class) {
            Some(r) => r,
            None => {
                eprintln!("corner peeling got stuck");
                return Ok(Status::VerificationFailed);
            }
        },
    };
    emit(out, &(r.to_json() + "\n"))?;
    Ok(Status::Success)
}

fn verify(class: &ConceptClass, scheme_path: &Path, k: Option<usize>, cli: &Cli) -> Outcome {
    let text = fs::read_to_string(scheme_path)
        .map_err(|e| CliError::usage(format!("{}: {e}", scheme_path.display())))?;
    let r = RepresentationMap::from_json(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", scheme_path.display())))?;
    let k = k.unwrap_or(r.k());
    let result = verify_scheme(class, &r, k);
    let msg = match (&result, cli.json) {
        (Ok(()), true) => json!({ "valid": true, "k": k }).to_string() + "\n",
        (Err(v), true) => {
            json!({ "valid": false, "k": k, "violation": v.to_string() }).to_string() + "\n"
        }
        (Ok(()), false) => format!("ok: {} concepts, k={k}\n", class.len()),
        (Err(v), false) => format!("invalid: {v}\n"),
    };
    emit(cli.output.as_ref(), &msg)?;
    Ok(Status::from_ok(result.is_ok()))
}

fn roundtrip(class: &ConceptClass, sampled: Option<usize>, seed: u64, cli: &Cli) -> Outcome {
    let n = class.dim();
    let domains: Vec<u64> = match sampled {
        Some(count) => {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            if n >= 63 {
                return Err(CliError::usage("sampled domains need n < 63"));
            }
            let total = 1u64 << n;
            let mut picks: Vec<u64> = if (total as u128) <= count as u128 {
                (0..total).collect()
            } else if n <= 24 {
                sample(&mut r, total as usize, count)
                    .into_iter()
                    .map(|i| i as u64)
                    .collect()
            } else {
                use rand::Rng;
                (0..count).map(|_| r.gen_range(0..total)).collect()
            };
            picks.sort_unstable();
            picks.dedup();
            picks
        }
        None => {
            if n > ROUNDTRIP_LIMIT && !cli.force {
                return Err(Error::GuardExceeded {
                    what: "roundtrip over all domains",
                    n,
                    limit: ROUNDTRIP_LIMIT,
                }
                .into());
            }
            (0..1u64 << n).collect()
        }
    };
    let cache = SchemeCache::new();
    let results: Vec<Result<(usize, Vec<String>), Error>> = domains
        .par_iter()
        .map(|&mask| {
            let j = CoordSet::from_mask(mask);
            let mut failures = Vec::new();
            let projected = class.project(&j)?;
            for labels in projected.vertices() {
                let rep = cache.compress(class, &j, &labels)?;
                let back = cache.reconstruct(class, &j, &rep)?;
                if back != labels {
                    failures.push(format!(
                        "J={j} labels={labels} rep={rep} came back as {back}"
                    ));
                }
            }
            Ok((projected.len(), failures))
        })
        .collect();
    let mut labellings = 0;
    let mut failures = Vec::new();
    for r in results {
        let (count, f) = r?;
        labellings += count;
        failures.extend(f);
    }
    let text = if cli.json {
        json!({
            "domains": domains.len(),
            "labellings": labellings,
            "failures": failures,
        })
        .to_string()
            + "\n"
    } else {
        let mut s = format!(
            "domains={}\nlabellings={labellings}\nfailures={}\n",
            domains.len(),
            failures.len()
        );
        for f in &failures {
            let _ = writeln!(s, "failure: {f}");
        }
        s
    };
    emit(cli.output.as_ref(), &text)?;
    Ok(Status::from_ok(failures.is_empty()))
}

fn spec_from_flags(args: &GenerateArgs) -> Result<GenSpec, CliError> {
    let family: Family = args
        .family
        .as_deref()
        .ok_or_else(|| CliError::usage("one of --spec, --family or --suite is required"))?
        .parse()?;
    let n = args.n.unwrap_or(0);
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| CliError::usage(format!("{family} needs --{name}")))
    };
    let seed = args.seed.unwrap_or(0);
    let density = args.density.unwrap_or(0.3);
    Ok(match family {
        Family::FullCube => GenSpec::FullCube { n },
        Family::HammingBall => GenSpec::HammingBall {
            n,
            d: need(args.d, "d")?,
            seed: args.seed,
        },
        Family::DownwardClosed => GenSpec::DownwardClosed {
            n,
            d: need(args.d, "d")?,
            density,
            seed,
        },
        Family::RandomIntersectionClosed => GenSpec::RandomIntersectionClosed {
            n,
            density,
            seed,
            max_vc: args.max_vc,
        },
        Family::MonomialUnion => GenSpec::MonomialUnion {
            n,
            d: need(args.d, "d")?,
            terms: args.terms.unwrap_or(2),
            seed,
        },
        Family::Hyperrectangle => {
            let path = args
                .points
                .as_ref()
                .ok_or_else(|| CliError::usage("hyperrectangle needs --points"))?;
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            let points = classgen::parse_points_csv(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            if n != 0 && n != points.len() {
                return Err(CliError::usage(format!(
                    "--n {n} disagrees with the {} points given",
                    points.len()
                )));
            }
            GenSpec::Hyperrectangle { points }
        }
        Family::Tree => GenSpec::Tree { n, seed },
        Family::RandomExtremalVc2 => GenSpec::RandomExtremalVc2 { n, density, seed },
    })
}

fn generate_cmd(args: &GenerateArgs, out: Option<&PathBuf>) -> Outcome {
    if let Some(dir) = &args.suite {
        let counts: Vec<(Family, usize)> =
            Family::ALL.iter().map(|&f| (f, args.per_family)).collect();
        let suite = generate_suite(args.seed.unwrap_or(0), &counts)?;
        fs::create_dir_all(dir)?;
        let mut manifest = Vec::with_capacity(suite.len());
        for (i, entry) in suite.iter().enumerate() {
            let name = format!("{i:03}_{}.cls", entry.spec.family());
            fs::write(dir.join(&name), write_class(&entry.class))?;
            manifest.push(json!({ "file": name, "spec": entry.spec, "contract": entry.contract }));
        }
        let text = serde_json::to_string_pretty(&manifest).expect("json") + "\n";
        fs::write(dir.join("manifest.json"), text)?;
        let broken: Vec<String> = suite
            .iter()
            .filter_map(|e| e.contract.check(&e.class).err())
            .collect();
        for b in &broken {
            eprintln!("contract violated: {b}");
        }
        return Ok(Status::from_ok(broken.is_empty()));
    }
    let spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        }
        None => spec_from_flags(args)?,
    };
    let class = generate(&spec)?;
    emit(out, &write_class(&class))?;
    Ok(Status::Success)
}

fn bench_cmd(args: &BenchArgs, out: Option<&PathBuf>) -> Outcome {
    if args.max_n > 20 && args.max_d > 0 {
        return Err(CliError::usage("bench supports --max-n up to 20"));
    }
    if args.max_d == 0 || args.max_n == 0 {
        return Err(CliError::usage("--max-n and --max-d must be positive"));
    }
    let insts = bench::instances(args.seed, args.count, args.max_n, args.max_d)?;
    let rows = bench::run_all(&insts)?;
    let mut csv = Vec::new();
    bench::write_csv(&mut csv, &insts, &rows, !args.no_timing)?;
    let summary = bench::summarise(&rows);
    match out {
        Some(path) => {
            fs::write(path, &csv)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            bench::write_summary(io::stdout().lock(), &summary)?;
        }
        None => {
            io::stdout().write_all(&csv)?;
            bench::write_summary(io::stderr().lock(), &summary)?;
        }
    }
    Ok(Status::from_ok(
        summary.vc_bound_violations == 0 && summary.size_bound_violations == 0,
    ))
}
