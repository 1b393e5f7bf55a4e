//! Embedding and compression on generated classes.

use cubecomp::classgen::{generate, generate_suite, Family, GenSpec};
use cubecomp::closure::intersection_closure;
use cubecomp::compression::{
    build_scheme, build_scheme_traced, ccc_check, compress_sample, corner_peel, find_ccc_subclass,
    reconstruct, sandwich_bijection, verify_scheme,
};
use cubecomp::cube::is_shortest_path_closed;
use cubecomp::spc::{shortest_path_closure, verify_embedding, CoordinateOrdering};
use cubecomp::vc::{is_extremal, vc_dimension};
use cubecomp::{ConceptClass, CoordSet, Vertex};

fn closed_suite(seed: u64) -> Vec<ConceptClass> {
    let counts = [
        (Family::HammingBall, 10),
        (Family::DownwardClosed, 10),
        (Family::RandomIntersectionClosed, 10),
        (Family::MonomialUnion, 10),
        (Family::Hyperrectangle, 10),
    ];
    generate_suite(seed, &counts)
        .unwrap()
        .into_iter()
        .map(|e| {
            // balls come with a random centre; move it back to the origin
            if let GenSpec::HammingBall { n, d, .. } = e.spec {
                generate(&GenSpec::HammingBall { n, d, seed: None }).unwrap()
            } else {
                e.class
            }
        })
        .collect()
}

/// One pass of λ-paths can leave the output without `1101 ⊙ 0111 = 0101`.
#[test]
fn one_pass_closure_can_break_intersection_closure() {
    let c = ConceptClass::parse_list(4, "0000 1100 1111").unwrap();
    assert!(c.is_intersection_closed());
    let star = shortest_path_closure(&c, &CoordinateOrdering::identity(4)).unwrap();
    assert_eq!(
        star,
        ConceptClass::parse_list(4, "0000 0001 0011 0100 0111 1100 1101 1111").unwrap()
    );
    let report = verify_embedding(&c, &star).unwrap();
    assert!(!report.intersection_closed);
    assert!(report.within_vc_bound && report.within_size_bound);
    // coordinate order 3,4,1,2 happens to work here
    let ord = CoordinateOrdering::new(vec![3, 4, 1, 2]).unwrap();
    let star = shortest_path_closure(&c, &ord).unwrap();
    assert!(verify_embedding(&c, &star).unwrap().is_ok());
}

#[test]
fn shortest_path_closure_bounds_under_several_orders() {
    let mut structural_failures = 0;
    let mut total = 0;
    for c in closed_suite(11) {
        assert!(c.is_intersection_closed(), "{c:?}");
        let n = c.dim();
        for ord in [
            CoordinateOrdering::identity(n),
            CoordinateOrdering::shuffled(n, 5),
        ] {
            let star = shortest_path_closure(&c, &ord).unwrap();
            let report = verify_embedding(&c, &star).unwrap();
            assert!(c.is_subset(&star));
            assert!(report.within_vc_bound, "{c:?}\n{report}");
            assert!(report.within_size_bound, "{c:?}\n{report}");
            total += 1;
            if !report.is_ok() {
                structural_failures += 1;
                continue;
            }
            let r = corner_peel(&star).expect("extremal C* peels");
            assert!(r.k() as i64 <= report.d_star);
            assert_eq!(verify_scheme(&star, &r, r.k()), Ok(()));
        }
    }
    eprintln!("{structural_failures} of {total} embeddings violate a structural guarantee");
    assert!(structural_failures < total);
}

#[test]
fn closure_preserves_shortest_path_closedness() {
    let suite = generate_suite(
        3,
        &[
            (Family::Tree, 15),
            (Family::RandomExtremalVc2, 15),
            (Family::HammingBall, 15),
        ],
    )
    .unwrap();
    for e in suite {
        assert!(is_shortest_path_closed(&e.class).is_closed());
        let closed = intersection_closure(&e.class).unwrap();
        assert!(
            is_shortest_path_closed(&closed).is_closed(),
            "{:?}",
            e.class
        );
    }
}

#[test]
fn chains_for_maximum_and_vc2_classes() {
    let mut classes = Vec::new();
    for n in 2..=7 {
        for d in 1..=3.min(n) {
            classes.push(
                generate(&GenSpec::HammingBall {
                    n,
                    d,
                    seed: Some(n as u64 * 10 + d as u64),
                })
                .unwrap(),
            );
        }
    }
    classes.extend(
        generate_suite(8, &[(Family::RandomExtremalVc2, 20), (Family::Tree, 5)])
            .unwrap()
            .into_iter()
            .map(|e| e.class),
    );
    for c in classes {
        let d = vc_dimension(&c) as usize;
        let (r, trace) = build_scheme_traced(&c).unwrap();
        assert!(r.k() <= d, "{c:?}: k = {} > {d}", r.k());
        assert_eq!(verify_scheme(&c, &r, d), Ok(()));
        assert!(trace.steps.iter().all(|s| s.max_new_rep <= d));
    }
}

#[test]
fn accepted_pairs_satisfy_the_sandwich_invariants() {
    let suite = generate_suite(
        21,
        &[(Family::HammingBall, 10), (Family::RandomExtremalVc2, 10)],
    )
    .unwrap();
    for e in suite {
        let c = e.class;
        if c.len() < 2 {
            continue;
        }
        let found = find_ccc_subclass(&c).unwrap().expect("a ccc subclass");
        let d = &found.sub;
        assert!(is_extremal(d));
        assert!(ccc_check(&c, d).unwrap().is_some());
        let b = sandwich_bijection(&c, d).unwrap();
        assert_eq!(b.triples.len(), c.len() - d.len());
        let mut colour_sets: Vec<u64> = b.triples.iter().map(|t| t.cube.colour_mask()).collect();
        colour_sets.sort_unstable();
        colour_sets.dedup();
        assert_eq!(colour_sets.len(), b.triples.len());
        for t in &b.triples {
            assert_eq!(t.cube.dim() + t.complement_cube.dim(), c.dim());
            let common = t.cube.intersection(&t.complement_cube).unwrap();
            assert_eq!(common.vertices(), vec![t.special]);
            // the colours of the cube separate the special vertex from D
            for u in d.vertices() {
                assert_ne!((u.bits() ^ t.special.bits()) & t.cube.colour_mask(), 0);
            }
        }
    }
}

#[test]
fn round_trip_on_every_domain() {
    let suite = generate_suite(
        5,
        &[
            (Family::HammingBall, 3),
            (Family::DownwardClosed, 3),
            (Family::Tree, 3),
        ],
    )
    .unwrap();
    for e in suite {
        let c = e.class;
        let n = c.dim();
        for mask in 0..1u64 << n {
            let j = CoordSet::from_mask(mask);
            for labels in c.project(&j).unwrap().vertices() {
                let rep = compress_sample(&c, &j, &labels).unwrap();
                assert!(rep.is_subset(&j));
                assert_eq!(reconstruct(&c, &j, &rep).unwrap(), labels);
            }
        }
    }
}

#[test]
fn non_extremal_input_is_refused() {
    let c = ConceptClass::parse_list(3, "000 011 101 110").unwrap();
    assert!(build_scheme(&c).is_err());
    let j = CoordSet::full(3);
    assert!(compress_sample(&c, &j, &Vertex::zero(3)).is_err());
}
