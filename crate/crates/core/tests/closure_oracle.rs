//! The k-close cube search against the brute-force origin sweep.

use cubecomp::closure::{
    intersection_closure, k_close_condition, min_closure_vc_bruteforce, min_k_close,
    min_k_close_certificate, reorient, SWEEP_LIMIT,
};
use cubecomp::vc::vc_dimension;
use cubecomp::ConceptClass;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_classes(n: usize) -> impl Iterator<Item = ConceptClass> {
    let cube = 1u64 << n;
    (1u64..1 << cube).map(move |pick| {
        let words = (0..cube).filter(|w| pick >> w & 1 == 1).collect();
        ConceptClass::from_words(n, words).unwrap()
    })
}

fn agree(c: &ConceptClass) {
    let (brute, origin) = min_closure_vc_bruteforce(c).unwrap();
    let cert = min_k_close_certificate(c, SWEEP_LIMIT).unwrap();
    assert_eq!(cert.k, brute, "{c:?}");
    assert_eq!(cert.check(c), Ok(()), "{c:?}");
    // the origin found by the sweep really attains the minimum
    let closed = intersection_closure(&reorient(c, &origin).unwrap()).unwrap();
    assert_eq!(vc_dimension(&closed) as usize, brute);
    if cert.k > 0 {
        assert!(k_close_condition(c, cert.k - 1).is_none());
    }
}

#[test]
fn exhaustive_up_to_three_coordinates() {
    let mut count = 0;
    for n in 1..=3 {
        for c in all_classes(n) {
            agree(&c);
            count += 1;
        }
    }
    assert_eq!(count, 3 + 15 + 255);
}

#[test]
fn random_classes_on_four_and_five_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for i in 0..400 {
        let n = 4 + i % 2;
        let density: f64 = rng.gen_range(0.05..0.9);
        let mut words: Vec<u64> = (0..1u64 << n).filter(|_| rng.gen_bool(density)).collect();
        if words.is_empty() {
            words.push(rng.gen_range(0..1u64 << n));
        }
        agree(&ConceptClass::from_words(n, words).unwrap());
    }
}

#[test]
fn full_cube_needs_k_equal_n() {
    for n in 1..=5 {
        let full = ConceptClass::full(n).unwrap();
        assert_eq!(min_k_close(&full).unwrap(), n);
        assert_eq!(min_closure_vc_bruteforce(&full).unwrap().0, n);
    }
}
