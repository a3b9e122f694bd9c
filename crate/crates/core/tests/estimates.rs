mod common;

use rand::seq::SliceRandom;

use rnfree::bounds::{choose_sieving_primes, sieve_bound_condition};
use rnfree::chars::indicator_rn_charsum;
use rnfree::freeness::count_pairs;

use common::*;

#[test]
fn weil_bound_random_instances() {
    let qs = odd_prime_powers(3, 97);
    let mut rng = rng(11);
    for _ in 0..300 {
        let (what, mag, bound) = weil_instance(&mut rng, &qs);
        assert!(mag <= bound, "{what}: |sum| = {mag} > {bound}");
    }
}

#[test]
fn count_matches_indicator_product() {
    let qs = odd_prime_powers(5, 49);
    let mut rng = rng(12);
    for _ in 0..60 {
        let q = *qs.choose(&mut rng).unwrap();
        let fld = field(q);
        let spec = random_spec(&mut rng, &fld);
        let sum: f64 = fld
            .elements()
            .map(|w| {
                let a = indicator_rn_charsum(&fld, spec.f.eval(&fld, w), spec.inner.r, spec.inner.n).unwrap();
                let b = indicator_rn_charsum(&fld, spec.g.eval(&fld, w), spec.outer.r, spec.outer.n).unwrap();
                a * b
            })
            .sum();
        let count = count_pairs(&fld, &spec) as f64;
        assert!((sum - count).abs() < 1e-3, "q={q}: {sum} vs {count}");
    }
}

#[test]
fn main_estimate_random_specs() {
    let qs = odd_prime_powers(3, 343);
    let mut rng = rng(13);
    for _ in 0..200 {
        let q = *qs.choose(&mut rng).unwrap();
        let fld = field(q);
        let spec = random_spec(&mut rng, &fld);
        let (ok, count) = estimate_holds(&fld, &spec);
        assert!(ok, "q={q} {spec:?}: count {count}");
    }
}

#[test]
fn sieving_inequality_brute_force() {
    let qs = odd_prime_powers(3, 121);
    let mut rng = rng(14);
    for _ in 0..80 {
        let q = *qs.choose(&mut rng).unwrap();
        let (what, ok) = sieving_inequality_instance(&mut rng, &field(q));
        assert!(ok, "{what}");
    }
}

#[test]
fn passing_conditions_have_witnesses() {
    let qs = odd_prime_powers(3, 343);
    let mut rng = rng(15);
    let (mut cor42_hits, mut sieve_hits) = (0, 0);
    for _ in 0..400 {
        let q = *qs.choose(&mut rng).unwrap();
        let fld = field(q);
        let spec = random_spec(&mut rng, &fld);
        assert!(cor42_implies_witness(&fld, &spec), "q={q} {spec:?}");
        let inp = condition_input(&fld, &spec);
        if rnfree::bounds::cor42_condition(&inp) {
            cor42_hits += 1;
        }
        if let Some(dec) = choose_sieving_primes(&inp) {
            if sieve_bound_condition(&inp, &dec).unwrap() {
                sieve_hits += 1;
                assert!(count_pairs(&fld, &spec) > 0, "q={q} {spec:?}");
            }
        }
    }
    assert!(cor42_hits > 0 && sieve_hits >= cor42_hits);
}
