mod common;

use num_integer::Integer;
use proptest::prelude::*;

use rnfree::arith::{euler_phi, factorize};
use rnfree::chars::{classify, indicator_rn_charsum, subgroup_indicator, subgroup_indicator_charsum};
use rnfree::freeness::{is_rn_free, FreenessPair};
use rnfree::gf::{Elem, Field, PrimePower};

use common::{field, odd_prime_powers};

#[test]
fn dlog_round_trip() {
    for q in odd_prime_powers(3, 2000) {
        let f = field(q);
        for h in f.nonzero() {
            assert_eq!(f.gen_pow(f.dlog(h).unwrap()), h, "q={q} h={h}");
        }
    }
}

#[test]
fn order_is_least_period() {
    for q in odd_prime_powers(3, 500) {
        let f = field(q);
        for h in f.nonzero() {
            let mut e = 1;
            let mut x = h;
            while x != Elem::ONE {
                x = f.mul(x, h);
                e += 1;
            }
            assert_eq!(f.order(h).unwrap(), e, "q={q} h={h}");
        }
    }
}

#[test]
fn n_primitive_counts() {
    for q in odd_prime_powers(3, 2000) {
        let f = field(q);
        let qm1 = q - 1;
        for n in factorize(qm1, None).divisors() {
            let count = f.nonzero().filter(|&h| f.is_n_primitive(h, n).unwrap()).count() as u64;
            assert_eq!(count, euler_phi(qm1 / n), "q={q} n={n}");
        }
    }
}

#[test]
fn tableless_matches_tables() {
    for q in odd_prime_powers(3, 400) {
        let pp = PrimePower::from_q(q).unwrap();
        let a = Field::from_prime_power(pp.clone(), true).unwrap();
        let b = Field::from_prime_power(pp, false).unwrap();
        assert_eq!(a.generator(), b.generator());
        for h in a.nonzero() {
            assert_eq!(a.dlog(h).unwrap(), b.dlog(h).unwrap(), "q={q} h={h}");
            assert_eq!(a.order(h).unwrap(), b.order(h).unwrap());
            assert_eq!(a.sqrt(h), b.sqrt(h));
        }
    }
}

#[test]
fn orthogonality() {
    for q in odd_prime_powers(3, 121) {
        let f = field(q);
        for t in factorize(q - 1, None).divisors() {
            for h in f.nonzero() {
                let v = subgroup_indicator(&f, t, h).unwrap();
                assert_eq!(v == 1, f.dlog(h).unwrap().is_multiple_of(t));
                let s = subgroup_indicator_charsum(&f, t, h).unwrap();
                assert!((s - v as f64).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn full_r_singles_out_exact_order() {
    for q in odd_prime_powers(5, 121) {
        let f = field(q);
        let qm1 = q - 1;
        for n in factorize(qm1, None).divisors() {
            let m = qm1 / n;
            let hits: Vec<Elem> = f
                .nonzero()
                .filter(|&h| classify(indicator_rn_charsum(&f, h, m, n).unwrap()).unwrap())
                .collect();
            assert_eq!(hits.len() as u64, euler_phi(m), "q={q} n={n}");
            assert!(hits.iter().all(|&h| f.order(h).unwrap() == m));
        }
    }
}

/// `h` is `(r, n)`-free iff `h = g^n` for some `g` and `h` is not an
/// `np`-th power for any prime `p | r`.
#[test]
fn freeness_matches_definition() {
    for q in odd_prime_powers(3, 121) {
        let f = field(q);
        let qm1 = q - 1;
        let powers = |e: u64| -> Vec<bool> {
            let mut is = vec![false; q as usize];
            for g in f.nonzero() {
                is[f.pow(g, e).index() as usize] = true;
            }
            is
        };
        for n in factorize(qm1, None).divisors() {
            let nth = powers(n);
            for r in factorize(qm1 / n, None).divisors() {
                let pair = FreenessPair::new(qm1, r, n).unwrap();
                let higher: Vec<Vec<bool>> = factorize(r, None).primes().map(|p| powers(n * p)).collect();
                for h in f.elements() {
                    let i = h.index() as usize;
                    let def = !h.is_zero() && nth[i] && higher.iter().all(|s| !s[i]);
                    assert_eq!(is_rn_free(&f, h, pair), def, "q={q} r={r} n={n} h={h}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn construction_is_deterministic(i in 0usize..40) {
        let qs = odd_prime_powers(3, 3000);
        let q = qs[i * qs.len() / 40];
        let pp = PrimePower::from_q(q).unwrap();
        let a = Field::new(pp.p(), pp.k()).unwrap();
        let b = Field::new(pp.p(), pp.k()).unwrap();
        prop_assert_eq!(a.modulus(), b.modulus());
        prop_assert_eq!(a.generator(), b.generator());
        for h in a.nonzero().step_by(7) {
            prop_assert_eq!(a.dlog(h).unwrap(), b.dlog(h).unwrap());
        }
    }

    #[test]
    fn field_axioms(q_idx in 0usize..200, x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let qs = odd_prime_powers(3, 1500);
        let f = field(qs[q_idx % qs.len()]);
        let e = |v: u32| Elem::from_index(v % f.q() as u32);
        let (x, y, z) = (e(x), e(y), e(z));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.add(x, f.neg(x)), Elem::ZERO);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
            let o = f.order(x).unwrap();
            prop_assert_eq!((f.q() - 1) % o, 0);
            prop_assert_eq!(f.dlog(x).unwrap().gcd(&(f.q() - 1)), (f.q() - 1) / o);
        }
    }
}
