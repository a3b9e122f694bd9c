//! Random instances and brute-force checks shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use rnfree::arith::{euler_phi, factorize, num_squarefree_divisors};
use rnfree::bounds::{cor42_condition, ConditionInput};
use rnfree::chars::{char_sum, MultChar};
use rnfree::freeness::{count_pairs, FreenessPair, PairCountSpec};
use rnfree::gf::{Field, PrimePower};
use rnfree::poly::Poly;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn odd_prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&q| PrimePower::from_q(q).is_some()).collect()
}

pub fn field(q: u64) -> Field {
    Field::from_prime_power(PrimePower::from_q(q).unwrap(), true).unwrap()
}

/// Monic square-free polynomial of the given degree.
pub fn squarefree_poly(rng: &mut ChaCha8Rng, field: &Field, degree: usize) -> Poly {
    loop {
        let mut c: Vec<_> = (0..degree)
            .map(|_| rnfree::gf::Elem::from_index(rng.gen_range(0..field.q() as u32)))
            .collect();
        c.push(rnfree::gf::Elem::ONE);
        let f = Poly::new(c);
        if f.is_squarefree(field) {
            return f;
        }
    }
}

/// A random `(r, n)` with `n | q-1` and `r | (q-1)/n`.
pub fn random_pair(rng: &mut ChaCha8Rng, qm1: u64) -> FreenessPair {
    let divs = factorize(qm1, None).divisors();
    let n = *divs.choose(rng).unwrap();
    let rs = factorize(qm1 / n, None).divisors();
    let r = *rs.choose(rng).unwrap();
    FreenessPair::new(qm1, r, n).unwrap()
}

pub fn random_spec(rng: &mut ChaCha8Rng, field: &Field) -> PairCountSpec {
    let qm1 = field.order_of_group();
    loop {
        let df = rng.gen_range(1..=3);
        let dg = rng.gen_range(1..=3);
        let f = squarefree_poly(rng, field, df);
        let g = squarefree_poly(rng, field, dg);
        let inner = random_pair(rng, qm1);
        let outer = random_pair(rng, qm1);
        if let Ok(spec) = PairCountSpec::new(field, f, g, inner, outer) {
            return spec;
        }
    }
}

/// One Weil-bound instance: a square-free polynomial of degree 1 to 4 and a
/// nontrivial character. Returns the sum's magnitude and the bound.
pub fn weil_instance(rng: &mut ChaCha8Rng, qs: &[u64]) -> (String, f64, f64) {
    let q = *qs.choose(rng).unwrap();
    let fld = field(q);
    let z = rng.gen_range(1..=4usize);
    let f = squarefree_poly(rng, &fld, z);
    let m = rng.gen_range(1..q - 1);
    let eta = MultChar::new(&fld, m).unwrap();
    let mag = char_sum(&fld, &f, eta).magnitude();
    let bound = (z as f64 - 1.0) * (q as f64).sqrt() + 1e-6;
    (format!("q={q} deg={z} m={m}"), mag, bound)
}

/// `|N/δ - q| ≤ D·n·N·W(r)·W(R)·√q` with `δ = φ(r)φ(R)/(r·n·R·N)`, in
/// integers after clearing denominators and squaring.
pub fn estimate_holds(field: &Field, spec: &PairCountSpec) -> (bool, u64) {
    let q = field.q() as i128;
    let count = count_pairs(field, spec);
    let (r, n) = (spec.inner.r as i128, spec.inner.n as i128);
    let (rr, nn) = (spec.outer.r as i128, spec.outer.n as i128);
    let phis = (euler_phi(spec.inner.r) * euler_phi(spec.outer.r)) as i128;
    let w = (num_squarefree_divisors(spec.inner.r) * num_squarefree_divisors(spec.outer.r)) as i128;
    let d = spec.d(field) as i128;
    let lhs = (count as i128 * r * n * rr * nn - q * phis).abs();
    let rhs = d * n * nn * w * phis;
    (lhs * lhs <= rhs * rhs * q, count)
}

/// Counts with `n`, `N`, `f`, `F` from `spec` and new `r`, `R`.
pub fn count_with(field: &Field, spec: &PairCountSpec, r: u64, big_r: u64) -> u64 {
    let qm1 = field.order_of_group();
    let s = PairCountSpec::new_unchecked(
        spec.f.clone(),
        spec.g.clone(),
        FreenessPair::new(qm1, r, spec.inner.n).unwrap(),
        FreenessPair::new(qm1, big_r, spec.outer.n).unwrap(),
    );
    count_pairs(field, &s)
}

/// Brute-force check of `N(r,R) ≥ Σ N(k_r p_i, k_R) + Σ N(k_r, k_R l_i)
/// - (u+v-1) N(k_r, k_R)` for a random split of square-free `r`, `R`.
pub fn sieving_inequality_instance(rng: &mut ChaCha8Rng, field: &Field) -> (String, bool) {
    let base = random_spec(rng, field);
    let r = factorize(base.inner.r, None).radical();
    let big_r = factorize(base.outer.r, None).radical();
    let split = |rng: &mut ChaCha8Rng, m: u64| -> (u64, Vec<u64>) {
        let mut k = 1;
        let mut sieved = Vec::new();
        for p in factorize(m, None).primes() {
            if rng.gen_bool(0.5) {
                sieved.push(p);
            } else {
                k *= p;
            }
        }
        (k, sieved)
    };
    let (k_r, ps) = split(rng, r);
    let (k_big_r, ls) = split(rng, big_r);
    let total = count_with(field, &base, r, big_r) as i64;
    let core = count_with(field, &base, k_r, k_big_r) as i64;
    let mut rhs = -((ps.len() + ls.len()) as i64 - 1) * core;
    for &p in &ps {
        rhs += count_with(field, &base, k_r * p, k_big_r) as i64;
    }
    for &l in &ls {
        rhs += count_with(field, &base, k_r, k_big_r * l) as i64;
    }
    (
        format!("q={} r={r} R={big_r} p={ps:?} l={ls:?}: {total} >= {rhs}", field.q()),
        total >= rhs,
    )
}

/// Condition input for a concrete spec.
pub fn condition_input(field: &Field, spec: &PairCountSpec) -> ConditionInput {
    ConditionInput::new(
        field.q(),
        spec.d(field),
        spec.inner.n,
        spec.outer.n,
        spec.inner.r,
        spec.outer.r,
    )
    .unwrap()
}

pub fn cor42_implies_witness(field: &Field, spec: &PairCountSpec) -> bool {
    !cor42_condition(&condition_input(field, spec)) || count_pairs(field, spec) > 0
}

pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn odd_prime_power(q: u64) -> Option<(u64, u32)> {
    let ps = prime_factors(q);
    if ps.len() != 1 || ps[0] == 2 {
        return None;
    }
    let mut k = 0;
    let mut m = q;
    while m > 1 {
        m /= ps[0];
        k += 1;
    }
    Some((ps[0], k))
}

/// Whether some choice of sieving primes from `r_primes` and `big_r_primes`
/// satisfies the sieve condition; every subset is tried.
pub fn sieve_oracle(q: u64, c: u64, r_primes: &[u64], big_r_primes: &[u64]) -> bool {
    let all: Vec<(u64, bool)> = r_primes
        .iter()
        .map(|&p| (p, false))
        .chain(big_r_primes.iter().map(|&p| (p, true)))
        .collect();
    let sqrt_q_sq = BigRational::from_integer(BigInt::from(q));
    for mask in 0u32..(1 << all.len()) {
        let mut delta = BigRational::one();
        let (mut kept_r, mut kept_big_r, mut sieved) = (0u32, 0u32, 0i64);
        for (i, &(p, big)) in all.iter().enumerate() {
            if mask >> i & 1 == 1 {
                delta -= BigRational::new(BigInt::one(), BigInt::from(p));
                sieved += 1;
            } else if big {
                kept_big_r += 1;
            } else {
                kept_r += 1;
            }
        }
        if delta <= BigRational::zero() {
            continue;
        }
        let w = BigInt::from(1u64 << (kept_r + kept_big_r));
        let bracket = BigRational::from_integer(BigInt::from(sieved - 1)) / &delta + BigRational::from_integer(2.into());
        let rhs = BigRational::from_integer(BigInt::from(c / 2) * 2 * w) * bracket;
        if sqrt_q_sq > &rhs * &rhs {
            return true;
        }
    }
    false
}

pub fn oracle_record(q: u64, c: u64, doubled: bool) -> (bool, bool) {
    let r = prime_factors(q - 1);
    let half = prime_factors((q - 1) / 2);
    let second = if doubled { &r } else { &half };
    let w = (1u64 << r.len()) * (1u64 << second.len());
    let cor42 = q > (c * w) * (c * w);
    (cor42, cor42 || sieve_oracle(q, c, &r, second))
}
