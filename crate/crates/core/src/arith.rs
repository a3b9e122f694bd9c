//! Elementary arithmetic functions and factorization machinery.
//!
//! Everything here works on `u64`. Inputs are bounded by the sweep range
//! (at most `2^34`) plus small analytic constants, so trial division against
//! a cached prime table is always adequate for one-off factorizations. Bulk
//! factorization of many consecutive integers goes through [`LpfTable`] or
//! [`factor_window`], both of which are segmented sieves.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Prime decomposition of a positive integer.
///
/// `factors` is sorted by strictly increasing prime and every exponent is at
/// least one. The empty list represents `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs, checking the
    /// ordering invariant and recomputing the value.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u64 = 1;
        let mut last = 1;
        for &(p, e) in &factors {
            if p <= last || e == 0 || !is_prime(p) {
                return Err(Error::InvalidArgument(format!(
                    "malformed factor list {factors:?}"
                )));
            }
            last = p;
            let pe = p
                .checked_pow(e)
                .and_then(|pe| pe.checked_mul(value))
                .ok_or_else(|| Error::Overflow("factorization value".into()))?;
            value = pe;
        }
        Ok(Factorization { value, factors })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Distinct primes, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors, ω(m).
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of square-free divisors, `2^ω(m)`.
    pub fn w(&self) -> u64 {
        1u64 << self.factors.len()
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }

    pub fn mobius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Factorization of a divisor `d` of `self.value()`, derived without
    /// re-factoring.
    pub fn of_divisor(&self, d: u64) -> Factorization {
        debug_assert!(d != 0 && self.value.is_multiple_of(d));
        let mut rest = d;
        let mut factors = Vec::new();
        for &(p, _) in &self.factors {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
        }
        debug_assert_eq!(rest, 1);
        Factorization { value: d, factors }
    }
}

/// Primes up to `limit` by the plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

const SMALL_PRIME_LIMIT: u64 = 1 << 17;

/// Primes below 2^17; enough to trial-divide anything below 2^34.
pub(crate) fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(SMALL_PRIME_LIMIT))
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for &p in small_primes() {
        if p * p > m {
            return true;
        }
        if m.is_multiple_of(p) {
            return m == p;
        }
    }
    let mut d = SMALL_PRIME_LIMIT | 1;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn trial_factor_from(mut m: u64, min_prime: u64, factors: &mut Vec<(u64, u32)>) {
    for &p in small_primes() {
        if p < min_prime {
            continue;
        }
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        let mut d = SMALL_PRIME_LIMIT | 1;
        while d.saturating_mul(d) <= m {
            if m.is_multiple_of(d) {
                let mut e = 0;
                while m.is_multiple_of(d) {
                    m /= d;
                    e += 1;
                }
                factors.push((d, e));
            }
            d += 2;
        }
    }
    if m > 1 {
        factors.push((m, 1));
    }
}

/// Factorizes `m ≥ 1`. When `hint` covers `m`, least prime factors are read
/// from the table for as long as the cofactor stays inside its range.
pub fn factorize(m: u64, hint: Option<&LpfTable>) -> Factorization {
    assert!(m >= 1, "factorize requires a positive integer");
    let mut factors = Vec::new();
    let mut rest = m;
    let mut min_prime = 2;
    if let Some(table) = hint {
        while rest > 1 {
            let Some(p) = table.lpf(rest) else { break };
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
            min_prime = p + 1;
        }
    }
    if rest > 1 {
        trial_factor_from(rest, min_prime, &mut factors);
    }
    Factorization { value: m, factors }
}

pub fn mobius(m: u64) -> i8 {
    factorize(m, None).mobius()
}

pub fn euler_phi(m: u64) -> u64 {
    factorize(m, None).euler_phi()
}

/// W(m): the number of square-free divisors of `m`.
pub fn num_squarefree_divisors(m: u64) -> u64 {
    factorize(m, None).w()
}

/// Product of the distinct primes dividing `m`.
pub fn radical(m: u64) -> u64 {
    factorize(m, None).radical()
}

/// `a / gcd(a, b)`.
pub fn coprime_part(a: u64, b: u64) -> u64 {
    a / a.gcd(&b)
}

/// The divisor sum `Σ_{t|r} |μ(t_(n))| / φ(t_(n)) · φ(t)`, evaluated term by
/// term in exact rationals.
pub fn t_sum(r: u64, n: u64) -> Result<u64> {
    assert!(r >= 1 && n >= 1);
    let fr = factorize(r, None);
    let mut acc: Ratio<u128> = Ratio::zero();
    for t in fr.divisors() {
        let tf = fr.of_divisor(t);
        let reduced = coprime_part(t, n);
        let rf = tf.of_divisor(reduced);
        if rf.mobius() == 0 {
            continue;
        }
        acc += Ratio::new(tf.euler_phi() as u128, rf.euler_phi() as u128);
    }
    if !acc.is_integer() {
        return Err(Error::Inconsistent(format!(
            "T({r}, {n}) accumulated to non-integer {acc}"
        )));
    }
    acc.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Overflow("T(r, n)".into()))
}

/// Closed form `gcd(r, n) · W(gcd(r, r_(n)))`.
pub fn t_closed(r: u64, n: u64) -> u64 {
    let g = r.gcd(&n);
    g * num_squarefree_divisors(r.gcd(&coprime_part(r, n)))
}

/// `c_{t,a} = 2^j / (p_1 ⋯ p_j)^{1/a}` where `p_1..p_j` are the primes of `t`
/// not exceeding `2^a`. Satisfies `W(t) ≤ c_{t,a} · t^{1/a}`.
pub fn lemma52_constant(t_factors: &Factorization, a: u32) -> f64 {
    assert!(a >= 1);
    let cap = 1u64.checked_shl(a).unwrap_or(u64::MAX);
    let small: Vec<u64> = t_factors.primes().filter(|&p| p <= cap).collect();
    c_value(&small, a)
}

fn c_value(primes: &[u64], a: u32) -> f64 {
    let log_prod: f64 = primes.iter().map(|&p| (p as f64).ln()).sum();
    (primes.len() as f64 * std::f64::consts::LN_2 - log_prod / a as f64).exp()
}

/// The largest value of `2^j / (p_1⋯p_j)^{1/a}` over sets of primes `≤ 2^a`,
/// together with the maximizing set.
#[derive(Debug, Clone, PartialEq)]
pub struct CMax {
    pub a: u32,
    pub primes: Vec<u64>,
    pub value: f64,
}

impl CMax {
    /// Exact test of `value < bound_num / bound_den`, i.e.
    /// `2^{ja} · bound_den^a < bound_num^a · Π p`.
    pub fn is_below(&self, bound_num: u64, bound_den: u64) -> bool {
        let j = self.primes.len() as u32;
        let prod: BigUint = self.primes.iter().map(|&p| BigUint::from(p)).product();
        let lhs = (BigUint::one() << (j * self.a) as usize) * BigUint::from(bound_den).pow(self.a);
        let rhs = BigUint::from(bound_num).pow(self.a) * prod;
        lhs < rhs
    }
}

/// Each prime `p < 2^a` multiplies the constant by `2 / p^{1/a} > 1`, and no
/// other prime up to `2^a` helps, so the maximizing set is every prime below
/// `2^a`.
pub fn max_lemma52_constant(a: u32) -> CMax {
    assert!((1..=20).contains(&a), "exponent out of supported range");
    let cap = 1u64 << a;
    let primes: Vec<u64> = primes_up_to(cap).into_iter().filter(|&p| p < cap).collect();
    let value = c_value(&primes, a);
    CMax { a, primes, value }
}

/// The `a = 6` instance used for the elliptic-curve threshold.
pub fn max_c6() -> CMax {
    max_lemma52_constant(6)
}

/// Least-prime-factor table for the integers in `[start, end]`.
#[derive(Debug, Clone)]
pub struct LpfTable {
    start: u64,
    end: u64,
    lpf: Vec<u32>,
}

impl LpfTable {
    /// Segmented sieve over `[start, end]`; sieving primes go up to
    /// `isqrt(end)`. Requires `1 ≤ start ≤ end < 2^32`.
    pub fn new(start: u64, end: u64) -> Result<Self> {
        if start == 0 || start > end || end >= 1 << 32 {
            return Err(Error::InvalidArgument(format!(
                "LpfTable range [{start}, {end}] unsupported"
            )));
        }
        let base = primes_up_to(isqrt(end));
        Ok(Self::with_base_primes(start, end, &base))
    }

    pub(crate) fn with_base_primes(start: u64, end: u64, base: &[u64]) -> Self {
        let len = (end - start + 1) as usize;
        let mut lpf = vec![0u32; len];
        for &p in base {
            if p * p > end {
                break;
            }
            let first = (p * p).max(start.div_ceil(p) * p);
            let mut m = first;
            while m <= end {
                let slot = &mut lpf[(m - start) as usize];
                if *slot == 0 {
                    *slot = p as u32;
                }
                m += p;
            }
        }
        for (i, slot) in lpf.iter_mut().enumerate() {
            if *slot == 0 {
                // 1 has no prime factor; mark it with itself.
                *slot = (start + i as u64) as u32;
            }
        }
        LpfTable { start, end, lpf }
    }

    pub fn range(&self) -> (u64, u64) {
        (self.start, self.end)
    }

    /// Least prime factor of `m`, or `None` outside the table or for `m = 1`.
    pub fn lpf(&self, m: u64) -> Option<u64> {
        if m < self.start || m > self.end || m < 2 {
            return None;
        }
        Some(self.lpf[(m - self.start) as usize] as u64)
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Batch factorization of a sorted list of integers lying in a short window.
///
/// Each base prime walks its multiples across the window once; only the
/// requested entries are divided out. `base` must contain every prime up to
/// `isqrt(max(values))`.
pub fn factor_window(values: &[u64], base: &[u64]) -> Vec<Factorization> {
    let Some((&lo, &hi)) = values.first().zip(values.last()) else {
        return Vec::new();
    };
    debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(lo >= 1);
    let width = (hi - lo + 1) as usize;
    let mut slot = vec![u32::MAX; width];
    for (i, &v) in values.iter().enumerate() {
        slot[(v - lo) as usize] = i as u32;
    }
    let mut rest: Vec<u64> = values.to_vec();
    let mut factors: Vec<Vec<(u64, u32)>> = vec![Vec::new(); values.len()];
    for &p in base {
        if p * p > hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m <= hi {
            let s = slot[(m - lo) as usize];
            if s != u32::MAX {
                let s = s as usize;
                let mut e = 0;
                while rest[s].is_multiple_of(p) {
                    rest[s] /= p;
                    e += 1;
                }
                factors[s].push((p, e));
            }
            m += p;
        }
    }
    values
        .iter()
        .zip(rest)
        .zip(factors)
        .map(|((&v, r), mut fs)| {
            if r > 1 {
                fs.push((r, 1));
            }
            Factorization { value: v, factors: fs }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_phi(m: u64) -> u64 {
        (1..=m).filter(|&k| k.gcd(&m) == 1).count() as u64
    }

    #[test]
    fn small_examples() {
        assert!(factorize(1, None).factors().is_empty());
        assert_eq!(factorize(12, None).factors(), &[(2, 2), (3, 1)]);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(13), 12);
        assert_eq!(num_squarefree_divisors(1), 1);
        assert_eq!(num_squarefree_divisors(12), 4);
        assert_eq!(num_squarefree_divisors(30), 8);
        assert_eq!(radical(1), 1);
        assert_eq!(radical(12), 6);
        assert_eq!(radical(30), 30);
        assert_eq!(coprime_part(12, 2), 6);
        assert_eq!(coprime_part(12, 5), 12);
        assert_eq!(coprime_part(12, 12), 1);
    }

    #[test]
    fn factorize_large_value_remultiplies() {
        let f = factorize(100663290, None);
        let back: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(back, 100663290);
        // 2 · 3^3 · 5 · 7 · 13 · 17 · 241
        assert_eq!(f.factors().last(), Some(&(241, 1)));
        assert_eq!(f.omega(), 7);
        assert!(f.primes().all(is_prime));
    }

    #[test]
    fn t_sum_examples() {
        assert_eq!(t_sum(1, 7).unwrap(), 1);
        assert_eq!(t_sum(12, 2).unwrap(), 8);
        assert_eq!(t_sum(30, 1).unwrap(), 8);
        assert_eq!(t_closed(12, 2), 8);
        assert_eq!(t_closed(1, 9), 1);
    }

    #[test]
    fn t_sum_matches_closed_form_small() {
        for r in 1..=300 {
            for n in 1..=20 {
                assert_eq!(t_sum(r, n).unwrap(), t_closed(r, n), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn t_sum_of_product() {
        for a in 1..=60u64 {
            for b in 1..=60u64 {
                assert_eq!(t_sum(a * b, b).unwrap(), b * num_squarefree_divisors(a));
            }
        }
    }

    #[test]
    fn w_counts_squarefree_divisors() {
        for m in 1..=3000u64 {
            let direct = (1..=m).filter(|d| m % d == 0 && mobius(*d) != 0).count() as u64;
            assert_eq!(num_squarefree_divisors(m), direct);
        }
    }

    #[test]
    fn phi_matches_count() {
        for m in 1..=500 {
            assert_eq!(euler_phi(m), naive_phi(m));
        }
    }

    #[test]
    fn phi_multiplicative_on_coprime_pairs() {
        for a in 1..=200u64 {
            for b in (1..=200u64).step_by(7) {
                if a.gcd(&b) == 1 {
                    assert_eq!(euler_phi(a * b), euler_phi(a) * euler_phi(b));
                }
            }
        }
    }

    #[test]
    fn radical_divides_and_is_idempotent() {
        for m in 1..=10_000 {
            let r = radical(m);
            assert_eq!(m % r, 0);
            assert_eq!(radical(r), r);
        }
    }

    #[test]
    fn lpf_table_properties() {
        let t = LpfTable::new(1000, 5000).unwrap();
        for m in 1000..=5000 {
            let p = t.lpf(m).unwrap();
            assert!(is_prime(p));
            assert_eq!(m % p, 0);
            assert_eq!(p == m, is_prime(m));
            assert_eq!(factorize(m, Some(&t)), factorize(m, None));
        }
        assert_eq!(t.lpf(999), None);
    }

    #[test]
    fn lpf_table_from_one() {
        let t = LpfTable::new(1, 100).unwrap();
        assert_eq!(t.lpf(1), None);
        assert_eq!(t.lpf(2), Some(2));
        assert_eq!(t.lpf(91), Some(7));
        assert_eq!(factorize(96, Some(&t)).factors(), &[(2, 5), (3, 1)]);
    }

    #[test]
    fn factor_window_agrees_with_trial_division() {
        let values: Vec<u64> = (1_000_000..1_010_000).step_by(3).collect();
        let base = primes_up_to(isqrt(*values.last().unwrap()));
        for f in factor_window(&values, &base) {
            assert_eq!(f, factorize(f.value(), None));
        }
    }

    #[test]
    fn lemma52_trivial_and_bound() {
        let f = factorize(67 * 71, None);
        assert_eq!(lemma52_constant(&f, 6), 1.0);
        let m = max_c6();
        assert_eq!(m.primes.len(), 18);
        assert!(m.value < 37.47);
        assert!(m.is_below(3747, 100));
        assert!(!m.is_below(3746, 100));
    }

    #[test]
    fn lemma52_constant_bounds_w() {
        for t in 2..5000u64 {
            let f = factorize(t, None);
            for a in 1..=6 {
                let bound = lemma52_constant(&f, a) * (t as f64).powf(1.0 / a as f64);
                assert!(f.w() as f64 <= bound * (1.0 + 1e-12), "t={t} a={a}");
            }
        }
    }

    #[test]
    fn from_factors_validates() {
        assert!(Factorization::from_factors(vec![(3, 1), (2, 1)]).is_err());
        assert!(Factorization::from_factors(vec![(4, 1)]).is_err());
        assert_eq!(
            Factorization::from_factors(vec![(2, 3), (5, 1)]).unwrap().value(),
            40
        );
    }
}
