//! Self-checks comparing independent evaluations of the same quantity.
//!
//! Each suite returns a [`SuiteReport`] rather than panicking, so callers can
//! print every failure. [`Faults`] perturbs one input to confirm that a
//! suite can fail at all.

use num_integer::Integer;

use crate::arith::{euler_phi, factorize, mobius, t_closed, t_sum};
use crate::chars::{carlitz_indicator, carlitz_indicator_alt, classify, indicator_rn_charsum};
use crate::freeness::{is_rn_free, radical_reduction_check, FreenessPair};
use crate::gf::{Field, PrimePower};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Deliberate corruption for negative controls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Replace `|μ(m)|` by `1 - |μ(m)|` at this `m`.
    pub flip_mobius_at: Option<u64>,
}

impl Faults {
    fn abs_mobius(&self, m: u64) -> u64 {
        let v = mobius(m).unsigned_abs() as u64;
        if self.flip_mobius_at == Some(m) {
            1 - v
        } else {
            v
        }
    }
}

/// `Σ_{t|r} |μ(t_(n))| φ(t)/φ(t_(n))` against its closed form
/// `gcd(r, n)·W(gcd(r, r_(n)))`, for `r ≤ r_max`, `n ≤ n_max`. The sum is
/// evaluated twice: by the library, and here from plain divisor
/// enumeration (the one affected by `faults`).
pub fn divisor_sum_suite(r_max: u64, n_max: u64, faults: Faults) -> SuiteReport {
    let mut rep = SuiteReport::new("divisor sum closed form");
    for r in 1..=r_max {
        let divisors: Vec<u64> = (1..=r).filter(|d| r % d == 0).collect();
        for n in 1..=n_max {
            let closed = t_closed(r, n);
            let mut num = 0u64;
            let mut den = 1u64;
            for &t in &divisors {
                let tn = t / t.gcd(&n);
                if faults.abs_mobius(tn) == 0 {
                    continue;
                }
                // num/den += φ(t)/φ(tn)
                let (a, b) = (euler_phi(t), euler_phi(tn));
                let l = den.lcm(&b);
                num = num * (l / den) + a * (l / b);
                den = l;
                let g = num.gcd(&den);
                num /= g;
                den /= g;
            }
            let direct_ok = den == 1 && num == closed;
            let lib_ok = t_sum(r, n).ok() == Some(closed);
            rep.check(direct_ok && lib_ok, || {
                format!("r={r} n={n}: closed {closed}, direct {num}/{den}, library {:?}", t_sum(r, n).ok())
            });
        }
    }
    rep
}

/// Odd prime powers in `[lo, hi]`.
pub fn odd_prime_powers(lo: u64, hi: u64) -> Vec<PrimePower> {
    (lo.max(3)..=hi).filter_map(PrimePower::from_q).collect()
}

/// Character-sum freeness indicator against the order test, for every valid
/// `(r, n)` and every `h` including 0.
pub fn freeness_indicator_suite(q_lo: u64, q_hi: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("freeness indicator");
    for pp in odd_prime_powers(q_lo, q_hi) {
        let field = Field::from_prime_power(pp, true).expect("small field");
        let qm1 = field.order_of_group();
        let divs = factorize(qm1, None).divisors();
        for &n in &divs {
            for &r in divs.iter().filter(|&&r| (qm1 / n).is_multiple_of(r)) {
                let pair = FreenessPair::new(qm1, r, n).expect("valid pair");
                for h in field.elements() {
                    let direct = is_rn_free(&field, h, pair);
                    let via = indicator_rn_charsum(&field, h, r, n).and_then(classify);
                    rep.check(via.as_ref().ok() == Some(&direct), || {
                        format!("q={} r={r} n={n} h={h}: direct {direct}, sum {via:?}", field.q())
                    });
                }
            }
        }
    }
    rep
}

/// The two order-`N` indicator formulas against the order test.
pub fn order_indicator_suite(q_lo: u64, q_hi: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("order indicator");
    for pp in odd_prime_powers(q_lo, q_hi) {
        let field = Field::from_prime_power(pp, true).expect("small field");
        let qm1 = field.order_of_group();
        for big_n in factorize(qm1, None).divisors() {
            for h in field.elements() {
                let direct = !h.is_zero() && field.order(h).ok() == Some(big_n);
                let a = carlitz_indicator(&field, h, big_n).and_then(classify);
                let b = carlitz_indicator_alt(&field, h, big_n).and_then(classify);
                rep.check(a.as_ref().ok() == Some(&direct) && b.as_ref().ok() == Some(&direct), || {
                    format!("q={} N={big_n} h={h}: direct {direct}, double sum {a:?}, inverted {b:?}", field.q())
                });
            }
        }
    }
    rep
}

/// Freeness is unchanged by replacing `r` with its radical.
pub fn radical_suite(q_lo: u64, q_hi: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("radical invariance");
    for pp in odd_prime_powers(q_lo, q_hi) {
        let field = Field::from_prime_power(pp, true).expect("small field");
        let qm1 = field.order_of_group();
        let divs = factorize(qm1, None).divisors();
        for &n in &divs {
            for &r in divs.iter().filter(|&&r| (qm1 / n).is_multiple_of(r)) {
                let pair = FreenessPair::new(qm1, r, n).expect("valid pair");
                for h in field.elements() {
                    rep.check(radical_reduction_check(&field, h, pair), || {
                        format!("q={} r={r} n={n} h={h}", field.q())
                    });
                }
            }
        }
    }
    rep
}

/// Every suite with the given ranges.
pub fn all_suites(r_max: u64, n_max: u64, q_hi: u64, faults: Faults) -> Vec<SuiteReport> {
    vec![
        divisor_sum_suite(r_max, n_max, faults),
        freeness_indicator_suite(5, q_hi),
        order_indicator_suite(5, q_hi),
        radical_suite(5, q_hi),
    ]
}
