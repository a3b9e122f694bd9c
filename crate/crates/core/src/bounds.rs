//! Existence conditions for `(r,n)`/`(R,N)`-free polynomial values.
//!
//! All verdicts are decided in exact integer or rational arithmetic: the
//! conditions have the shape `√q > X` and are compared as `q > X²`.

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, primes_up_to, Factorization};
use crate::error::{Error, Result};
use crate::gf::PrimePower;

/// Parameters of an existence question: `q`, the root-count parameter `D`,
/// and the freeness pairs `(r, n)` and `(R, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionInput {
    q: u64,
    d: u64,
    n: u64,
    big_n: u64,
    r: Factorization,
    big_r: Factorization,
}

impl ConditionInput {
    pub fn new(q: u64, d: u64, n: u64, big_n: u64, r: u64, big_r: u64) -> Result<Self> {
        if r == 0 || big_r == 0 {
            return Err(Error::InvalidArgument("r and R must be positive".into()));
        }
        Self::from_factorizations(q, d, n, big_n, factorize(r, None), factorize(big_r, None))
    }

    pub fn from_factorizations(
        q: u64,
        d: u64,
        n: u64,
        big_n: u64,
        r: Factorization,
        big_r: Factorization,
    ) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidArgument(format!("q = {q} too small")));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("D must be at least 1".into()));
        }
        let qm1 = q - 1;
        let divides = |div: u64, val: u64| {
            if div == 0 || !val.is_multiple_of(div) {
                Err(Error::NotADivisor {
                    divisor: div,
                    value: val,
                })
            } else {
                Ok(())
            }
        };
        divides(n, qm1)?;
        divides(big_n, qm1)?;
        divides(r.value(), qm1 / n)?;
        divides(big_r.value(), qm1 / big_n)?;
        Ok(ConditionInput {
            q,
            d,
            n,
            big_n,
            r,
            big_r,
        })
    }

    /// The primitive-point question on `y² = f(x)`: `x` primitive and `f(x)`
    /// 2-primitive, i.e. `(r, n, R, N) = (q-1, 1, (q-1)/2, 2)`, with
    /// `D = coefficient / 2`.
    pub fn elliptic(pp: &PrimePower, coefficient: u64) -> Result<Self> {
        if coefficient < 2 || !coefficient.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "coefficient {coefficient} must be even and at least 2"
            )));
        }
        let qm1 = pp.qm1().clone();
        let half = qm1.of_divisor(qm1.value() / 2);
        Self::from_factorizations(pp.q(), coefficient / 2, 1, 2, qm1, half)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    pub fn r(&self) -> &Factorization {
        &self.r
    }

    pub fn big_r(&self) -> &Factorization {
        &self.big_r
    }

    /// `D·n·N`.
    pub fn coefficient(&self) -> u64 {
        self.d * self.n * self.big_n
    }
}

/// `q > X²` with `X = num / den`, all positive.
fn sqrt_q_exceeds(q: u64, num: u128, den: u128) -> bool {
    let lhs = (q as u128).checked_mul(den).and_then(|v| v.checked_mul(den));
    let rhs = num.checked_mul(num);
    match (lhs, rhs) {
        (Some(l), Some(r)) => l > r,
        _ => {
            let l = BigUint::from(q) * BigUint::from(den) * BigUint::from(den);
            let r = BigUint::from(num) * BigUint::from(num);
            l > r
        }
    }
}

/// `√q > D·n·N·W(r)·W(R)`.
pub fn cor42_condition(inp: &ConditionInput) -> bool {
    let rhs = inp.coefficient() as u128 * inp.r.w() as u128 * inp.big_r.w() as u128;
    sqrt_q_exceeds(inp.q, rhs, 1)
}

/// A split `rad(r) = k_r · Π sieving_r` (and likewise for `R`) with its
/// sieve deficiency `δ = 1 - Σ 1/p_i - Σ 1/l_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveDecomposition {
    k_r: u64,
    k_big_r: u64,
    sieving_r: Vec<u64>,
    sieving_big_r: Vec<u64>,
    delta: Ratio<i128>,
}

impl SieveDecomposition {
    pub fn new(inp: &ConditionInput, mut sieving_r: Vec<u64>, mut sieving_big_r: Vec<u64>) -> Result<Self> {
        sieving_r.sort_unstable();
        sieving_big_r.sort_unstable();
        let k_r = split_radical(&inp.r, &sieving_r)?;
        let k_big_r = split_radical(&inp.big_r, &sieving_big_r)?;
        let delta = deficiency(sieving_r.iter().chain(&sieving_big_r).copied());
        if !delta.is_positive() {
            return Err(Error::NonPositiveDelta);
        }
        Ok(SieveDecomposition {
            k_r,
            k_big_r,
            sieving_r,
            sieving_big_r,
            delta,
        })
    }

    /// No sieving primes: `k_r = rad(r)`, `k_R = rad(R)`, `δ = 1`.
    pub fn empty(inp: &ConditionInput) -> Self {
        SieveDecomposition {
            k_r: inp.r.radical(),
            k_big_r: inp.big_r.radical(),
            sieving_r: Vec::new(),
            sieving_big_r: Vec::new(),
            delta: Ratio::one(),
        }
    }

    pub fn k_r(&self) -> u64 {
        self.k_r
    }

    pub fn k_big_r(&self) -> u64 {
        self.k_big_r
    }

    pub fn sieving_r(&self) -> &[u64] {
        &self.sieving_r
    }

    pub fn sieving_big_r(&self) -> &[u64] {
        &self.sieving_big_r
    }

    pub fn delta(&self) -> Ratio<i128> {
        self.delta
    }

    pub fn u(&self) -> usize {
        self.sieving_r.len()
    }

    pub fn v(&self) -> usize {
        self.sieving_big_r.len()
    }

    /// Every sieving prime, ascending; a prime sieved on both sides appears
    /// twice.
    pub fn all_primes(&self) -> Vec<u64> {
        let mut all: Vec<u64> = self.sieving_r.iter().chain(&self.sieving_big_r).copied().collect();
        all.sort_unstable();
        all
    }

    fn w_core(&self, inp: &ConditionInput) -> u128 {
        let wr = 1u128 << (inp.r.omega() as usize - self.u());
        let wbr = 1u128 << (inp.big_r.omega() as usize - self.v());
        wr * wbr
    }

    /// The right-hand side `D n N W(k_r) W(k_R) ((u+v-1)/δ + 2)` as an exact
    /// fraction `(num, den)`.
    fn rhs(&self, inp: &ConditionInput) -> (u128, u128) {
        let a = *self.delta.numer() as u128;
        let b = *self.delta.denom() as u128;
        let uv = (self.u() + self.v()) as u128;
        // (u+v-1)·b + 2a, which is positive: u+v = 0 forces a = b.
        let bracket = (uv * b + 2 * a)
            .checked_sub(b)
            .expect("sieve bracket is positive");
        let scale = inp.coefficient() as u128 * self.w_core(inp);
        (scale * bracket, a)
    }

    pub fn rhs_f64(&self, inp: &ConditionInput) -> f64 {
        let (num, den) = self.rhs(inp);
        num as f64 / den as f64
    }
}

fn split_radical(f: &Factorization, sieving: &[u64]) -> Result<u64> {
    let mut k = f.radical();
    for w in sieving.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidArgument(format!("sieving prime {} repeated", w[0])));
        }
    }
    for &p in sieving {
        if !f.primes().any(|x| x == p) {
            return Err(Error::NotADivisor {
                divisor: p,
                value: f.value(),
            });
        }
        k /= p;
    }
    Ok(k)
}

fn deficiency(primes: impl Iterator<Item = u64>) -> Ratio<i128> {
    let mut delta = Ratio::<i128>::one();
    for p in primes {
        delta -= Ratio::new(1, p as i128);
    }
    delta
}

/// `√q > D n N W(k_r) W(k_R) ((u+v-1)/δ + 2)`.
pub fn sieve_bound_condition(inp: &ConditionInput, dec: &SieveDecomposition) -> Result<bool> {
    if !dec.delta.is_positive() {
        return Err(Error::NonPositiveDelta);
    }
    if split_radical(&inp.r, &dec.sieving_r)? != dec.k_r
        || split_radical(&inp.big_r, &dec.sieving_big_r)? != dec.k_big_r
    {
        return Err(Error::InvalidArgument(
            "decomposition does not belong to this input".into(),
        ));
    }
    let (num, den) = dec.rhs(inp);
    Ok(sqrt_q_exceeds(inp.q, num, den))
}

/// How sieving primes are selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SieveStrategy {
    /// Move the largest remaining prime of either side into the sieve,
    /// whichever gives the smaller bound, until the condition passes or
    /// every move would raise the bound. Ties are accepted: the first move
    /// never changes the bound, since `W` halves while the bracket doubles.
    #[default]
    Greedy,
    /// For every `(u, v)`, sieve the `u` largest primes of `r` and the `v`
    /// largest of `R` and keep the smallest bound. For fixed `(u, v)` the
    /// largest primes maximize `δ`, so this finds a passing decomposition
    /// whenever one exists.
    Optimal,
}

/// `a/b < c/d` for positive fractions.
fn frac_lt(a: (u128, u128), b: (u128, u128)) -> bool {
    match (a.0.checked_mul(b.1), b.0.checked_mul(a.1)) {
        (Some(l), Some(r)) => l < r,
        _ => BigUint::from(a.0) * BigUint::from(b.1) < BigUint::from(b.0) * BigUint::from(a.1),
    }
}

fn descending(f: &Factorization) -> Vec<u64> {
    let mut ps: Vec<u64> = f.primes().collect();
    ps.reverse();
    ps
}

/// Picks sieving primes with the default (greedy) strategy.
pub fn choose_sieving_primes(inp: &ConditionInput) -> Option<SieveDecomposition> {
    choose_sieving_primes_with(inp, SieveStrategy::Greedy)
}

pub fn choose_sieving_primes_with(inp: &ConditionInput, strategy: SieveStrategy) -> Option<SieveDecomposition> {
    let empty = SieveDecomposition::empty(inp);
    if sieve_bound_condition(inp, &empty).expect("empty decomposition is valid") {
        return Some(empty);
    }
    match strategy {
        SieveStrategy::Greedy => greedy(inp, empty),
        SieveStrategy::Optimal => optimal(inp),
    }
}

fn greedy(inp: &ConditionInput, start: SieveDecomposition) -> Option<SieveDecomposition> {
    let pool_r = descending(&inp.r);
    let pool_big_r = descending(&inp.big_r);
    let mut current = start;
    loop {
        let cur_rhs = current.rhs(inp);
        let mut best: Option<(SieveDecomposition, (u128, u128))> = None;
        let moves = [
            pool_r.get(current.u()).map(|&p| {
                let mut s = current.sieving_r.clone();
                s.push(p);
                (s, current.sieving_big_r.clone())
            }),
            pool_big_r.get(current.v()).map(|&p| {
                let mut s = current.sieving_big_r.clone();
                s.push(p);
                (current.sieving_r.clone(), s)
            }),
        ];
        for (sr, sbr) in moves.into_iter().flatten() {
            let Ok(cand) = SieveDecomposition::new(inp, sr, sbr) else {
                continue;
            };
            let rhs = cand.rhs(inp);
            if best.as_ref().is_none_or(|(_, b)| frac_lt(rhs, *b)) {
                best = Some((cand, rhs));
            }
        }
        match best {
            Some((cand, rhs)) if !frac_lt(cur_rhs, rhs) => {
                if sieve_bound_condition(inp, &cand).expect("valid decomposition") {
                    return Some(cand);
                }
                current = cand;
            }
            _ => return None,
        }
    }
}

fn optimal(inp: &ConditionInput) -> Option<SieveDecomposition> {
    let pool_r = descending(&inp.r);
    let pool_big_r = descending(&inp.big_r);
    let mut best: Option<(SieveDecomposition, (u128, u128))> = None;
    for u in 0..=pool_r.len() {
        for v in 0..=pool_big_r.len() {
            let Ok(cand) = SieveDecomposition::new(inp, pool_r[..u].to_vec(), pool_big_r[..v].to_vec()) else {
                continue;
            };
            let rhs = cand.rhs(inp);
            if best.as_ref().is_none_or(|(_, b)| frac_lt(rhs, *b)) {
                best = Some((cand, rhs));
            }
        }
    }
    best.map(|(d, _)| d)
        .filter(|d| sieve_bound_condition(inp, d).expect("valid decomposition"))
}

/// Outcome of evaluating both existence conditions for one input.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub input: ConditionInput,
    pub w_r: u64,
    pub w_big_r: u64,
    pub cor42_pass: bool,
    pub sieve: Option<SieveDecomposition>,
    pub sieve_pass: bool,
    /// `√q`.
    pub lhs: f64,
    /// The bound that was compared against `√q`: the sieve bound of the
    /// chosen decomposition, or the plain bound when none was found.
    pub rhs: f64,
}

pub fn evaluate(inp: &ConditionInput, strategy: SieveStrategy) -> ConditionReport {
    let cor42_pass = cor42_condition(inp);
    let sieve = choose_sieving_primes_with(inp, strategy);
    let rhs = match &sieve {
        Some(d) => d.rhs_f64(inp),
        None => (inp.coefficient() * inp.r.w() * inp.big_r.w()) as f64,
    };
    ConditionReport {
        w_r: inp.r.w(),
        w_big_r: inp.big_r.w(),
        cor42_pass,
        sieve_pass: sieve.is_some(),
        sieve,
        lhs: (inp.q as f64).sqrt(),
        rhs,
        input: inp.clone(),
    }
}

/// Upper bound `37.47` on `c_{t,6}`, as the fraction `3747/100`.
pub const D6_BOUND: (u64, u64) = (3747, 100);

/// Least integer `Q₀` such that, for every `q ≥ Q₀`, the generic condition
/// `√q > c·W(q-1)·W((q-1)/2)` follows from `W(t) < 37.47·t^{1/6}`.
///
/// When `(q-1)/2` is even the two `W` factors coincide and the requirement
/// is `q^{1/6} ≥ c·37.47²/2^{1/3}`; when it is odd, `q^{1/6} ≥ c·37.47²/2`.
/// The larger sixth power governs.
pub fn analytic_threshold(coefficient: u64) -> u128 {
    analytic_threshold_with(coefficient, D6_BOUND)
}

pub fn analytic_threshold_with(coefficient: u64, bound: (u64, u64)) -> u128 {
    let c6 = BigUint::from(coefficient).pow(6u32);
    let b12_num = BigUint::from(bound.0).pow(12u32);
    let b12_den = BigUint::from(bound.1).pow(12u32);
    let num = c6 * b12_num;
    // (2^{1/3})^6 = 4 and 2^6 = 64
    let branches = [BigUint::from(4u32), BigUint::from(64u32)];
    branches
        .iter()
        .map(|k| {
            let den = &b12_den * k;
            (&num + &den - BigUint::one()) / den
        })
        .max()
        .and_then(|v| v.to_u128())
        .expect("threshold fits in u128")
}

/// Rounds `x` up to `digits` significant figures, returned as `(mantissa,
/// exponent)` with `mantissa` having exactly `digits` digits.
pub fn ceil_significant(x: u128, digits: u32) -> (u128, u32) {
    let len = x.to_string().len() as u32;
    if len <= digits {
        return (x, 0);
    }
    let scale = 10u128.pow(len - digits);
    let m = x.div_ceil(scale);
    if m == 10u128.pow(digits) {
        (m / 10, len - digits + 1)
    } else {
        (m, len - digits)
    }
}

/// Feasibility of the `(t_min, t_max)` case split: is there `n < t_min` with
/// `δ' = 1 - Σ 2/p > 0`, the sum running over the `n` largest of the first
/// `t_min` primes, such that
/// `√(p_1⋯p_{t_min}) > c · 4^{t_max - n} · ((2n - 1)/δ' + 2)`?
pub fn tmin_tmax_check(t_min: u32, t_max: u32, coefficient: u64) -> bool {
    assert!(t_min >= 1 && t_min <= t_max);
    let first = first_primes(t_min as usize);
    let primorial: BigUint = first.iter().map(|&p| BigUint::from(p)).product();
    let lhs_sq = BigRational::from_integer(primorial.into());
    (0..t_min as usize).any(|n| {
        let delta = first[first.len() - n..]
            .iter()
            .fold(BigRational::one(), |acc, &p| acc - BigRational::new(2.into(), p.into()));
        if !delta.is_positive() {
            return false;
        }
        let bracket = BigRational::from_integer((2 * n as i64 - 1).into()) / &delta
            + BigRational::from_integer(2.into());
        let pow4 = BigRational::from_integer(num_bigint::BigInt::from(4).pow(t_max - n as u32));
        let rhs = BigRational::from_integer(coefficient.into()) * pow4 * bracket;
        !rhs.is_zero() && lhs_sq > &rhs * &rhs
    })
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut limit = 64;
    loop {
        let ps = primes_up_to(limit);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        limit *= 2;
    }
}

/// Reads `Ratio<i128>` as `f64`.
pub fn ratio_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
