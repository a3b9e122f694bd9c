//! Multiplicative characters of `F_q` and the character-sum forms of the
//! freeness and order indicators.
//!
//! The character `η_m` sends `g^j` to `ζ^{mj}` with `ζ = e^{2πi/(q-1)}` and
//! `g` the field generator; every character is extended by `η(0) = 0`.
//! Sums of character values are kept as exact exponent counts
//! ([`CharSumAccumulator`]) and only turned into floating point at the end.

use num_complex::Complex64;
use num_integer::Integer;

use crate::arith::{coprime_part, factorize};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::Poly;

/// Absolute tolerance for reading a floating-point indicator as 0 or 1.
pub const INDICATOR_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultChar {
    qm1: u64,
    m: u64,
}

impl MultChar {
    pub fn new(field: &Field, m: u64) -> Result<Self> {
        let qm1 = field.order_of_group();
        if m >= qm1 {
            return Err(Error::InvalidArgument(format!(
                "character index {m} out of range for q - 1 = {qm1}"
            )));
        }
        Ok(MultChar { qm1, m })
    }

    pub fn trivial(field: &Field) -> Self {
        MultChar {
            qm1: field.order_of_group(),
            m: 0,
        }
    }

    pub fn index(&self) -> u64 {
        self.m
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 0
    }

    pub fn order(&self) -> u64 {
        self.qm1 / self.qm1.gcd(&self.m)
    }
}

/// Value of a character: either the absorbing zero, or `ζ^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root(u64),
}

pub fn char_eval(field: &Field, chi: MultChar, h: Elem) -> CharValue {
    if h.is_zero() {
        return CharValue::Zero;
    }
    let qm1 = field.order_of_group();
    let l = field.dlog(h).expect("nonzero element");
    CharValue::Root(((chi.m as u128 * l as u128) % qm1 as u128) as u64)
}

/// The characters of exact order `t`, as `η_{j(q-1)/t}` with `gcd(j, t) = 1`
/// in increasing `j`.
pub fn characters_of_order(field: &Field, t: u64) -> Result<Vec<MultChar>> {
    let qm1 = field.order_of_group();
    if t == 0 || !qm1.is_multiple_of(t) {
        return Err(Error::NotADivisor {
            divisor: t,
            value: qm1,
        });
    }
    let step = qm1 / t;
    Ok((0..t)
        .filter(|j| j.gcd(&t) == 1)
        .map(|j| MultChar { qm1, m: j * step })
        .collect())
}

/// The characters whose order divides `s`.
pub fn characters_dividing(field: &Field, s: u64) -> Result<Vec<MultChar>> {
    let qm1 = field.order_of_group();
    if s == 0 || !qm1.is_multiple_of(s) {
        return Err(Error::NotADivisor {
            divisor: s,
            value: qm1,
        });
    }
    let step = qm1 / s;
    Ok((0..s).map(|j| MultChar { qm1, m: j * step }).collect())
}

/// An exact sum of `(q-1)`-th roots of unity, stored as exponent counts.
#[derive(Debug, Clone)]
pub struct CharSumAccumulator {
    counts: Vec<u64>,
    touched: Vec<u32>,
}

impl CharSumAccumulator {
    pub fn new(qm1: u64) -> Self {
        CharSumAccumulator {
            counts: vec![0; qm1 as usize],
            touched: Vec::new(),
        }
    }

    pub fn push(&mut self, v: CharValue) {
        if let CharValue::Root(e) = v {
            self.push_exponent(e);
        }
    }

    pub fn push_exponent(&mut self, e: u64) {
        let e = (e % self.counts.len() as u64) as usize;
        if self.counts[e] == 0 {
            self.touched.push(e as u32);
        }
        self.counts[e] += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of roots summed so far.
    pub fn terms(&self) -> u64 {
        self.touched.iter().map(|&e| self.counts[e as usize]).sum()
    }

    pub fn clear(&mut self) {
        for &e in &self.touched {
            self.counts[e as usize] = 0;
        }
        self.touched.clear();
    }

    pub fn value(&self) -> Complex64 {
        let n = self.counts.len() as f64;
        let mut touched = self.touched.clone();
        touched.sort_unstable();
        touched
            .iter()
            .map(|&e| {
                let c = self.counts[e as usize] as f64;
                Complex64::from_polar(c, std::f64::consts::TAU * e as f64 / n)
            })
            .sum()
    }

    pub fn magnitude(&self) -> f64 {
        self.value().norm()
    }
}

/// `Σ_{η ∈ chars} η(h)` as a complex number.
fn sum_over(acc: &mut CharSumAccumulator, field: &Field, chars: &[MultChar], h: Elem) -> Complex64 {
    acc.clear();
    for &chi in chars {
        acc.push(char_eval(field, chi, h));
    }
    acc.value()
}

fn check_nonzero(h: Elem) -> Result<()> {
    if h.is_zero() {
        Err(Error::ZeroElement)
    } else {
        Ok(())
    }
}

/// `(1/t) Σ_{ord η | t} η(h)` evaluated in floating point.
pub fn subgroup_indicator_charsum(field: &Field, t: u64, h: Elem) -> Result<f64> {
    let chars = characters_dividing(field, t)?;
    check_nonzero(h)?;
    let mut acc = CharSumAccumulator::new(field.order_of_group());
    Ok(sum_over(&mut acc, field, &chars, h).re / t as f64)
}

/// Indicator of `h` being a `t`-th power, computed by orthogonality and by
/// the discrete log; the two must agree.
pub fn subgroup_indicator(field: &Field, t: u64, h: Elem) -> Result<u8> {
    let via_chars = classify(subgroup_indicator_charsum(field, t, h)?)?;
    let via_dlog = field.dlog(h)? % t == 0;
    if via_chars != via_dlog {
        return Err(Error::Inconsistent(format!(
            "subgroup indicator disagreement at t={t}, h={h}"
        )));
    }
    Ok(via_dlog as u8)
}

/// Reads a floating-point indicator as a boolean within
/// [`INDICATOR_TOLERANCE`].
pub fn classify(v: f64) -> Result<bool> {
    if v.abs() < INDICATOR_TOLERANCE {
        Ok(false)
    } else if (v - 1.0).abs() < INDICATOR_TOLERANCE {
        Ok(true)
    } else {
        Err(Error::Inconsistent(format!("indicator value {v} is not 0 or 1")))
    }
}

fn check_pair(qm1: u64, r: u64, n: u64) -> Result<()> {
    if n == 0 || !qm1.is_multiple_of(n) {
        return Err(Error::NotADivisor {
            divisor: n,
            value: qm1,
        });
    }
    if r == 0 || !(qm1 / n).is_multiple_of(r) {
        return Err(Error::NotADivisor {
            divisor: r,
            value: qm1 / n,
        });
    }
    Ok(())
}

/// `Σ_{t | d} μ(t_(n)) / φ(t_(n)) · Σ_{ord η = t} η(h)`, shared by the
/// `(r,n)`-freeness indicator and the Möbius-inverted order indicator.
fn weighted_order_sum(field: &Field, h: Elem, d: u64, n: u64) -> Result<Complex64> {
    let mut acc = CharSumAccumulator::new(field.order_of_group());
    let mut total = Complex64::new(0.0, 0.0);
    for t in factorize(d, None).divisors() {
        let tn = factorize(coprime_part(t, n), None);
        let mu = tn.mobius();
        if mu == 0 {
            continue;
        }
        let chars = characters_of_order(field, t)?;
        let s = sum_over(&mut acc, field, &chars, h);
        total += s * (mu as f64 / tn.euler_phi() as f64);
    }
    Ok(total)
}

/// Character-sum indicator of `(r,n)`-freeness:
/// `φ(r)/(rn) Σ_{t|rn} μ(t_(n))/φ(t_(n)) Σ_{ord η = t} η(h)`.
pub fn indicator_rn_charsum(field: &Field, h: Elem, r: u64, n: u64) -> Result<f64> {
    check_pair(field.order_of_group(), r, n)?;
    let s = weighted_order_sum(field, h, r * n, n)?;
    let phi_r = factorize(r, None).euler_phi() as f64;
    Ok(s.re * phi_r / (r * n) as f64)
}

/// Order-`N` indicator as the double sum over `d | N` and characters whose
/// order divides `d(q-1)/N`.
pub fn carlitz_indicator(field: &Field, h: Elem, big_n: u64) -> Result<f64> {
    let qm1 = field.order_of_group();
    if big_n == 0 || !qm1.is_multiple_of(big_n) {
        return Err(Error::NotADivisor {
            divisor: big_n,
            value: qm1,
        });
    }
    let mut acc = CharSumAccumulator::new(qm1);
    let mut total = 0.0;
    let nf = factorize(big_n, None);
    for d in nf.divisors() {
        let mu = nf.of_divisor(d).mobius();
        if mu == 0 {
            continue;
        }
        let chars = characters_dividing(field, d * qm1 / big_n)?;
        total += mu as f64 / d as f64 * sum_over(&mut acc, field, &chars, h).re;
    }
    Ok(total * big_n as f64 / qm1 as f64)
}

/// Möbius-inverted order-`N` indicator:
/// `φ(N)/(q-1) Σ_{t | q-1} μ(t_(n))/φ(t_(n)) Σ_{ord η = t} η(h)` with
/// `n = (q-1)/N`.
pub fn carlitz_indicator_alt(field: &Field, h: Elem, big_n: u64) -> Result<f64> {
    let qm1 = field.order_of_group();
    if big_n == 0 || !qm1.is_multiple_of(big_n) {
        return Err(Error::NotADivisor {
            divisor: big_n,
            value: qm1,
        });
    }
    let n = qm1 / big_n;
    let s = weighted_order_sum(field, h, qm1, n)?;
    let phi = factorize(big_n, None).euler_phi() as f64;
    Ok(s.re * phi / qm1 as f64)
}

/// `G(η, χ) = Σ_{w ∈ F_q} η(f(w)) χ(g(w))`.
pub fn char_sum_g(field: &Field, f: &Poly, g: &Poly, eta: MultChar, chi: MultChar) -> CharSumAccumulator {
    let qm1 = field.order_of_group();
    let mut acc = CharSumAccumulator::new(qm1);
    for w in field.elements() {
        let a = char_eval(field, eta, f.eval(field, w));
        let b = char_eval(field, chi, g.eval(field, w));
        if let (CharValue::Root(x), CharValue::Root(y)) = (a, b) {
            acc.push_exponent(x + y);
        }
    }
    acc
}

/// `Σ_{c ∈ F_q} η(f(c))`.
pub fn char_sum(field: &Field, f: &Poly, eta: MultChar) -> CharSumAccumulator {
    char_sum_g(field, f, &Poly::constant(Elem::ONE), eta, MultChar::trivial(field))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let f = Field::new(13, 1).unwrap();
        let triv = MultChar::trivial(&f);
        assert_eq!(char_eval(&f, triv, Elem::from_index(5)), CharValue::Root(0));
        let quad = MultChar::new(&f, 6).unwrap();
        assert_eq!(quad.order(), 2);
        assert!(matches!(
            char_eval(&f, quad, Elem::from_index(4)),
            CharValue::Root(e) if e % 12 == 0
        ));
        assert_eq!(char_eval(&f, quad, Elem::ZERO), CharValue::Zero);
        assert_eq!(char_eval(&f, triv, Elem::ZERO), CharValue::Zero);
    }

    #[test]
    fn subgroup_examples() {
        let f = Field::new(13, 1).unwrap();
        assert_eq!(subgroup_indicator(&f, 1, Elem::from_index(7)).unwrap(), 1);
        assert_eq!(subgroup_indicator(&f, 3, Elem::from_index(5)).unwrap(), 1);
        assert_eq!(subgroup_indicator(&f, 3, Elem::from_index(2)).unwrap(), 0);
        assert!(subgroup_indicator(&f, 5, Elem::from_index(2)).is_err());
        assert!(subgroup_indicator(&f, 3, Elem::ZERO).is_err());
    }

    #[test]
    fn rn_indicator_examples() {
        let f = Field::new(13, 1).unwrap();
        let one = indicator_rn_charsum(&f, Elem::from_index(4), 3, 2).unwrap();
        assert!((one - 1.0).abs() < 1e-9);
        let zero = indicator_rn_charsum(&f, Elem::from_index(12), 3, 2).unwrap();
        assert!(zero.abs() < 1e-9);
        assert_eq!(indicator_rn_charsum(&f, Elem::ZERO, 3, 2).unwrap(), 0.0);
        assert!(indicator_rn_charsum(&f, Elem::ONE, 4, 2).is_err());
    }

    #[test]
    fn carlitz_examples() {
        let f = Field::new(7, 1).unwrap();
        for (h, n, want) in [(2, 3, 1.0), (3, 3, 0.0), (1, 1, 1.0)] {
            let h = Elem::from_index(h);
            assert!((carlitz_indicator(&f, h, n).unwrap() - want).abs() < 1e-9);
            assert!((carlitz_indicator_alt(&f, h, n).unwrap() - want).abs() < 1e-9);
        }
    }

    #[test]
    fn g_sum_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let x = Poly::x();
        let cubic = Poly::from_ints(&f5, &[0, -1, 0, 1]);
        let t = MultChar::trivial(&f5);
        let g = char_sum_g(&f5, &x, &cubic, t, t);
        assert_eq!(g.terms(), 2);
        assert!((g.value() - Complex64::new(2.0, 0.0)).norm() < 1e-12);

        let rootless = Poly::from_ints(&f5, &[2, 0, 1]);
        assert_eq!(char_sum_g(&f5, &rootless, &Poly::constant(Elem::ONE), t, t).terms(), 5);

        let f7 = Field::new(7, 1).unwrap();
        let quad = MultChar::new(&f7, 3).unwrap();
        let s = char_sum_g(&f7, &x, &Poly::constant(Elem::ONE), quad, MultChar::trivial(&f7));
        assert!(s.magnitude() < 1e-12);
    }

    #[test]
    fn orthogonality_exhaustive() {
        for q in [5u64, 7, 9, 13, 25, 27, 49, 61, 81, 121] {
            let pp = crate::gf::PrimePower::from_q(q).unwrap();
            let f = Field::new(pp.p(), pp.k()).unwrap();
            for t in pp.qm1().divisors() {
                for h in f.nonzero() {
                    subgroup_indicator(&f, t, h).unwrap();
                }
            }
        }
    }

    #[test]
    fn character_counts() {
        let f = Field::new(31, 1).unwrap();
        for t in [1u64, 2, 3, 5, 6, 10, 15, 30] {
            let chars = characters_of_order(&f, t).unwrap();
            assert_eq!(chars.len() as u64, crate::arith::euler_phi(t));
            assert!(chars.iter().all(|c| c.order() == t));
        }
    }
}
