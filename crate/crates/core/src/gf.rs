//! Finite fields `F_q` for odd prime powers `q = p^k`.
//!
//! Elements are stored as their canonical index `Σ c_i p^i`, where
//! `c_0 + c_1 x + … + c_{k-1} x^{k-1}` is the reduced representative modulo
//! the field's defining polynomial. Index `0` is the zero element and index
//! `1` is the identity.
//!
//! A field normally carries full discrete-log and antilog tables, which makes
//! multiplication, orders and square roots O(1). Fields can also be built
//! without tables (for the handful of large fields touched by existence
//! searches); every operation then falls back to exponentiation,
//! Pohlig–Hellman and Tonelli–Shanks.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::arith::{factorize, is_prime, Factorization};
use crate::error::{Error, Result};

/// Default cap on `q` for fields that carry discrete-log tables.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 25;

/// An odd prime power together with the factorization of `q - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePower {
    p: u64,
    k: u32,
    q: u64,
    qm1: Factorization,
}

impl PrimePower {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("exponent must be positive".into()));
        }
        let q = p
            .checked_pow(k)
            .ok_or_else(|| Error::Overflow(format!("{p}^{k}")))?;
        Ok(PrimePower {
            p,
            k,
            q,
            qm1: factorize(q - 1, None),
        })
    }

    /// Used by the sweep, which already knows the factorization of `q - 1`.
    pub(crate) fn with_qm1(p: u64, k: u32, qm1: Factorization) -> Self {
        let q = p.pow(k);
        debug_assert_eq!(qm1.value(), q - 1);
        PrimePower { p, k, q, qm1 }
    }

    /// Recognizes `q` as an odd prime power.
    pub fn from_q(q: u64) -> Option<Self> {
        if q < 3 || q.is_multiple_of(2) {
            return None;
        }
        let f = factorize(q, None);
        match f.factors() {
            &[(p, k)] => Some(PrimePower::with_qm1(p, k, factorize(q - 1, None))),
            _ => None,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Factorization of `q - 1`.
    pub fn qm1(&self) -> &Factorization {
        &self.qm1
    }
}

/// A field element, identified by its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn from_index(index: u32) -> Self {
        Elem(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
struct LogTables {
    /// `dlog[index]` for nonzero elements; `dlog[0]` is unused.
    dlog: Vec<u32>,
    /// `exp[i]` is the index of `g^i`, `0 ≤ i < q - 1`.
    exp: Vec<u32>,
}

/// A constructed finite field.
#[derive(Clone)]
pub struct Field {
    pp: PrimePower,
    p: u32,
    k: u32,
    q: u32,
    /// Monic defining polynomial, low degree first, length `k + 1`.
    modulus: Vec<u32>,
    generator: Elem,
    tables: Option<LogTables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.pp == other.pp
            && self.modulus == other.modulus
            && self.generator == other.generator
            && match (&self.tables, &other.tables) {
                (Some(a), Some(b)) => a.dlog == b.dlog && a.exp == b.exp,
                (None, None) => true,
                _ => false,
            }
    }
}

impl Field {
    /// Builds `F_{p^k}` with discrete-log tables, subject to
    /// [`DEFAULT_TABLE_LIMIT`].
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::with_table_limit(p, k, DEFAULT_TABLE_LIMIT)
    }

    pub fn with_table_limit(p: u64, k: u32, limit: u64) -> Result<Self> {
        let pp = PrimePower::new(p, k)?;
        if pp.q() > limit {
            return Err(Error::LimitExceeded { q: pp.q(), limit });
        }
        let mut field = Self::bare(pp)?;
        field.build_tables();
        Ok(field)
    }

    /// Builds the same field description without discrete-log tables.
    pub fn without_tables(p: u64, k: u32) -> Result<Self> {
        Self::bare(PrimePower::new(p, k)?)
    }

    pub fn from_prime_power(pp: PrimePower, tables: bool) -> Result<Self> {
        if tables && pp.q() > DEFAULT_TABLE_LIMIT {
            return Err(Error::LimitExceeded {
                q: pp.q(),
                limit: DEFAULT_TABLE_LIMIT,
            });
        }
        let mut field = Self::bare(pp)?;
        if tables {
            field.build_tables();
        }
        Ok(field)
    }

    fn bare(pp: PrimePower) -> Result<Self> {
        if pp.q() >= 1 << 32 {
            return Err(Error::LimitExceeded {
                q: pp.q(),
                limit: 1 << 32,
            });
        }
        let p = pp.p() as u32;
        let k = pp.k();
        let modulus = smallest_irreducible(p as u64, k)
            .into_iter()
            .map(|c| c as u32)
            .collect();
        let mut field = Field {
            p,
            k,
            q: pp.q() as u32,
            pp,
            modulus,
            generator: Elem::ONE,
            tables: None,
        };
        field.generator = (1..field.q)
            .map(Elem)
            .find(|&h| field.is_primitive_by_pow(h))
            .ok_or_else(|| Error::Inconsistent("no generator found".into()))?;
        Ok(field)
    }

    fn build_tables(&mut self) {
        let qm1 = (self.q - 1) as usize;
        let mut dlog = vec![0u32; self.q as usize];
        let mut exp = vec![0u32; qm1];
        let g = self.generator;
        let mut cur = Elem::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0;
            dlog[cur.0 as usize] = i as u32;
            cur = self.raw_mul(cur, g);
        }
        assert_eq!(cur, Elem::ONE, "generator order mismatch");
        self.tables = Some(LogTables { dlog, exp });
    }

    pub fn prime_power(&self) -> &PrimePower {
        &self.pp
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    /// `q - 1`, the order of the multiplicative group.
    pub fn order_of_group(&self) -> u64 {
        self.q as u64 - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// All elements in canonical order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.q).map(Elem)
    }

    pub fn contains(&self, h: Elem) -> bool {
        h.0 < self.q
    }

    /// Image of an integer under `Z → F_p ⊆ F_q`.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficients `c_0, …, c_{k-1}` of the representative polynomial.
    pub fn coefficients(&self, h: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut v = h.0;
        for _ in 0..self.k {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Elem {
        assert!(coeffs.len() <= self.k as usize);
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            v = v * self.p + c % self.p;
        }
        Elem(v)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Elem((s % self.p as u64) as u32);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.k {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.k {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            x /= self.p;
            place = place.wrapping_mul(self.p);
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) if self.k > 1 => {
                let qm1 = self.q as u64 - 1;
                let e = (t.dlog[a.0 as usize] as u64 + t.dlog[b.0 as usize] as u64) % qm1;
                Elem(t.exp[e as usize])
            }
            _ => self.raw_mul(a, b),
        }
    }

    /// Multiplication straight from the representation, never touching the
    /// log tables.
    fn raw_mul(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let p = self.p as u64;
        let k = self.k as usize;
        let da = self.coefficients(a);
        let db = self.coefficients(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let m = self.modulus[j] as u64;
                prod[i - k + j] = (prod[i - k + j] + (p - c) * m) % p;
            }
        }
        let mut v = 0u64;
        for &c in prod[..k].iter().rev() {
            v = v * p + c;
        }
        Elem(v as u32)
    }

    fn raw_pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let qm1 = self.q as u128 - 1;
                let l = (t.dlog[a.0 as usize] as u128 * e as u128) % qm1;
                Elem(t.exp[l as usize])
            }
            None => self.raw_pow(a, e),
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// `g^i` for the field generator `g`.
    pub fn gen_pow(&self, i: u64) -> Elem {
        let qm1 = self.q as u64 - 1;
        match &self.tables {
            Some(t) => Elem(t.exp[(i % qm1) as usize]),
            None => self.raw_pow(self.generator, i % qm1),
        }
    }

    /// Discrete logarithm base the field generator, in `[0, q - 2]`.
    pub fn dlog(&self, h: Elem) -> Result<u64> {
        if h.is_zero() {
            return Err(Error::ZeroElement);
        }
        match &self.tables {
            Some(t) => Ok(t.dlog[h.0 as usize] as u64),
            None => Ok(self.pohlig_hellman(h)),
        }
    }

    fn pohlig_hellman(&self, h: Elem) -> u64 {
        let qm1 = self.q as u64 - 1;
        let g = self.generator;
        let mut residue = 0u128;
        let mut modulus = 1u128;
        for &(l, e) in self.pp.qm1().factors() {
            let gamma = self.raw_pow(g, qm1 / l);
            let mut x = 0u64;
            let mut lk = 1u64;
            for i in 0..e {
                let shifted = self.raw_mul(h, self.raw_pow(g, qm1 - x % qm1));
                let target = self.raw_pow(shifted, qm1 / (lk * l));
                let d = self.bsgs(gamma, target, l);
                x += d * lk;
                if i + 1 < e {
                    lk *= l;
                }
            }
            let le = l.pow(e) as u128;
            // combine x mod l^e with residue mod `modulus`
            let mut v = residue;
            while v % le != x as u128 % le {
                v += modulus;
            }
            residue = v;
            modulus *= le;
        }
        residue as u64
    }

    /// Solves `base^d = target` with `0 ≤ d < order`.
    fn bsgs(&self, base: Elem, target: Elem, order: u64) -> u64 {
        let m = (order as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(m as usize);
        let mut cur = Elem::ONE;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = self.raw_mul(cur, base);
        }
        let giant = self.raw_pow(base, order - m % order);
        let mut gamma = target;
        for i in 0..=m {
            if let Some(&j) = baby.get(&gamma) {
                return (i * m + j) % order;
            }
            gamma = self.raw_mul(gamma, giant);
        }
        unreachable!("target outside the subgroup generated by base")
    }

    fn is_primitive_by_pow(&self, h: Elem) -> bool {
        if h.is_zero() {
            return false;
        }
        let qm1 = self.q as u64 - 1;
        self.pp
            .qm1()
            .primes()
            .all(|l| self.raw_pow(h, qm1 / l) != Elem::ONE)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, h: Elem) -> Result<u64> {
        if h.is_zero() {
            return Err(Error::ZeroElement);
        }
        let qm1 = self.q as u64 - 1;
        if let Some(t) = &self.tables {
            return Ok(qm1 / qm1.gcd(&(t.dlog[h.0 as usize] as u64)));
        }
        let mut ord = qm1;
        for &(l, _) in self.pp.qm1().factors() {
            while ord.is_multiple_of(l) && self.raw_pow(h, ord / l) == Elem::ONE {
                ord /= l;
            }
        }
        Ok(ord)
    }

    pub fn is_primitive(&self, h: Elem) -> bool {
        match &self.tables {
            Some(t) if !h.is_zero() => {
                (t.dlog[h.0 as usize] as u64).gcd(&(self.q as u64 - 1)) == 1
            }
            Some(_) => false,
            None => self.is_primitive_by_pow(h),
        }
    }

    /// True iff `h` has order `(q - 1) / n`. `n` must divide `q - 1`.
    pub fn is_n_primitive(&self, h: Elem, n: u64) -> Result<bool> {
        let qm1 = self.q as u64 - 1;
        if n == 0 || !qm1.is_multiple_of(n) {
            return Err(Error::NotADivisor {
                divisor: n,
                value: qm1,
            });
        }
        if h.is_zero() {
            return Ok(false);
        }
        Ok(self.order(h)? == qm1 / n)
    }

    pub fn is_square(&self, h: Elem) -> bool {
        h.is_zero() || self.pow(h, (self.q as u64 - 1) / 2) == Elem::ONE
    }

    /// Both square roots of `h` (ordered by canonical index), or `None` when
    /// `h` is a non-square. Zero yields `(0, 0)`.
    pub fn sqrt(&self, h: Elem) -> Option<(Elem, Elem)> {
        if h.is_zero() {
            return Some((Elem::ZERO, Elem::ZERO));
        }
        let root = match &self.tables {
            Some(t) => {
                let e = t.dlog[h.0 as usize];
                if e % 2 == 1 {
                    return None;
                }
                Elem(t.exp[(e / 2) as usize])
            }
            None => self.tonelli_shanks(h)?,
        };
        let other = self.neg(root);
        Some(if root <= other {
            (root, other)
        } else {
            (other, root)
        })
    }

    fn tonelli_shanks(&self, h: Elem) -> Option<Elem> {
        let qm1 = self.q as u64 - 1;
        if self.raw_pow(h, qm1 / 2) != Elem::ONE {
            return None;
        }
        let s = qm1.trailing_zeros();
        let odd = qm1 >> s;
        // The generator is a non-residue.
        let mut c = self.raw_pow(self.generator, odd);
        let mut x = self.raw_pow(h, odd.div_ceil(2));
        let mut t = self.raw_pow(h, odd);
        let mut m = s;
        while t != Elem::ONE {
            let mut i = 0;
            let mut tt = t;
            while tt != Elem::ONE {
                tt = self.raw_mul(tt, tt);
                i += 1;
            }
            let b = self.raw_pow(c, 1u64 << (m - i - 1));
            x = self.raw_mul(x, b);
            c = self.raw_mul(b, b);
            t = self.raw_mul(t, c);
            m = i;
        }
        Some(x)
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_p used to pick the defining polynomial.

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = fp_inv(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        for (j, &fj) in f.iter().enumerate() {
            let idx = top - df + j;
            r[idx] = (r[idx] + (p - c) * fj % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, f, p)
}

fn fp_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mulmod(&acc, &b, f, p);
        }
        b = fp_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    fp_trim(&mut out);
    out
}

/// `x^{p^j} mod f`.
fn frobenius_power(j: u32, f: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_rem(&[0, 1], f, p);
    for _ in 0..j {
        r = fp_powmod(&r, p, f, p);
    }
    r
}

/// Irreducibility of a monic `f` of degree `k` over `F_p`: root search for
/// `k ≤ 3`, Rabin's test otherwise.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() as u32 - 1;
    if k <= 1 {
        return k == 1;
    }
    if k <= 3 {
        return (0..p).all(|x| {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = (acc * x + c) % p;
            }
            acc != 0
        });
    }
    rabin_irreducible(f, p)
}

pub(crate) fn rabin_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() as u32 - 1;
    let x = vec![0u64, 1];
    if fp_sub(&frobenius_power(k, f, p), &fp_rem(&x, f, p), p) != Vec::<u64>::new() {
        return false;
    }
    for d in factorize(k as u64, None).primes() {
        let h = fp_sub(&frobenius_power(k / d as u32, f, p), &x, p);
        if fp_gcd(f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible of degree `k`, comparing
/// coefficients from the constant term upward.
pub(crate) fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let total = p.pow(k);
    for code in 0..total {
        // c_0 is the most significant digit of `code`.
        let mut coeffs = vec![0u64; k as usize + 1];
        let mut v = code;
        for i in (0..k as usize).rev() {
            coeffs[i] = v % p;
            v /= p;
        }
        coeffs[k as usize] = 1;
        if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_generators() {
        let f13 = Field::new(13, 1).unwrap();
        assert_eq!(f13.generator(), Elem(2));
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.generator(), Elem(2));
    }

    #[test]
    fn f9_construction() {
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        // x + 1 has canonical index 1 + 3
        assert_eq!(f9.generator(), Elem(4));
        let g = f9.generator();
        assert_eq!(f9.pow(g, 4), f9.from_int(2));
        assert_eq!(f9.pow(g, 8), Elem::ONE);
    }

    #[test]
    fn order_and_n_primitive_examples() {
        let f = Field::new(13, 1).unwrap();
        assert_eq!(f.order(Elem(1)).unwrap(), 1);
        assert_eq!(f.order(Elem(4)).unwrap(), 6);
        assert_eq!(f.order(Elem(2)).unwrap(), 12);
        assert!(matches!(f.order(Elem::ZERO), Err(Error::ZeroElement)));
        assert!(f.is_n_primitive(Elem(2), 1).unwrap());
        assert!(f.is_n_primitive(Elem(4), 2).unwrap());
        assert!(!f.is_n_primitive(Elem(1), 2).unwrap());
        assert!(!f.is_n_primitive(Elem::ZERO, 1).unwrap());
        assert!(f.is_n_primitive(Elem(2), 5).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(2, 3).is_err());
        assert!(Field::new(9, 1).is_err());
        assert!(matches!(
            Field::with_table_limit(101, 2, 10_000),
            Err(Error::LimitExceeded { .. })
        ));
    }

    fn odd_prime_powers(limit: u64) -> Vec<(u64, u32)> {
        (3..=limit)
            .filter_map(PrimePower::from_q)
            .map(|pp| (pp.p(), pp.k()))
            .collect()
    }

    #[test]
    fn dlog_round_trip_exhaustive() {
        for (p, k) in odd_prime_powers(2000) {
            let f = Field::new(p, k).unwrap();
            let mut seen = vec![false; f.q() as usize - 1];
            for h in f.nonzero() {
                let l = f.dlog(h).unwrap();
                assert!(!seen[l as usize]);
                seen[l as usize] = true;
                assert_eq!(f.gen_pow(l), h);
            }
        }
    }

    #[test]
    fn order_matches_repeated_multiplication() {
        for (p, k) in odd_prime_powers(500) {
            let f = Field::new(p, k).unwrap();
            for h in f.nonzero() {
                let mut e = 1;
                let mut acc = h;
                while acc != Elem::ONE {
                    acc = f.mul(acc, h);
                    e += 1;
                }
                assert_eq!(f.order(h).unwrap(), e, "q={} h={h}", f.q());
            }
        }
    }

    #[test]
    fn n_primitive_counts_are_totients() {
        for (p, k) in odd_prime_powers(2000) {
            let f = Field::new(p, k).unwrap();
            let qm1 = f.order_of_group();
            for n in f.prime_power().qm1().divisors() {
                let count = f
                    .nonzero()
                    .filter(|&h| f.is_n_primitive(h, n).unwrap())
                    .count() as u64;
                assert_eq!(count, crate::arith::euler_phi(qm1 / n));
            }
        }
    }

    #[test]
    fn deterministic_construction() {
        assert_eq!(Field::new(5, 3).unwrap(), Field::new(5, 3).unwrap());
        assert_eq!(Field::new(7, 2).unwrap(), Field::new(7, 2).unwrap());
    }

    #[test]
    fn tableless_field_agrees_with_tables() {
        for (p, k) in [(13, 1), (3, 4), (5, 2), (7, 3), (11, 2), (3, 5)] {
            let a = Field::new(p, k).unwrap();
            let b = Field::without_tables(p, k).unwrap();
            assert_eq!(a.modulus(), b.modulus());
            assert_eq!(a.generator(), b.generator());
            for h in a.nonzero() {
                assert_eq!(a.dlog(h).unwrap(), b.dlog(h).unwrap());
                assert_eq!(a.order(h).unwrap(), b.order(h).unwrap());
                assert_eq!(a.is_primitive(h), b.is_primitive(h));
                assert_eq!(a.sqrt(h), b.sqrt(h));
                let h2 = a.gen_pow(7);
                assert_eq!(a.mul(h, h2), b.mul(h, h2));
            }
        }
    }

    #[test]
    fn field_axioms_spot_check() {
        let f = Field::new(5, 3).unwrap();
        let elems: Vec<Elem> = f.elements().step_by(7).collect();
        for &a in &elems {
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            }
            for &b in &elems {
                for &c in &elems {
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn root_test_and_rabin_agree() {
        for p in [3u64, 5, 7] {
            for k in 2..=3u32 {
                let total = p.pow(k);
                for code in 0..total {
                    let mut f: Vec<u64> = (0..k).map(|i| code / p.pow(i) % p).collect();
                    f.push(1);
                    assert_eq!(is_irreducible(&f, p), rabin_irreducible(&f, p), "{f:?}");
                }
            }
        }
    }

    #[test]
    fn square_roots() {
        let f = Field::new(11, 1).unwrap();
        assert_eq!(f.sqrt(Elem(9)), Some((Elem(3), Elem(8))));
        assert_eq!(f.sqrt(Elem(2)), None);
        let big = Field::without_tables(16_763_671, 1).unwrap();
        let h = big.from_int(12345);
        let sq = big.mul(h, h);
        let (a, b) = big.sqrt(sq).unwrap();
        assert!(a == h || b == h);
    }
}
