//! Direct `(r,n)`-freeness tests and brute-force counts of `θ ∈ F_q` with
//! `f(θ)` `(r,n)`-free and `F(θ)` `(R,N)`-free.

use num_integer::Integer;
use rayon::prelude::*;

use crate::arith::radical;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::Poly;

/// A pair `(r, n)` with `n | q-1` and `r | (q-1)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FreenessPair {
    pub r: u64,
    pub n: u64,
}

impl FreenessPair {
    pub fn new(qm1: u64, r: u64, n: u64) -> Result<Self> {
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
        Ok(FreenessPair { r, n })
    }

    pub fn for_field(field: &Field, r: u64, n: u64) -> Result<Self> {
        Self::new(field.order_of_group(), r, n)
    }
}

/// `h` is `(r,n)`-free iff `gcd(rn, (q-1)/ord(h)) = n`. Zero is never free.
pub fn is_rn_free(field: &Field, h: Elem, pair: FreenessPair) -> bool {
    if h.is_zero() {
        return false;
    }
    let qm1 = field.order_of_group();
    let index = match field.has_tables() {
        // (q-1)/ord(h) = gcd(q-1, dlog h)
        true => qm1.gcd(&field.dlog(h).expect("nonzero")),
        false => qm1 / field.order(h).expect("nonzero"),
    };
    (pair.r * pair.n).gcd(&index) == pair.n
}

/// Freeness is unchanged when `r` is replaced by its radical. Returns whether
/// the two verdicts agree.
pub fn radical_reduction_check(field: &Field, h: Elem, pair: FreenessPair) -> bool {
    let reduced = FreenessPair {
        r: radical(pair.r),
        n: pair.n,
    };
    is_rn_free(field, h, pair) == is_rn_free(field, h, reduced)
}

/// Two polynomials and the freeness conditions imposed on their values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCountSpec {
    pub f: Poly,
    pub g: Poly,
    pub inner: FreenessPair,
    pub outer: FreenessPair,
}

impl PairCountSpec {
    /// Checks that `f` and `g` are non-constant and square-free, and that
    /// `f/g` is not constant.
    pub fn new(field: &Field, f: Poly, g: Poly, inner: FreenessPair, outer: FreenessPair) -> Result<Self> {
        let qm1 = field.order_of_group();
        FreenessPair::new(qm1, inner.r, inner.n)?;
        FreenessPair::new(qm1, outer.r, outer.n)?;
        if f.is_constant() || g.is_constant() {
            return Err(Error::Hypothesis("polynomials must be non-constant".into()));
        }
        if !f.is_squarefree(field) || !g.is_squarefree(field) {
            return Err(Error::Hypothesis("polynomials must be square-free".into()));
        }
        if f.is_constant_multiple_of(field, &g) {
            return Err(Error::Hypothesis("ratio f/F is constant".into()));
        }
        Ok(PairCountSpec { f, g, inner, outer })
    }

    /// Skips the polynomial hypotheses. Counting still works, but the
    /// character-sum estimate no longer applies.
    pub fn new_unchecked(f: Poly, g: Poly, inner: FreenessPair, outer: FreenessPair) -> Self {
        PairCountSpec { f, g, inner, outer }
    }

    /// `D`: one less than the number of distinct roots of `f·F`.
    pub fn d(&self, field: &Field) -> u64 {
        let common = Poly::gcd(field, &self.f, &self.g).degree().unwrap_or(0);
        let roots = self.f.degree().unwrap_or(0) + self.g.degree().unwrap_or(0) - common;
        roots as u64 - 1
    }

    fn hits(&self, field: &Field, theta: Elem) -> bool {
        is_rn_free(field, self.f.eval(field, theta), self.inner)
            && is_rn_free(field, self.g.eval(field, theta), self.outer)
    }
}

const PARALLEL_THRESHOLD: u64 = 1 << 14;

/// Exact number of `θ ∈ F_q` meeting both freeness conditions.
pub fn count_pairs(field: &Field, spec: &PairCountSpec) -> u64 {
    if field.q() >= PARALLEL_THRESHOLD {
        (0..field.q() as u32)
            .into_par_iter()
            .filter(|&i| spec.hits(field, Elem::from_index(i)))
            .count() as u64
    } else {
        field.elements().filter(|&t| spec.hits(field, t)).count() as u64
    }
}

/// The witness with the smallest canonical index, if any.
pub fn find_free_theta(field: &Field, spec: &PairCountSpec) -> Option<Elem> {
    field.elements().find(|&t| spec.hits(field, t))
}
