//! Dense univariate polynomials over a [`Field`], low degree first.

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Integer coefficients mapped into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![Elem::ZERO, Elem::ONE])
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &Field, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn add(&self, field: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(Elem::ZERO);
        Poly::new(
            (0..n)
                .map(|i| field.add(get(self, i), get(other, i)))
                .collect(),
        )
    }

    pub fn scale(&self, field: &Field, c: Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, field: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self, field: &Field) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| field.mul(c, field.from_int(i as i64)))
                .collect(),
        )
    }

    /// Quotient and remainder of division by a nonzero `divisor`.
    pub fn div_rem(&self, field: &Field, divisor: &Poly) -> Result<(Poly, Poly)> {
        let lead = divisor.leading().ok_or(Error::ZeroElement)?;
        let lead_inv = field.inv(lead)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Elem::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = field.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + j;
                rem[idx] = field.sub(rem[idx], field.mul(c, dj));
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn monic(&self, field: &Field) -> Poly {
        match self.leading() {
            Some(l) => self.scale(field, field.inv(l).expect("nonzero leading coefficient")),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(field: &Field, a: &Poly, b: &Poly) -> Poly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(field, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x.monic(field)
    }

    /// No repeated factor over the algebraic closure: `gcd(f, f')` is a
    /// nonzero constant.
    pub fn is_squarefree(&self, field: &Field) -> bool {
        if self.is_zero() {
            return false;
        }
        let d = self.derivative(field);
        !d.is_zero() && Poly::gcd(field, self, &d).degree() == Some(0)
    }

    /// True iff `self = c · other` for some constant `c`, tested by
    /// cross-multiplying with the leading coefficients.
    pub fn is_constant_multiple_of(&self, field: &Field, other: &Poly) -> bool {
        match (self.leading(), other.leading()) {
            (Some(la), Some(lb)) => {
                self.coeffs.len() == other.coeffs.len()
                    && self
                        .coeffs
                        .iter()
                        .zip(&other.coeffs)
                        .all(|(&a, &b)| field.mul(a, lb) == field.mul(b, la))
            }
            (None, None) => true,
            _ => false,
        }
    }

    /// Number of distinct roots over the splitting field, valid when every
    /// root multiplicity is below the characteristic.
    pub fn distinct_root_count(&self, field: &Field) -> usize {
        let Some(deg) = self.degree() else { return 0 };
        let d = self.derivative(field);
        if d.is_zero() {
            return deg;
        }
        deg - Poly::gcd(field, self, &d).degree().unwrap_or(0)
    }

    pub fn roots_in_field(&self, field: &Field) -> usize {
        field
            .elements()
            .filter(|&x| self.eval(field, x).is_zero())
            .count()
    }
}
