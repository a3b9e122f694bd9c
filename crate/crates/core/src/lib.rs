//! `(r,n)`-freeness in finite cyclic groups and finite fields.
//!
//! The crate covers the whole pipeline from elementary arithmetic up to the
//! existence of primitive points on `y^2 = x^3 - ax`:
//!
//! - [`arith`]: Möbius, totient, square-free divisor counts, factorization.
//! - [`gf`]: construction of `F_q` with discrete-log tables.
//! - [`poly`]: polynomials over `F_q`.
//! - [`chars`]: multiplicative characters and character-sum indicators.
//! - [`freeness`]: direct freeness tests and brute-force pair counts.
//! - [`identities`]: cross-checks of the indicator and divisor-sum identities.
//! - [`bounds`]: the existence conditions and sieving-prime selection.
//! - [`sweep`]: checkpointed sweeps over odd prime powers.
//! - [`curves`]: primitive points on `y^2 = f(x)`.

pub mod arith;
pub mod bounds;
pub mod chars;
pub mod curves;
pub mod error;
pub mod freeness;
pub mod gf;
pub mod identities;
pub mod poly;
pub mod sweep;

pub use error::{Error, Result};
