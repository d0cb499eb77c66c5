//! Exact arithmetic for p-adic divisibility properties of binomial
//! coefficients.
//!
//! The library verifies, with arbitrary-precision rationals as the ground
//! truth, a family of congruences built on *modified factorials*
//! `a!_p = prod of k <= a with p not dividing k` and the *modified binomial
//! coefficients* `C(a,b)_p = a!_p / (b!_p (a-b)!_p)`:
//!
//! - classical digit-level facts (Kummer carries, Lucas and Anton products),
//! - Wolstenholme/Jacobsthal-type congruences `C(aq,bq)_p = 1 + O(p^r)` and
//!   their generalization to linear combinations with rational coefficients
//!   whose residual order is predicted by an explicit formula,
//! - integer linear combinations of `C(ip,p)` divisible by `p^(2n+1)`,
//! - Möbius divisor-sum congruences modulo `m^3`.
//!
//! Every fast modular kernel has an exact-rational counterpart and the two are
//! cross-checked in the test suite; valuations of zero are reported as a
//! distinct [`Valuation::Infinite`] value, never a sentinel.

pub mod approx;
pub mod arith;
pub mod bernoulli;
pub mod binomial;
pub mod mobius;
pub mod primes;
pub mod symfunc;
pub mod wolstenholme;

mod error;

pub use arith::{Integer, PAdicResidue, Rational, ResidueContext, Valuation};
pub use error::{Error, Result};
