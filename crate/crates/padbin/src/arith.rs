//! Exact integers and rationals, p-adic valuations, the residue rings
//! `Z/p^k`, and the binomial power series `(1+u)^y` used by the
//! multiplicative congruence checks.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::primes;

pub type Integer = BigInt;
pub type Rational = BigRational;

/// p-adic order of a value: the exponent of the largest power of p dividing
/// it. Zero is divisible by every power, reported as `Infinite` — a distinct
/// variant, never a sentinel integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }

    /// True when the order is at least `bound` (always true for `Infinite`).
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Largest e with `p^e | x`, or `Infinite` for x = 0. `p` must be prime.
pub fn valuation(x: &Integer, p: u64) -> Valuation {
    debug_assert!(primes::is_prime(p), "valuation base {p} must be prime");
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut n = x.abs();
    let mut e = 0i64;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        n = q;
        e += 1;
    }
}

/// Valuation of `p` in a `u64`, for the common all-small case. `x` must be
/// nonzero.
pub fn valuation_u64(x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut n = x;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// `valuation(numerator) - valuation(denominator)`; may be negative, and is
/// `Infinite` exactly for x = 0.
pub fn rational_valuation(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let (Valuation::Finite(vn), Valuation::Finite(vd)) =
        (valuation(x.numer(), p), valuation(x.denom(), p))
    else {
        unreachable!("nonzero rational has nonzero parts")
    };
    Valuation::Finite(vn - vd)
}

/// The ring `Z/p^k`. The modulus is computed once; when it fits in a `u64`
/// the kernels downstream use native arithmetic instead of big integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueContext {
    p: u64,
    k: u32,
    modulus: Integer,
    modulus_u64: Option<u64>,
}

impl ResidueContext {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !primes::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::Domain("precision exponent k must be >= 1".into()));
        }
        let modulus = BigInt::from(p).pow(k);
        let modulus_u64 = modulus.to_u64();
        Ok(ResidueContext { p, k, modulus, modulus_u64 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &Integer {
        &self.modulus
    }

    pub fn modulus_u64(&self) -> Option<u64> {
        self.modulus_u64
    }

    /// `x mod p^k`, canonical representative in `[0, p^k)`.
    pub fn reduce(&self, x: &Integer) -> PAdicResidue {
        PAdicResidue { value: x.mod_floor(&self.modulus), context: self.clone() }
    }

    pub fn reduce_u64(&self, x: u64) -> PAdicResidue {
        self.reduce(&BigInt::from(x))
    }

    /// Reduce a rational with p-unit denominator; fails if `p` divides the
    /// denominator.
    pub fn reduce_rational(&self, x: &Rational) -> Result<PAdicResidue> {
        let inv_den = invert(x.denom(), self)?;
        Ok(&self.reduce(x.numer()) * &inv_den)
    }

    pub fn zero(&self) -> PAdicResidue {
        PAdicResidue { value: BigInt::zero(), context: self.clone() }
    }

    pub fn one(&self) -> PAdicResidue {
        // k >= 1, so 1 is already reduced.
        PAdicResidue { value: BigInt::one(), context: self.clone() }
    }
}

/// A value in `[0, p^k)` tagged with its ring. Arithmetic is only defined
/// between residues of the same ring; mixing rings is a caller bug and
/// panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicResidue {
    context: ResidueContext,
    value: Integer,
}

impl PAdicResidue {
    pub fn context(&self) -> &ResidueContext {
        &self.context
    }

    pub fn value(&self) -> &Integer {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn inverse(&self) -> Result<PAdicResidue> {
        invert(&self.value, &self.context)
    }

    /// `self^e` for a signed integer exponent; negative exponents invert
    /// first and therefore require a unit.
    pub fn pow_integer(&self, e: &Integer) -> Result<PAdicResidue> {
        let base = if e.is_negative() { self.inverse()? } else { self.clone() };
        let value = base.value.modpow(&e.abs(), self.context.modulus());
        Ok(PAdicResidue { value, context: self.context.clone() })
    }

    fn same_ring<'a>(&self, other: &'a PAdicResidue) -> &'a PAdicResidue {
        assert_eq!(
            self.context, other.context,
            "residue arithmetic across different rings"
        );
        other
    }
}

impl Add for &PAdicResidue {
    type Output = PAdicResidue;
    fn add(self, rhs: &PAdicResidue) -> PAdicResidue {
        self.same_ring(rhs);
        self.context.reduce(&(&self.value + &rhs.value))
    }
}

impl Sub for &PAdicResidue {
    type Output = PAdicResidue;
    fn sub(self, rhs: &PAdicResidue) -> PAdicResidue {
        self.same_ring(rhs);
        self.context.reduce(&(&self.value - &rhs.value))
    }
}

impl Mul for &PAdicResidue {
    type Output = PAdicResidue;
    fn mul(self, rhs: &PAdicResidue) -> PAdicResidue {
        self.same_ring(rhs);
        self.context.reduce(&(&self.value * &rhs.value))
    }
}

/// Inverse of `a` mod `p^k`; error exactly when `p | a`.
pub fn invert(a: &Integer, ctx: &ResidueContext) -> Result<PAdicResidue> {
    let reduced = a.mod_floor(ctx.modulus());
    let eg = reduced.extended_gcd(ctx.modulus());
    if !eg.gcd.is_one() {
        return Err(Error::NonInvertible { p: ctx.p(), k: ctx.k() });
    }
    Ok(ctx.reduce(&eg.x))
}

/// `(1 + u)^y` in u's ring, via the binomial series `sum_j C(y,j) u^j`.
///
/// Requires `p | u` (so the series terms gain a power of p each) and a
/// p-unit denominator in `y`. Integer exponents are evaluated by modular
/// exponentiation, which is exact at any precision; fractional exponents use
/// the series, truncated once a term's order reaches k, and additionally
/// require `p > k` so that every binomial coefficient `C(y,j)` needed before
/// truncation has a p-unit denominator (`j < p`).
pub fn padic_pow(u: &PAdicResidue, y: &Rational) -> Result<PAdicResidue> {
    let ctx = u.context();
    let p = ctx.p();
    if valuation(y.denom(), p) != Valuation::Finite(0) {
        return Err(Error::SeriesUndefined { p });
    }
    if !u.is_zero() && !valuation(u.value(), p).at_least(1) {
        return Err(Error::SeriesBase { p });
    }
    if y.is_integer() {
        let base = ctx.reduce(&(u.value() + BigInt::one()));
        return base.pow_integer(y.numer());
    }
    if u.is_zero() {
        return Ok(ctx.one());
    }
    let k = ctx.k();
    if p <= k as u64 {
        return Err(Error::PrecisionGuard { p, k });
    }
    let Valuation::Finite(vu) = valuation(u.value(), p) else { unreachable!() };
    // Term j has order >= j * vu, so only j <= (k-1)/vu contribute; that
    // keeps every j < p (the guard above), hence j and y's denominator stay
    // invertible.
    let j_max = (k as i64 - 1) / vu;
    let mut acc = ctx.one();
    let mut term = ctx.one();
    for j in 1..=j_max {
        // C(y,j) u^j = C(y,j-1) u^(j-1) * u * (y - j + 1) / j
        let ynum = y.numer() - y.denom() * BigInt::from(j - 1);
        let den = invert(&(y.denom() * BigInt::from(j)), ctx)?;
        term = &(&(&term * u) * &ctx.reduce(&ynum)) * &den;
        acc = &acc + &term;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integer_valuations() {
        assert_eq!(valuation(&BigInt::from(18), 3), Valuation::Finite(2));
        assert_eq!(valuation(&BigInt::from(-49), 7), Valuation::Finite(2));
        assert_eq!(valuation(&BigInt::from(7), 3), Valuation::Finite(0));
        assert_eq!(valuation(&BigInt::zero(), 5), Valuation::Infinite);
        // agreement with repeated division on a spread of values
        for x in [-360i64, -25, -1, 1, 12, 1024, 59049] {
            for p in [2u64, 3, 5, 7] {
                let mut n = x.unsigned_abs();
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                assert_eq!(valuation(&BigInt::from(x), p), Valuation::Finite(e));
            }
        }
    }

    #[test]
    fn rational_valuations() {
        assert_eq!(rational_valuation(&rat(2, 9), 3), Valuation::Finite(-2));
        assert_eq!(rational_valuation(&rat(1, 2), 5), Valuation::Finite(0));
        assert_eq!(rational_valuation(&rat(12, 5), 2), Valuation::Finite(2));
        assert_eq!(rational_valuation(&Rational::zero(), 3), Valuation::Infinite);
    }

    #[test]
    fn valuation_ordering() {
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
        assert!(Valuation::Finite(-1) < Valuation::Finite(0));
        assert!(Valuation::Infinite.at_least(1_i64 << 40));
        assert!(Valuation::Finite(3).at_least(3));
        assert!(!Valuation::Finite(2).at_least(3));
        assert_eq!(Valuation::Infinite.to_string(), "inf");
    }

    #[test]
    fn context_construction() {
        let ctx = ResidueContext::new(7, 3).unwrap();
        assert_eq!(ctx.modulus(), &BigInt::from(343));
        assert_eq!(ctx.modulus_u64(), Some(343));
        assert!(ResidueContext::new(6, 2).is_err());
        assert!(ResidueContext::new(7, 0).is_err());
        // a modulus too large for u64 still works, just without the fast mirror
        let big = ResidueContext::new(2124679, 4).unwrap();
        assert_eq!(big.modulus_u64(), None);
    }

    #[test]
    fn inversion() {
        let ctx = ResidueContext::new(7, 3).unwrap();
        assert_eq!(invert(&BigInt::from(2), &ctx).unwrap().value(), &BigInt::from(172));
        let ctx25 = ResidueContext::new(5, 2).unwrap();
        assert_eq!(invert(&BigInt::from(3), &ctx25).unwrap().value(), &BigInt::from(17));
        assert_eq!(invert(&BigInt::one(), &ctx25).unwrap().value(), &BigInt::one());
        assert_eq!(
            invert(&BigInt::from(10), &ctx25),
            Err(Error::NonInvertible { p: 5, k: 2 })
        );
    }

    #[test]
    #[should_panic(expected = "different rings")]
    fn cross_ring_arithmetic_panics() {
        let a = ResidueContext::new(5, 2).unwrap().reduce_u64(3);
        let b = ResidueContext::new(5, 3).unwrap().reduce_u64(3);
        let _ = &a + &b;
    }

    #[test]
    fn series_square_root() {
        // (1+7)^(1/2) mod 7^3: the square of the result must be 8.
        let ctx = ResidueContext::new(7, 3).unwrap();
        let u = ctx.reduce_u64(7);
        let r = padic_pow(&u, &rat(1, 2)).unwrap();
        assert_eq!(r.value(), &BigInt::from(127));
        assert_eq!((&r * &r).value(), &BigInt::from(8));
    }

    #[test]
    fn series_trivial_and_integer_cases() {
        let ctx = ResidueContext::new(5, 3).unwrap();
        let zero = ctx.zero();
        assert_eq!(padic_pow(&zero, &rat(5, 3)).unwrap(), ctx.one());
        // integer exponent is plain modular exponentiation: (1+5)^2 = 36
        let u = ctx.reduce_u64(5);
        let sq = padic_pow(&u, &rat(2, 1)).unwrap();
        assert_eq!(sq.value(), &BigInt::from(36));
        // and works even when p <= k (no series involved)
        let tight = ResidueContext::new(5, 6).unwrap();
        let ut = tight.reduce_u64(5);
        assert!(padic_pow(&ut, &rat(-3, 1)).is_ok());
    }

    #[test]
    fn series_errors() {
        let ctx = ResidueContext::new(5, 3).unwrap();
        let u = ctx.reduce_u64(5);
        assert_eq!(padic_pow(&u, &rat(1, 5)), Err(Error::SeriesUndefined { p: 5 }));
        let unit = ctx.reduce_u64(2);
        assert_eq!(padic_pow(&unit, &rat(1, 2)), Err(Error::SeriesBase { p: 5 }));
        let tight = ResidueContext::new(5, 6).unwrap();
        let ut = tight.reduce_u64(5);
        assert_eq!(padic_pow(&ut, &rat(1, 2)), Err(Error::PrecisionGuard { p: 5, k: 6 }));
    }

    #[test]
    fn series_negative_fractional_exponent() {
        // r = (1+7)^(-1/2) mod 343 must satisfy r^2 * 8 = 1.
        let ctx = ResidueContext::new(7, 3).unwrap();
        let u = ctx.reduce_u64(7);
        let r = padic_pow(&u, &rat(-1, 2)).unwrap();
        let check = &(&r * &r) * &ctx.reduce_u64(8);
        assert_eq!(check, ctx.one());
    }

    #[test]
    fn rational_reduction() {
        let ctx = ResidueContext::new(5, 3).unwrap();
        let r = ctx.reduce_rational(&rat(7, 3)).unwrap();
        // 3 * r = 7 mod 125
        assert_eq!((&r * &ctx.reduce_u64(3)).value(), &BigInt::from(7));
        assert!(ctx.reduce_rational(&rat(1, 10)).is_err());
        assert_eq!(
            ctx.reduce_rational(&Rational::from_i64(-1).unwrap()).unwrap().value(),
            &BigInt::from(124)
        );
    }
}
