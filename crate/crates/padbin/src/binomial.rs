//! Factorials and binomial coefficients: exact, modified (multiples of p
//! struck from the product), and fast modular kernels, plus the digit-level
//! congruence primitives (Kummer carries, Lucas and Anton products).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{valuation_u64, Integer, PAdicResidue, Rational, ResidueContext};
use crate::error::{Error, Result};
use crate::primes::{self, invmod, mulmod, powmod};

/// Base-p digits, least significant first. The digit vector of 0 is empty;
/// otherwise the leading digit is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseDigits {
    pub p: u64,
    pub digits: Vec<u64>,
}

impl BaseDigits {
    pub fn of(mut value: u64, p: u64) -> BaseDigits {
        assert!(p >= 2);
        let mut digits = Vec::new();
        while value > 0 {
            digits.push(value % p);
            value /= p;
        }
        BaseDigits { p, digits }
    }

    /// Reassemble the represented value.
    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Digit at `i`, zero-padded beyond the top.
    pub fn digit(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }
}

/// Carries produced when adding `b` and `a-b` in base p; their count equals
/// the p-adic order of `C(a,b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarryReport {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub carries: u32,
    pub positions: Vec<u32>,
}

/// Exact `C(a,b)`, with `C(a,b) = 0` for `b > a` so digit products can use
/// it uniformly.
pub fn binomial_exact(a: u64, b: u64) -> Integer {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 1..=b {
        acc = acc * BigInt::from(a - b + i) / BigInt::from(i);
    }
    acc
}

/// Product of pairwise products, halving the list until one factor remains.
/// Much faster than a running product when the factors are many and small.
fn product_tree(mut factors: Vec<Integer>) -> Integer {
    if factors.is_empty() {
        return BigInt::one();
    }
    while factors.len() > 1 {
        let mut next = Vec::with_capacity(factors.len().div_ceil(2));
        let mut it = factors.chunks_exact(2);
        for pair in &mut it {
            next.push(&pair[0] * &pair[1]);
        }
        if let [last] = it.remainder() {
            next.push(last.clone());
        }
        factors = next;
    }
    factors.pop().unwrap()
}

/// Modified factorial: the product of all `k <= a` with `p` not dividing
/// `k`. Empty product is 1.
pub fn modified_factorial_exact(a: u64, p: u64) -> Integer {
    debug_assert!(primes::is_prime(p));
    product_tree((1..=a).filter(|k| k % p != 0).map(BigInt::from).collect())
}

/// Modified binomial `a!_p / (b!_p (a-b)!_p)` as an exact rational.
///
/// Assembled prime by prime: the count of multiples of `m` in `[1,x]` that
/// are coprime to `p` is `x/m - x/(m p)`, so the exponent of a prime `r != p`
/// in `x!_p` is the sum of those counts over `m = r, r^2, ...`. Numerator and
/// denominator therefore have disjoint prime support — already in lowest
/// terms — and the denominator is coprime to `p` (a p-adic integer).
pub fn modified_binomial_exact(a: u64, b: u64, p: u64) -> Result<Rational> {
    debug_assert!(primes::is_prime(p));
    if b > a {
        return Err(Error::Domain(format!("modified binomial needs b <= a, got ({a}, {b})")));
    }
    let c = a - b;
    let mut num = Vec::new();
    let mut den = Vec::new();
    for r in primes::sieve(a) {
        if r == p {
            continue;
        }
        let coprime_count = |x: u64, m: u128| -> i64 {
            (x as u128 / m - x as u128 / (m * p as u128)) as i64
        };
        let mut e = 0i64;
        let mut m = r as u128;
        while m <= a as u128 {
            e += coprime_count(a, m) - coprime_count(b, m) - coprime_count(c, m);
            m *= r as u128;
        }
        if e > 0 {
            num.push(BigInt::from(r).pow(e as u32));
        } else if e < 0 {
            den.push(BigInt::from(r).pow((-e) as u32));
        }
    }
    // Coprime by construction, denominator positive: safe to skip reduction.
    Ok(Rational::new_raw(product_tree(num), product_tree(den)))
}

/// Sign of the product of all units in `[1, p^k]` mod `p^k`: -1 except for
/// p = 2 with k >= 3, where the unit group is no longer cyclic and the
/// product is +1.
pub fn unit_block_sign(p: u64, k: u32) -> i8 {
    if p == 2 && k >= 3 {
        1
    } else {
        -1
    }
}

/// Shared u64 kernel: `n!_p mod p^k` where `m = p^k` fits a u64.
fn modified_factorial_mod_u64(n: u64, p: u64, k: u32, m: u64) -> u64 {
    let blocks = n / m;
    let rem = n % m;
    let mut acc = 1 % m;
    let mut u = 1u64;
    while u <= rem {
        if u % p != 0 {
            acc = mulmod(acc, u, m);
        }
        u += 1;
    }
    if unit_block_sign(p, k) < 0 && blocks % 2 == 1 {
        // negate: acc is a unit, so m - acc is the canonical representative
        acc = m - acc;
    }
    acc % m
}

/// `n!_p mod p^k` in `O(min(n, p^k))` multiplications: the units of
/// `[1, p^k]` repeat with period `p^k` up to the block sign, so only the
/// final partial block is multiplied out.
pub fn modified_factorial_mod(n: u64, ctx: &ResidueContext) -> PAdicResidue {
    if let Some(m) = ctx.modulus_u64() {
        return ctx.reduce_u64(modified_factorial_mod_u64(n, ctx.p(), ctx.k(), m));
    }
    let modulus = ctx.modulus();
    let p = ctx.p();
    // modulus > u64::MAX >= n: zero full blocks, so the sign never applies
    // and only the single partial block is multiplied out.
    let mut acc = BigInt::one();
    for u in 1..=n {
        if u % p != 0 {
            acc = (acc * BigInt::from(u)) % modulus;
        }
    }
    ctx.reduce(&acc)
}

/// Modified binomial reduced mod `p^k`; equals the exact rational reduced
/// with its (p-unit) denominator inverted.
pub fn modified_binomial_mod(a: u64, b: u64, ctx: &ResidueContext) -> Result<PAdicResidue> {
    if b > a {
        return Err(Error::Domain(format!("modified binomial needs b <= a, got ({a}, {b})")));
    }
    let c = a - b;
    if let Some(m) = ctx.modulus_u64() {
        let (p, k) = (ctx.p(), ctx.k());
        let num = modified_factorial_mod_u64(a, p, k, m);
        let den = mulmod(
            modified_factorial_mod_u64(b, p, k, m),
            modified_factorial_mod_u64(c, p, k, m),
            m,
        );
        let inv = invmod(den, m).expect("products of units are units");
        return Ok(ctx.reduce_u64(mulmod(num, inv, m)));
    }
    let num = modified_factorial_mod(a, ctx);
    let den = &modified_factorial_mod(b, ctx) * &modified_factorial_mod(c, ctx);
    Ok(&num * &den.inverse()?)
}

/// Carries when adding `b` and `a-b` in base p.
pub fn kummer_carries(a: u64, b: u64, p: u64) -> Result<CarryReport> {
    debug_assert!(primes::is_prime(p));
    if b > a {
        return Err(Error::Domain(format!("carry count needs b <= a, got ({a}, {b})")));
    }
    let (mut x, mut y) = (b, a - b);
    let mut carry = 0u64;
    let mut positions = Vec::new();
    let mut pos = 0u32;
    while x > 0 || y > 0 || carry > 0 {
        let s = x % p + y % p + carry;
        carry = u64::from(s >= p);
        if carry == 1 {
            positions.push(pos);
        }
        x /= p;
        y /= p;
        pos += 1;
    }
    Ok(CarryReport { p, a, b, carries: positions.len() as u32, positions })
}

/// `C(n,r) mod p` for digits `n, r < p`, by the multiplicative formula with
/// Fermat inverses.
fn binom_mod_p(n: u64, r: u64, p: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc = 1 % p;
    for i in 1..=r {
        acc = mulmod(acc, (n - r + i) % p, p);
        acc = mulmod(acc, powmod(i % p, p - 2, p), p);
    }
    acc
}

/// Digit-wise product of binomials `prod C(a_i, b_i) mod p`; equals
/// `C(a,b) mod p`.
pub fn lucas_product(a: u64, b: u64, p: u64) -> PAdicResidue {
    let ctx = ResidueContext::new(p, 1).expect("p must be prime");
    let (da, db) = (BaseDigits::of(a, p), BaseDigits::of(b, p));
    let width = da.digits.len().max(db.digits.len());
    let mut acc = 1 % p;
    for i in 0..width {
        acc = mulmod(acc, binom_mod_p(da.digit(i), db.digit(i), p), p);
    }
    ctx.reduce_u64(acc)
}

/// Digit-wise factorial ratio `prod a_i! / (b_i! c_i!) mod p` over the
/// digits of a, b, and c = a-b; satisfies
/// `(-1)^l C(a,b) / p^l = anton_product mod p` with `l` the carry count.
pub fn anton_product(a: u64, b: u64, p: u64) -> Result<PAdicResidue> {
    if b > a {
        return Err(Error::Domain(format!("digit ratio needs b <= a, got ({a}, {b})")));
    }
    let ctx = ResidueContext::new(p, 1)?;
    let fact_mod = |d: u64| -> u64 {
        let mut acc = 1 % p;
        for i in 2..=d {
            acc = mulmod(acc, i, p);
        }
        acc
    };
    let (da, db, dc) = (BaseDigits::of(a, p), BaseDigits::of(b, p), BaseDigits::of(a - b, p));
    let width = da.digits.len().max(db.digits.len()).max(dc.digits.len());
    let mut acc = 1 % p;
    for i in 0..width {
        acc = mulmod(acc, fact_mod(da.digit(i)), p);
        let den = mulmod(fact_mod(db.digit(i)), fact_mod(dc.digit(i)), p);
        acc = mulmod(acc, powmod(den, p - 2, p), p);
    }
    Ok(ctx.reduce_u64(acc))
}

/// Exponent of `p` in `C(a,b)` via digit carries (no big arithmetic).
pub fn binomial_valuation(a: u64, b: u64, p: u64) -> Result<u32> {
    Ok(kummer_carries(a, b, p)?.carries)
}

/// `valuation_u64` of a product `a*b*(a-b)` shows up in several order
/// bounds; kept here so callers avoid BigInt for it.
pub(crate) fn val_abab(a: u64, b: u64, p: u64) -> u32 {
    debug_assert!(a > b && b > 0);
    valuation_u64(a, p) + valuation_u64(b, p) + valuation_u64(a - b, p)
}
