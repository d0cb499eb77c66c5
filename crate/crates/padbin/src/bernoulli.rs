//! Bernoulli numbers three ways: an exact recurrence-backed cache, a fast
//! power-sum kernel for the mod-p divisibility indicator at large even
//! index, and the Wolstenholme-prime tests built on top.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{valuation_u64, Rational, ResidueContext, Valuation};
use crate::error::{Error, Result};
use crate::primes::{self, invmod, mulmod, powmod};

/// Default ceiling on indices served by [`bernoulli_exact`]; the recurrence
/// is quadratic in the index, so unbounded requests are a footgun.
pub const DEFAULT_INDEX_BOUND: u64 = 2000;

/// Append-only table of exact Bernoulli numbers, filled by the defining
/// recurrence `sum_{j=0}^{m} C(m+1,j) B_j = 0` with `B_0 = 1, B_1 = -1/2`.
#[derive(Debug)]
pub struct BernoulliCache {
    values: Vec<Rational>,
    bound: u64,
}

impl BernoulliCache {
    pub fn new() -> BernoulliCache {
        BernoulliCache::with_bound(DEFAULT_INDEX_BOUND)
    }

    pub fn with_bound(bound: u64) -> BernoulliCache {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        BernoulliCache { values: vec![Rational::one(), -half], bound }
    }

    /// `B_m`, extending the table as needed.
    pub fn value(&mut self, m: u64) -> Result<Rational> {
        if m > self.bound {
            return Err(Error::Resource(format!(
                "Bernoulli index {m} exceeds the configured bound {}",
                self.bound
            )));
        }
        while (self.values.len() as u64) <= m {
            let i = self.values.len() as u64;
            if i % 2 == 1 {
                self.values.push(Rational::zero());
                continue;
            }
            // B_i = -1/(i+1) * sum_{j<i} C(i+1,j) B_j, with the binomial row
            // built incrementally.
            let mut row = BigInt::one();
            let mut sum = Rational::zero();
            for j in 0..i {
                sum += &self.values[j as usize] * Rational::from_integer(row.clone());
                row = row * BigInt::from(i + 1 - j) / BigInt::from(j + 1);
            }
            self.values.push(-sum / Rational::from_integer(BigInt::from(i + 1)));
        }
        Ok(self.values[m as usize].clone())
    }
}

impl Default for BernoulliCache {
    fn default() -> Self {
        BernoulliCache::new()
    }
}

fn global_cache() -> &'static Mutex<BernoulliCache> {
    static CACHE: OnceLock<Mutex<BernoulliCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BernoulliCache::new()))
}

/// Exact `B_m` from a process-wide synchronized cache. Odd `m > 1` gives 0;
/// indices above [`DEFAULT_INDEX_BOUND`] are refused rather than ground out.
pub fn bernoulli_exact(m: u64) -> Result<Rational> {
    if m % 2 == 1 && m > 1 {
        return Ok(Rational::zero());
    }
    global_cache().lock().expect("cache lock poisoned").value(m)
}

/// `sum_{x=1}^{p-1} x^m mod p^2`, for `p^2` within u64 range.
fn power_sum_mod_p2(m: u64, p: u64) -> u64 {
    let p2 = p * p;
    let mut s = 0u64;
    for x in 1..p {
        s = (s + powmod(x, m, p2)) % p2;
    }
    s
}

/// Indicator (0 or 1) of whether `p` divides `B_{m_0}/m_0`, where
/// `m_0 = m mod (p-1)` is the reduced index in `[2, p-3]`. By the Kummer
/// congruence `B_m/m = B_{m_0}/m_0 mod p`, the answer is invariant under
/// the reduction, so large indices cost no more than small ones.
///
/// Computed without exact Bernoulli numbers: for even `m_0` in `[2, p-3]`
/// the Faulhaber expansion of `S = sum_{x=1}^{p-1} x^{m_0}` collapses to
/// `S = p B_{m_0} mod p^2` (every lower term carries at least `p^2`, the
/// Bernoulli denominators being squarefree), so `p | B_{m_0}` exactly when
/// `p^2 | S`. Cost `O(p log m_0)` word operations.
pub fn bernoulli_val_mod_p(m: u64, p: u64) -> Result<u32> {
    if !primes::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::Domain(format!("indicator needs p >= 5, got {p}")));
    }
    if m == 0 || m % 2 == 1 {
        return Err(Error::Domain(format!("index must be even and positive, got {m}")));
    }
    if p >= 1 << 32 {
        return Err(Error::Resource(format!("power-sum kernel needs p^2 in u64, got p = {p}")));
    }
    let m0 = m % (p - 1);
    if m0 == 0 {
        return Err(Error::IrregularCase { m, p });
    }
    let s = power_sum_mod_p2(m0, p);
    debug_assert_eq!(s % p, 0, "power sum must be divisible by p");
    Ok(u32::from(s == 0))
}

/// Bernoulli contribution to the predicted order of a multiplicative
/// approximation at scale `q` (a power of `p`) and multiplier `b`.
///
/// With `t = nu_p(bq)`, the contribution is `min(t, nu_p(B))` for a
/// Bernoulli number at an even index congruent to `-2n mod (p-1)`; its
/// indicator is what the reduction can see. For `t = 1` the returned
/// `min(1, indicator)` is exact; for `t > 1` it is a lower bound, which is
/// the safe direction for an order that is itself claimed as "at least".
pub fn epsilon_term(n: u64, b: u64, q: u64, p: u64) -> Result<u32> {
    if !primes::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::Domain("odd prime required".into()));
    }
    if n == 0 || b == 0 {
        return Err(Error::Domain(format!("need n >= 1 and b >= 1, got n = {n}, b = {b}")));
    }
    if p <= 2 * n + 1 {
        return Err(Error::Domain(format!("need p > 2n+1, got p = {p}, n = {n}")));
    }
    let e = primes::prime_power_exponent(q, p)?;
    let _t = valuation_u64(b, p) + e; // exactness threshold, documented above
    bernoulli_val_mod_p(p - 1 - 2 * n, p)
}

/// `C(2p,p) mod p^4` by the unit-product route: since
/// `C(2p,p) = 2 * prod_{k=p+1}^{2p-1} k / (p-1)!`, only `2p` unit
/// multiplications mod `p^4` are needed.
fn central_binomial_mod_p4(p: u64) -> Result<BigInt> {
    let ctx = ResidueContext::new(p, 4)?;
    if let Some(m) = ctx.modulus_u64() {
        let mut num = 2 % m;
        let mut den = 1 % m;
        for k in 1..p {
            num = mulmod(num, p + k, m);
            den = mulmod(den, k, m);
        }
        let inv = invmod(den, m).expect("factorial of units is a unit");
        return Ok(BigInt::from(mulmod(num, inv, m)));
    }
    let modulus = ctx.modulus().clone();
    let mut num = BigInt::from(2u32);
    let mut den = BigInt::one();
    for k in 1..p {
        num = num * BigInt::from(p + k) % &modulus;
        den = den * BigInt::from(k) % &modulus;
    }
    let inv = ctx.reduce(&den).inverse()?;
    Ok((num * inv.value()) % modulus)
}

/// `min(4, nu_p(C(2p,p) - 2))`, from the residue mod `p^4` alone.
pub fn wolstenholme_order(p: u64) -> Result<u32> {
    if !primes::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= 3 {
        return Err(Error::Domain(format!("Wolstenholme order needs p > 3, got {p}")));
    }
    let residue = central_binomial_mod_p4(p)?;
    let d = residue - BigInt::from(2u32);
    if d.is_zero() {
        return Ok(4);
    }
    match crate::arith::valuation(&d, p) {
        Valuation::Finite(v) => Ok((v as u32).min(4)),
        Valuation::Infinite => unreachable!("nonzero difference"),
    }
}

/// Whether `C(2p,p) = 2 mod p^4`.
pub fn is_wolstenholme_prime(p: u64) -> Result<bool> {
    Ok(wolstenholme_order(p)? == 4)
}
