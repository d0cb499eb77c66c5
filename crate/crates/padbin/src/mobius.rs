//! Composite-modulus congruences for binomial coefficients: Möbius-weighted
//! divisor sums whose product with a small universal factor is divisible by
//! the cube of the modulus, the signed variant, and the refined per-pair
//! factors that replace the universal ones.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{valuation, valuation_u64, Integer, Valuation};
use crate::binomial::binomial_exact;
use crate::error::{Error, Result};

/// Prime factorization by trial division; fine at desk scale (m up to
/// about 10^6).
fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Möbius function: 0 on squareful numbers, otherwise the parity sign of
/// the prime count.
pub fn mobius(n: u64) -> i8 {
    let factors = factorize(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All divisors of `n`, sorted ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (r, e) in factorize(n) {
        let len = out.len();
        let mut power = 1u64;
        for _ in 0..e {
            power *= r;
            for i in 0..len {
                out.push(out[i] * power);
            }
        }
    }
    out.sort_unstable();
    out
}

fn check_pair(a: u64, b: u64) -> Result<()> {
    if b == 0 || a <= b {
        return Err(Error::Domain(format!("need a > b > 0, got a = {a}, b = {b}")));
    }
    Ok(())
}

/// `sum_{d | m} mu(m/d) C(ad, bd)`, exact.
pub fn divisor_mobius_sum(a: u64, b: u64, m: u64) -> Result<Integer> {
    check_pair(a, b)?;
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let mut acc = BigInt::zero();
    for d in divisors(m) {
        let mu = mobius(m / d);
        if mu == 0 {
            continue;
        }
        let (ad, bd) = scaled_pair(a, b, d)?;
        let term = binomial_exact(ad, bd);
        if mu > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `sum_{d | m} (-1)^{m+d} mu(m/d) C(ad, bd)`, exact.
pub fn signed_divisor_mobius_sum(a: u64, b: u64, m: u64) -> Result<Integer> {
    check_pair(a, b)?;
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let mut acc = BigInt::zero();
    for d in divisors(m) {
        let mu = mobius(m / d);
        if mu == 0 {
            continue;
        }
        let (ad, bd) = scaled_pair(a, b, d)?;
        let term = binomial_exact(ad, bd);
        let negative = (mu < 0) ^ ((m + d) % 2 == 1);
        if negative {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

fn scaled_pair(a: u64, b: u64, d: u64) -> Result<(u64, u64)> {
    let ad = a
        .checked_mul(d)
        .ok_or_else(|| Error::Resource(format!("a*d overflows u64: {a} * {d}")))?;
    Ok((ad, b * d))
}

/// Refined replacement for the universal factor 6:
/// `M(a,b) = 12 / gcd(12, a b (a-b))`. Always divides 6 because
/// `a b (a-b)` is even.
pub fn refined_factor(a: u64, b: u64) -> Result<u64> {
    check_pair(a, b)?;
    let prod = a * b * (a - b);
    Ok(12 / gcd_u64(12, prod))
}

/// Refined replacement for the universal factor 12 in the signed variant:
/// `M'(a,b) = (3 / gcd(3, a b (a-b))) * 2^delta`, where `delta` is
/// `min(1, nu_2(b))` when `nu_2(a-b) = nu_2(b)` and 2 otherwise.
pub fn refined_factor_signed(a: u64, b: u64) -> Result<u64> {
    check_pair(a, b)?;
    let prod = a * b * (a - b);
    let delta = if valuation_u64(a - b, 2) == valuation_u64(b, 2) {
        valuation_u64(b, 2).min(1)
    } else {
        2
    };
    Ok((3 / gcd_u64(3, prod)) * (1 << delta))
}

fn gcd_u64(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Outcome of one divisibility check `m^3 | factor * sum`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSumReport {
    pub a: u64,
    pub b: u64,
    pub m: u64,
    pub sum: Integer,
    pub factor: u64,
    /// For each prime `r | m`: (r, observed order of factor*sum, required
    /// order `3 nu_r(m)`).
    pub per_prime: Vec<(u64, Valuation, u64)>,
    pub pass: bool,
    /// Slack orders `nu_2(factor*sum) - 3 nu_2(m)` and the same at 3 —
    /// how far the factor could shrink at that prime and still pass.
    /// `None` when the product is zero (unbounded slack).
    pub spare_two: Option<i64>,
    pub spare_three: Option<i64>,
}

fn build_report(a: u64, b: u64, m: u64, sum: Integer, factor: u64) -> DivisorSumReport {
    let product = &sum * BigInt::from(factor);
    let m3 = BigInt::from(m).pow(3);
    let pass = (&product % &m3).is_zero();
    let per_prime = factorize(m)
        .into_iter()
        .map(|(r, e)| (r, valuation(&product, r), 3 * e as u64))
        .collect();
    let spare = |r: u64| match valuation(&product, r) {
        Valuation::Finite(v) => Some(v - 3 * valuation_u64(m, r) as i64),
        Valuation::Infinite => None,
    };
    DivisorSumReport {
        a,
        b,
        m,
        sum,
        factor,
        per_prime,
        pass,
        spare_two: spare(2),
        spare_three: spare(3),
    }
}

/// Checks `m^3 | factor * sum` for the unsigned sum, with `factor` either
/// the universal 6 or the refined `M(a,b)`.
pub fn divisor_sum_check(a: u64, b: u64, m: u64, use_refined: bool) -> Result<DivisorSumReport> {
    let factor = if use_refined { refined_factor(a, b)? } else { 6 };
    Ok(build_report(a, b, m, divisor_mobius_sum(a, b, m)?, factor))
}

/// Signed-variant check with `factor` either the universal 12 or the
/// refined `M'(a,b)`.
pub fn signed_divisor_sum_check(
    a: u64,
    b: u64,
    m: u64,
    use_refined: bool,
) -> Result<DivisorSumReport> {
    let factor = if use_refined { refined_factor_signed(a, b)? } else { 12 };
    Ok(build_report(a, b, m, signed_divisor_mobius_sum(a, b, m)?, factor))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(2), -1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn mobius_sums_to_indicator() {
        // sum_{d|n} mu(d) = [n = 1]
        for n in 1..=200u64 {
            let total: i64 = divisors(n).into_iter().map(|d| mobius(d) as i64).sum();
            assert_eq!(total, i64::from(n == 1), "n = {n}");
        }
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn sum_examples() {
        assert_eq!(divisor_mobius_sum(2, 1, 4).unwrap(), BigInt::from(64));
        assert_eq!(divisor_mobius_sum(2, 1, 1).unwrap(), BigInt::from(2));
        assert_eq!(divisor_mobius_sum(2, 1, 6).unwrap(), BigInt::from(900));
        assert!(divisor_mobius_sum(1, 2, 4).is_err());
    }

    #[test]
    fn signed_sum_examples() {
        assert_eq!(signed_divisor_mobius_sum(2, 1, 4).unwrap(), BigInt::from(64));
        assert_eq!(signed_divisor_mobius_sum(2, 1, 1).unwrap(), BigInt::from(2));
        // m = 2: (-1)^{2+1} mu(2) C(2,1) + (-1)^{2+2} mu(1) C(4,2) = 2 + 6
        assert_eq!(signed_divisor_mobius_sum(2, 1, 2).unwrap(), BigInt::from(8));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(refined_factor(2, 1).unwrap(), 6);
        assert_eq!(refined_factor_signed(2, 1).unwrap(), 3);
        assert_eq!(refined_factor(3, 1).unwrap(), 2);
        assert_eq!(refined_factor_signed(3, 1).unwrap(), 4);
        assert_eq!(refined_factor(4, 2).unwrap(), 3);
        assert_eq!(refined_factor_signed(4, 2).unwrap(), 6);
    }

    #[test]
    fn refined_factor_divides_six() {
        for a in 2..=100u64 {
            for b in 1..a {
                assert_eq!(6 % refined_factor(a, b).unwrap(), 0, "a = {a}, b = {b}");
            }
        }
    }

    #[test]
    fn check_examples() {
        let report = divisor_sum_check(2, 1, 4, false).unwrap();
        assert!(report.pass);
        assert_eq!(report.factor, 6);
        assert_eq!(report.sum, BigInt::from(64));
        // 6*64 = 2^7 * 3 against m^3 = 2^6
        assert_eq!(report.spare_two, Some(1));
        assert_eq!(report.spare_three, Some(1));
        assert_eq!(report.per_prime, vec![(2, Valuation::Finite(7), 6)]);

        let report = divisor_sum_check(2, 1, 6, false).unwrap();
        assert!(report.pass);

        let report = signed_divisor_sum_check(2, 1, 4, true).unwrap();
        assert_eq!(report.factor, 3);
        assert!(report.pass, "3 * 64 = 192 covers 4^3");

        let report = signed_divisor_sum_check(2, 1, 1, false).unwrap();
        assert!(report.pass);
        assert_eq!(report.sum, BigInt::from(2));
        assert!(report.per_prime.is_empty());
    }

    #[test]
    fn checks_pass_small_sweep() {
        for a in 2..=6u64 {
            for b in 1..a {
                for m in 1..=30u64 {
                    for (kind, report) in [
                        ("plain", divisor_sum_check(a, b, m, false).unwrap()),
                        ("refined", divisor_sum_check(a, b, m, true).unwrap()),
                        ("signed", signed_divisor_sum_check(a, b, m, false).unwrap()),
                        ("signed refined", signed_divisor_sum_check(a, b, m, true).unwrap()),
                    ] {
                        assert!(report.pass, "{kind} fails at a={a} b={b} m={m}");
                    }
                }
            }
        }
    }
}
