//! Symmetric-function machinery over exact rationals: the unit set attached
//! to a prime-power scale, elementary symmetric polynomials and power sums
//! of its inverse squares, Newton–Girard checks, and the product formula
//! that rewrites a modified binomial as a ratio of polynomial values.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{rational_valuation, Rational, Valuation};
use crate::binomial::modified_binomial_exact;
use crate::error::{Error, Result};
use crate::primes;

/// The positive numbers `bq/2 - l` (integers or half-integers) that are
/// p-units, listed in descending order. Its size is always
/// `N = bq(p-1)/(2p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSet {
    p: u64,
    q: u64,
    b: u64,
    elements: Vec<Rational>,
}

impl UnitSet {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    /// N, the number of elements.
    pub fn count(&self) -> usize {
        self.elements.len()
    }

    /// The values `1/k^2` over the set, in element order.
    pub fn inverse_squares(&self) -> Vec<Rational> {
        self.elements
            .iter()
            .map(|k| Rational::one() / (k * k))
            .collect()
    }
}

/// Enumerates `{ bq/2 - l : 0 <= l < bq/2, p not dividing bq/2 - l }`,
/// where divisibility of a half-integer `x` by `p` means `p | 2x`.
pub fn build_unit_set(b: u64, q: u64, p: u64) -> Result<UnitSet> {
    if !primes::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::Domain("unit set requires an odd prime".into()));
    }
    if b == 0 {
        return Err(Error::Domain("b must be positive".into()));
    }
    primes::prime_power_exponent(q, p)?;
    let two = BigInt::from(2u32);
    let mut elements = Vec::new();
    // walk 2x = bq - 2l downward; x > 0 and the p-test both live on 2x
    let mut two_x = b * q;
    while two_x > 0 {
        if two_x % p != 0 {
            elements.push(Rational::new(BigInt::from(two_x), two.clone()));
        }
        two_x = match two_x.checked_sub(2) {
            Some(v) => v,
            None => break,
        };
    }
    debug_assert_eq!(
        elements.len() as u64,
        b * (q / p) * (p - 1) / 2,
        "unit count must match the closed form"
    );
    debug_assert!(elements.iter().all(|e| {
        e > &Rational::zero() && rational_valuation(e, p) == Valuation::Finite(0)
    }));
    Ok(UnitSet { p, q, b, elements })
}

/// `sigma_0..sigma_upto` of the given values, by the truncated product
/// recurrence.
pub fn elementary_symmetric(values: &[Rational], upto: usize) -> Vec<Rational> {
    assert!(upto <= values.len(), "requested degree exceeds the multiset size");
    let mut sigma = vec![Rational::zero(); upto + 1];
    sigma[0] = Rational::one();
    for (seen, v) in values.iter().enumerate() {
        let top = upto.min(seen + 1);
        for i in (1..=top).rev() {
            let add = &sigma[i - 1] * v;
            sigma[i] += add;
        }
    }
    sigma
}

/// `s_1..s_n` with `s_i` the sum of i-th powers of the values.
pub fn power_sums(values: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut cur: Vec<Rational> = values.to_vec();
    for _ in 0..n {
        out.push(cur.iter().sum());
        for (c, v) in cur.iter_mut().zip(values) {
            *c *= v;
        }
    }
    out
}

/// Symmetric-function data of a unit set's inverse squares: all of
/// `sigma_0..sigma_N` plus power sums up to a requested degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymData {
    pub sigma: Vec<Rational>,
    pub powersums: Vec<Rational>,
}

pub fn sym_data(set: &UnitSet, n: usize) -> SymData {
    let values = set.inverse_squares();
    SymData {
        sigma: elementary_symmetric(&values, values.len()),
        powersums: power_sums(&values, n),
    }
}

/// Newton–Girard relations `d*sigma_d = sum_{i=1}^{d} (-1)^{i-1}
/// sigma_{d-i} s_i` for every degree `d <= n`, exactly. Degrees beyond the
/// stored sigma range use `sigma = 0`.
pub fn newton_girard_check(sym: &SymData, n: usize) -> bool {
    assert!(sym.powersums.len() >= n, "need power sums up to degree n");
    let sigma = |j: usize| -> Rational {
        sym.sigma.get(j).cloned().unwrap_or_else(Rational::zero)
    };
    for d in 1..=n {
        let mut rhs = Rational::zero();
        for i in 1..=d {
            let term = sigma(d - i) * &sym.powersums[i - 1];
            if i % 2 == 1 {
                rhs += term;
            } else {
                rhs -= term;
            }
        }
        if sigma(d) * Rational::from_integer(BigInt::from(d as u64)) != rhs {
            return false;
        }
    }
    true
}

/// `sigma_n` rebuilt from power sums alone, by summing over ordered
/// compositions `n = j_1 + ... + j_k` with telescoping denominators:
///
/// `sigma_n = (-1)^n sum_k (-1)^k sum_{j} (s_{j_1} ... s_{j_k}) /
/// (j_1 (j_1+j_2) ... (j_1+...+j_k))`
///
/// Every denominator factor is a partial sum `<= n`, so no prime above `n`
/// is introduced — the property that makes this expansion useful.
pub fn sigma_from_power_sums(s: &[Rational], n: usize) -> Rational {
    assert!(s.len() >= n, "need power sums up to degree n");
    fn rec(s: &[Rational], n: usize, total_so_far: usize, parts: u32, prod: &Rational, acc: &mut Rational) {
        for j in 1..=(n - total_so_far) {
            let t = total_so_far + j;
            let next = prod * &s[j - 1] / Rational::from_integer(BigInt::from(t as u64));
            if t == n {
                if (n as u32 + parts + 1) % 2 == 0 {
                    *acc += &next;
                } else {
                    *acc -= &next;
                }
            } else {
                rec(s, n, t, parts + 1, &next, acc);
            }
        }
    }
    if n == 0 {
        return Rational::one();
    }
    let mut acc = Rational::zero();
    rec(s, n, 0, 0, &Rational::one(), &mut acc);
    acc
}

/// `f(x) = prod_{k in S} (1 - x q^2 / k^2)`, exact.
pub fn f_eval(x: &Rational, set: &UnitSet) -> Rational {
    let q2 = Rational::from_integer(BigInt::from(set.q) * BigInt::from(set.q));
    let xq2 = x * q2;
    let mut acc = Rational::one();
    for k in &set.elements {
        acc *= Rational::one() - &xq2 / (k * k);
    }
    acc
}

/// Exact identity check: the modified binomial at `(aq, bq)` equals
/// `f(z) / f(b^2/4)` with `z = (a - b/2)^2`. The denominator never
/// vanishes: `f(b^2/4) = 0` would need `bq/2` in the set, but `p | bq`.
pub fn binomial_ratio_check(a: u64, b: u64, q: u64, p: u64) -> Result<bool> {
    if a < b {
        return Err(Error::Domain(format!("need a >= b, got a = {a}, b = {b}")));
    }
    let set = build_unit_set(b, q, p)?;
    let half_b = Rational::new(BigInt::from(b), BigInt::from(2u32));
    let z = {
        let d = Rational::from_integer(BigInt::from(a)) - &half_b;
        &d * &d
    };
    let ratio = f_eval(&z, &set) / f_eval(&(&half_b * &half_b), &set);
    Ok(ratio == modified_binomial_exact(a * q, b * q, p)?)
}
