//! Divisible linear combinations of binomial coefficients: the weighted
//! alternating sum of modified binomials whose p-order grows with nu_p(m),
//! its forward-difference polynomial oracle, and the integer-coefficient
//! combination obtained by clearing denominators with the normalizer L.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};

use crate::arith::{rational_valuation, valuation_u64, Integer, Rational, Valuation};
use crate::binomial::{binomial_exact, modified_binomial_exact, modified_factorial_exact};
use crate::error::{Error, Result};
use crate::primes;

/// Dense univariate polynomial with exact rational coefficients, ascending
/// by degree. The zero polynomial stores no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Polynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Polynomial {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> Rational {
        self.eval(&Rational::from_integer(BigInt::from(x)))
    }

    /// `p(x+1)`, by Horner over the shifted variable.
    pub fn shift_one(&self) -> Polynomial {
        let mut acc: Vec<Rational> = Vec::new();
        for a in self.coeffs.iter().rev() {
            let mut next = vec![Rational::zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c;
            }
            next[0] += a;
            acc = next;
        }
        Polynomial::new(acc)
    }

    /// Forward difference `p(x+1) - p(x)`; drops the degree by one.
    pub fn forward_difference(&self) -> Polynomial {
        let shifted = self.shift_one();
        let width = shifted.coeffs.len().max(self.coeffs.len());
        let mut out = vec![Rational::zero(); width];
        for (i, c) in shifted.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Polynomial::new(out)
    }

    pub fn iterated_difference(&self, k: u32) -> Polynomial {
        let mut acc = self.clone();
        for _ in 0..k {
            acc = acc.forward_difference();
        }
        acc
    }
}

/// Expanded integer-coefficient product `F(t) = prod_{k<=m, p!|k} (k - mt)`,
/// ascending coefficients.
fn unit_product_poly(m: u64, p: u64) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    let neg_m = -BigInt::from(m);
    for k in (1..=m).filter(|k| k % p != 0) {
        let kb = BigInt::from(k);
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c * &kb;
            next[i + 1] += c * &neg_m;
        }
        coeffs = next;
    }
    coeffs
}

/// The polynomial `f(t) = prod_{k<=m, p!|k} (1 - t m / k)`, which evaluates
/// modified binomials along the arithmetic progression of step `m`:
/// `C(xm, m)_p = f(1-x)` whenever `p | m` (that condition makes the unit
/// pattern identical in every length-m block). It also satisfies the
/// reflection `f(t) = f(1-t)`.
pub fn modified_binomial_polynomial(m: u64, p: u64) -> Result<Polynomial> {
    if !primes::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 || m % p != 0 {
        return Err(Error::Domain(format!(
            "polynomial representation needs p | m, got m = {m}, p = {p}"
        )));
    }
    let denom = modified_factorial_exact(m, p);
    Ok(Polynomial::new(
        unit_product_poly(m, p)
            .into_iter()
            .map(|c| Rational::new(c, denom.clone()))
            .collect(),
    ))
}

/// Weight `C(2n+1,j) (2(n-j)+1) / (2n+1)`, an integer by the hockey-stick
/// style identity with `C(2n-1,j) - C(2n-1,j-2)`; both forms are computed
/// and compared in debug builds.
fn combo_weight(n: u64, j: u64) -> BigInt {
    let prod = binomial_exact(2 * n + 1, j) * BigInt::from(2 * (n - j) + 1);
    let (w, rem) = prod.div_rem(&BigInt::from(2 * n + 1));
    debug_assert!(rem.is_zero(), "weight must be integral at n = {n}, j = {j}");
    debug_assert_eq!(
        w,
        binomial_exact(2 * n - 1, j)
            - if j >= 2 { binomial_exact(2 * n - 1, j - 2) } else { BigInt::zero() },
        "weight identity fails at n = {n}, j = {j}"
    );
    w
}

fn check_combo_args(n: u64, p: u64) -> Result<()> {
    if !primes::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if p <= 2 * n + 1 {
        return Err(Error::Domain(format!("need p > 2n+1, got p = {p}, n = {n}")));
    }
    Ok(())
}

/// The alternating combination
/// `sum_{j=0}^{n} (-1)^j C(2n+1,j) (2(n-j)+1)/(2n+1) * C((n+1-j)m, m)_p`,
/// exact.
pub fn combo_sum(n: u64, m: u64, p: u64) -> Result<Rational> {
    check_combo_args(n, p)?;
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let mut acc = Rational::zero();
    for j in 0..=n {
        let term = Rational::from_integer(combo_weight(n, j))
            * modified_binomial_exact((n + 1 - j) * m, m, p)?;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Observed p-order of the combination against the divisibility claim
/// `(2n+1) nu_p(m)`; the claim is asserted, not returned as a boolean.
pub fn combo_order(n: u64, m: u64, p: u64) -> Result<(Valuation, u64)> {
    let observed = rational_valuation(&combo_sum(n, m, p)?, p);
    let required = (2 * n + 1) * valuation_u64(m, p) as u64;
    assert!(
        observed.at_least(required as i64),
        "combination order fell short: n = {n}, m = {m}, p = {p}, \
         observed {observed}, required {required}"
    );
    Ok((observed, required))
}

/// Evaluates the 2n-th forward difference of `f` at `-n` by its alternating
/// binomial expansion over the integer points `-n..=n`, entirely in integer
/// arithmetic until a single final division. Equals [`combo_sum`] whenever
/// `p | m` — the regime where `f` interpolates the modified binomials.
pub fn difference_oracle(n: u64, m: u64, p: u64) -> Result<Rational> {
    check_combo_args(n, p)?;
    if m == 0 || m % p != 0 {
        return Err(Error::Domain(format!(
            "difference oracle needs p | m, got m = {m}, p = {p}"
        )));
    }
    let coeffs = unit_product_poly(m, p);
    let eval_f = |x: i64| -> BigInt {
        let xb = BigInt::from(x);
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &xb + c;
        }
        acc
    };
    let mut acc = BigInt::zero();
    for i in 0..=2 * n {
        let term = binomial_exact(2 * n, i) * eval_f(i as i64 - n as i64);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(Rational::new(acc, modified_factorial_exact(m, p)))
}

/// The same alternating expansion applied to the odd part
/// `f(x) - f(-x)`; reported for inspection (it is not part of the
/// divisibility claim, and comes out zero on every instance checked).
pub fn odd_part_difference(n: u64, m: u64, p: u64) -> Result<Rational> {
    check_combo_args(n, p)?;
    if m == 0 || m % p != 0 {
        return Err(Error::Domain(format!(
            "difference oracle needs p | m, got m = {m}, p = {p}"
        )));
    }
    let coeffs = unit_product_poly(m, p);
    let eval_f = |x: i64| -> BigInt {
        let xb = BigInt::from(x);
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &xb + c;
        }
        acc
    };
    let mut acc = BigInt::zero();
    for i in 0..=2 * n {
        let x = i as i64 - n as i64;
        let term = binomial_exact(2 * n, i) * (eval_f(x) - eval_f(-x));
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(Rational::new(acc, modified_factorial_exact(m, p)))
}

/// The combination rescaled to integer coefficients: weights `t_i`, the
/// normalizer `L`, and the integers `c_i = (-1)^{i-1} L t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComboCoefficients {
    pub n: u64,
    pub t: Vec<Rational>,
    pub l: Integer,
    pub c: Vec<Integer>,
}

/// `t_i = C(2n+1, n+1-i) (2i-1) / ((2n+1) i)` for `i = 1..=n+1`.
pub fn t_coefficients(n: u64) -> Vec<Rational> {
    assert!(n >= 1);
    (1..=n + 1)
        .map(|i| {
            Rational::new(
                binomial_exact(2 * n + 1, n + 1 - i) * BigInt::from(2 * i - 1),
                BigInt::from((2 * n + 1) * i),
            )
        })
        .collect()
}

/// Closed form `L = lcm(1..2n) * (2n+1) / C(2n+1, n)`; the division is
/// exact and asserted.
pub fn normalizer_l(n: u64) -> Integer {
    assert!(n >= 1);
    let mut l = BigInt::one();
    for k in 2..=2 * n {
        l = l.lcm(&BigInt::from(k));
    }
    let (q, rem) = (l * BigInt::from(2 * n + 1)).div_rem(&binomial_exact(2 * n + 1, n));
    assert!(rem.is_zero(), "normalizer closed form must divide exactly at n = {n}");
    q
}

/// Definition route for the normalizer: `prod r^{l_r}` over primes
/// `r <= n+1`, with `l_r` the worst denominator exponent among the `t_i`.
pub fn normalizer_l_definition(n: u64) -> Integer {
    let ts = t_coefficients(n);
    let mut l = BigInt::one();
    for r in primes::sieve(n + 1) {
        let mut worst = 0i64;
        for t in &ts {
            if let Valuation::Finite(v) = rational_valuation(t, r) {
                worst = worst.max(-v);
            }
        }
        l *= BigInt::from(r).pow(worst as u32);
    }
    l
}

/// Builds the full integer-coefficient table, asserting on the way that
/// both normalizer routes agree, that every `c_i` is an integer, and that
/// the `c_i` are setwise coprime.
pub fn c_coefficients(n: u64) -> ComboCoefficients {
    let t = t_coefficients(n);
    let l = normalizer_l(n);
    assert_eq!(l, normalizer_l_definition(n), "normalizer routes disagree at n = {n}");
    let c: Vec<Integer> = t
        .iter()
        .enumerate()
        .map(|(idx, ti)| {
            let scaled = Rational::from_integer(l.clone()) * ti;
            assert!(scaled.is_integer(), "L t_i must be an integer at n = {n}, i = {}", idx + 1);
            if idx % 2 == 0 {
                scaled.to_integer()
            } else {
                -scaled.to_integer()
            }
        })
        .collect();
    let gcd = c.iter().fold(BigInt::zero(), |acc, ci| acc.gcd(ci));
    assert!(gcd.is_one(), "coefficients must be setwise coprime at n = {n}");
    ComboCoefficients { n, t, l, c }
}

/// `sum_{i=1}^{n+1} c_i C(ip, p)` over ordinary binomials, exact.
pub fn combo_value(n: u64, p: u64) -> Result<Integer> {
    check_combo_args(n, p)?;
    let table = c_coefficients(n);
    let mut acc = BigInt::zero();
    for (i, ci) in table.c.iter().enumerate() {
        acc += ci * binomial_exact((i as u64 + 1) * p, p);
    }
    Ok(acc)
}

/// `combo_value / p^{2n+1}`, with inexact division reported as a theorem
/// violation rather than truncated.
pub fn combo_quotient(n: u64, p: u64) -> Result<Integer> {
    let value = combo_value(n, p)?;
    let modulus = BigInt::from(p).pow(2 * n as u32 + 1);
    let (q, rem) = value.div_rem(&modulus);
    if !rem.is_zero() {
        return Err(Error::TheoremViolation(format!(
            "combination at n = {n}, p = {p} is not divisible by {p}^{}",
            2 * n + 1
        )));
    }
    Ok(q)
}
