//! Order-of-approximation analysis: interpolation coefficients for a target
//! modified binomial from nearby ones, the predicted p-adic order of the
//! residual, exact and residue-ring measurements of the observed order, and
//! the classical two-term congruence as a special case.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{
    padic_pow, rational_valuation, valuation, valuation_u64, Rational, ResidueContext, Valuation,
};
use crate::bernoulli::epsilon_term;
use crate::binomial::{modified_binomial_exact, modified_binomial_mod, val_abab};
use crate::error::{Error, Result};
use crate::primes;
use crate::symfunc::{build_unit_set, elementary_symmetric};

/// Extra residue-ring headroom over the predicted order when no explicit
/// working precision is requested: enough to tell "equals r" from "> r"
/// without unbounded cost.
pub const DEFAULT_PRECISION_MARGIN: u32 = 3;

/// Default ceiling on the unit-set size the sigma diagnostic will expand
/// exactly; beyond it the diagnostic is skipped rather than ground out.
pub const DEFAULT_MAX_UNITS: usize = 600;

/// A validated approximation problem: approximate the modified binomial at
/// `(a0 q, b q)` by a combination of the ones at `(a_i q, b q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxInstance {
    p: u64,
    e: u32,
    b: u64,
    a0: u64,
    a_list: Vec<u64>,
}

impl ApproxInstance {
    /// Checks all instance invariants: odd prime, distinct `a`s no smaller
    /// than `b`, and the prime large enough for every pairwise sum — the
    /// condition under which the coefficients are p-integral.
    pub fn new(p: u64, e: u32, b: u64, a0: u64, a_list: Vec<u64>) -> Result<ApproxInstance> {
        if !primes::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::Domain("odd prime required".into()));
        }
        if e == 0 {
            return Err(Error::Domain("exponent e must be at least 1".into()));
        }
        if b == 0 {
            return Err(Error::Domain("b must be positive".into()));
        }
        if a_list.is_empty() {
            return Err(Error::Degenerate("empty approximation list".into()));
        }
        let n = a_list.len() as u64;
        let mut all = Vec::with_capacity(a_list.len() + 1);
        all.push(a0);
        all.extend_from_slice(&a_list);
        for (i, &ai) in all.iter().enumerate() {
            if ai < b {
                return Err(Error::Domain(format!("every a must be >= b = {b}, got {ai}")));
            }
            if all[..i].contains(&ai) {
                return Err(Error::Degenerate(format!("repeated value a = {ai}")));
            }
        }
        // p must exceed 2n+1 and every pairwise sum a_i + a_k - b,
        // a0 included
        let mut needed = 2 * n + 1;
        for (i, &ai) in all.iter().enumerate() {
            for &ak in &all[..i] {
                needed = needed.max(ai + ak - b);
            }
        }
        if p <= needed {
            return Err(Error::Domain(format!(
                "prime condition requires p > {needed}, got p = {p}"
            )));
        }
        if p.checked_pow(e).is_none() {
            return Err(Error::Resource(format!("q = {p}^{e} exceeds u64")));
        }
        Ok(ApproxInstance { p, e, b, a0, a_list })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// `q = p^e`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn a0(&self) -> u64 {
        self.a0
    }

    pub fn a_list(&self) -> &[u64] {
        &self.a_list
    }

    pub fn n(&self) -> usize {
        self.a_list.len()
    }

    /// The interpolation nodes `z_i = (a_i - b/2)^2`, target node first.
    fn nodes(&self) -> (Rational, Vec<Rational>) {
        let node = |a: u64| {
            let d = Rational::new(BigInt::from(2 * a - self.b), BigInt::from(2u32));
            &d * &d
        };
        (node(self.a0), self.a_list.iter().map(|&a| node(a)).collect())
    }
}

/// Interpolation coefficients
/// `y_i = prod_{k != i} (a0-a_k)(a0+a_k-b) / ((a_i-a_k)(a_i+a_k-b))`,
/// the unique solution of the moment system
/// `sum y_i z_i^d = z_0^d, d = 0..n-1`.
pub fn coefficients_y(a0: u64, a_list: &[u64], b: u64) -> Result<Vec<Rational>> {
    if b == 0 {
        return Err(Error::Domain("b must be positive".into()));
    }
    for (i, &ai) in a_list.iter().enumerate() {
        if ai == a0 || a_list[..i].contains(&ai) {
            return Err(Error::Degenerate(format!("repeated value a = {ai}")));
        }
        if ai < b {
            return Err(Error::Domain(format!("every a must be >= b = {b}, got {ai}")));
        }
    }
    if a0 < b {
        return Err(Error::Domain(format!("every a must be >= b = {b}, got {a0}")));
    }
    let big = |x: u64| BigInt::from(x);
    let diff = |x: u64, y: u64| big(x) - big(y);
    let mut ys = Vec::with_capacity(a_list.len());
    for (i, &ai) in a_list.iter().enumerate() {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (k, &ak) in a_list.iter().enumerate() {
            if k == i {
                continue;
            }
            num *= diff(a0, ak) * (big(a0 + ak) - big(b));
            den *= diff(ai, ak) * (big(ai + ak) - big(b));
        }
        ys.push(Rational::new(num, den));
    }
    Ok(ys)
}

/// `g_0(a0) = prod_k (a0 - a_k)(a0 + a_k - b)`, the node polynomial of the
/// order bound.
fn g0_value(inst: &ApproxInstance) -> BigInt {
    let mut acc = BigInt::one();
    for &ak in &inst.a_list {
        acc *= (BigInt::from(inst.a0) - BigInt::from(ak))
            * (BigInt::from(inst.a0 + ak) - BigInt::from(inst.b));
    }
    acc
}

/// Predicted lower bound on the residual order:
/// `r = (2n+1) nu_p(q) + nu_p(g_0(a0)) + nu_p(b) + eps`, with the Bernoulli
/// contribution in lower-bound mode when `nu_p(bq) > 1`.
pub fn predicted_order(inst: &ApproxInstance) -> Result<u64> {
    let p = inst.p;
    let vg = match valuation(&g0_value(inst), p) {
        Valuation::Finite(v) => v as u64,
        Valuation::Infinite => unreachable!("distinct nodes keep g_0 nonzero"),
    };
    let eps = epsilon_term(inst.n() as u64, inst.b, inst.q(), p)?;
    Ok((2 * inst.n() as u64 + 1) * inst.e as u64
        + vg
        + valuation_u64(inst.b, p) as u64
        + eps as u64)
}

/// The exact rational residual
/// `C(a0 q, b q)_p - sum_i y_i C(a_i q, b q)_p`.
pub fn additive_residual(inst: &ApproxInstance) -> Result<Rational> {
    let q = inst.q();
    let ys = coefficients_y(inst.a0, &inst.a_list, inst.b)?;
    let mut acc = modified_binomial_exact(inst.a0 * q, inst.b * q, inst.p)?;
    for (y, &ai) in ys.iter().zip(&inst.a_list) {
        acc -= y * modified_binomial_exact(ai * q, inst.b * q, inst.p)?;
    }
    Ok(acc)
}

/// p-order of the exact residual; infinite when the residual vanishes.
pub fn additive_residual_order(inst: &ApproxInstance) -> Result<Valuation> {
    Ok(rational_valuation(&additive_residual(inst)?, inst.p))
}

/// Observed order of the multiplicative residual, capped at the working
/// precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicativeOrder {
    /// `min(observed, k_work)`.
    pub order: u32,
    /// True when the residual vanished mod `p^k_work`, i.e. the true order
    /// is at least `order` and may exceed it.
    pub saturated: bool,
}

/// Order of `C(a0 q, b q)_p * prod_i C(a_i q, b q)_p^{-y_i} - 1` in the
/// residue ring mod `p^k_work`. Fractional exponents go through the
/// binomial series, whose own guards apply; integer exponents are exact at
/// any precision.
pub fn multiplicative_residual_order(
    inst: &ApproxInstance,
    k_work: u32,
) -> Result<MultiplicativeOrder> {
    let r = predicted_order(inst)?;
    if (k_work as u64) <= r {
        return Err(Error::PrecisionTooSmall { k: k_work, r });
    }
    let ctx = ResidueContext::new(inst.p, k_work)?;
    let q = inst.q();
    let ys = coefficients_y(inst.a0, &inst.a_list, inst.b)?;
    let mut acc = modified_binomial_mod(inst.a0 * q, inst.b * q, &ctx)?;
    for (y, &ai) in ys.iter().zip(&inst.a_list) {
        let ci = modified_binomial_mod(ai * q, inst.b * q, &ctx)?;
        let u = &ci - &ctx.one();
        acc = &acc * &padic_pow(&u, &-y)?;
    }
    let residual = &acc - &ctx.one();
    if residual.is_zero() {
        return Ok(MultiplicativeOrder { order: k_work, saturated: true });
    }
    match valuation(residual.value(), inst.p) {
        Valuation::Finite(v) => {
            Ok(MultiplicativeOrder { order: (v as u32).min(k_work), saturated: false })
        }
        Valuation::Infinite => unreachable!("nonzero residue"),
    }
}

/// The two-term congruence: observed order of `C(ap, bp)_p - 1` against
/// the bound `3 + nu_p(a b (a-b))`, which it must meet for every `p > 3`.
pub fn jacobsthal_order(a: u64, b: u64, p: u64) -> Result<(Valuation, u64)> {
    if !primes::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= 3 {
        return Err(Error::Domain(format!("two-term congruence needs p > 3, got {p}")));
    }
    if b == 0 || a <= b {
        return Err(Error::Domain(format!("need a > b > 0, got a = {a}, b = {b}")));
    }
    let value = modified_binomial_exact(a * p, b * p, p)?;
    let observed = rational_valuation(&(value - Rational::one()), p);
    let bound = 3 + val_abab(a, b, p) as u64;
    assert!(
        observed.at_least(bound as i64),
        "congruence order fell short: a = {a}, b = {b}, p = {p}, \
         observed {observed}, bound {bound}"
    );
    Ok((observed, bound))
}

/// Diagnostic order estimate assembled from symmetric functions:
/// `(2n+1) nu_p(q) + nu_p(g(z_0)) + nu_p(sigma_n / q)`, with `g(z) =
/// prod (z - z_i)` over the interpolation nodes and `sigma_n` the n-th
/// elementary symmetric function of the inverse squares of the unit set.
/// Exact but expensive in the set size, hence the cap.
pub fn sigma_order_diagnostic(inst: &ApproxInstance, max_units: usize) -> Result<i64> {
    let q = inst.q();
    let expected_units = (inst.b * (q / inst.p) * (inst.p - 1) / 2) as usize;
    if expected_units > max_units {
        return Err(Error::Resource(format!(
            "unit set of {expected_units} elements exceeds the diagnostic cap {max_units}"
        )));
    }
    let set = build_unit_set(inst.b, q, inst.p)?;
    let n = inst.n();
    debug_assert!(n <= set.count(), "prime condition keeps n below the set size");
    let values = set.inverse_squares();
    let sigma_n = elementary_symmetric(&values, n).pop().expect("degree n requested");
    let (z0, zs) = inst.nodes();
    let mut g = Rational::one();
    for zi in &zs {
        g *= &z0 - zi;
    }
    let vg = match rational_valuation(&g, inst.p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => unreachable!("distinct nodes keep g nonzero"),
    };
    let vsigma = match rational_valuation(&sigma_n, inst.p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => {
            return Err(Error::Degenerate("sigma_n vanished".into()));
        }
    };
    Ok((2 * n as i64 + 1) * inst.e as i64 + vg + (vsigma - inst.e as i64))
}

/// Everything the order checks produce for one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub predicted: u64,
    /// None when the unit set exceeded the diagnostic cap.
    pub sigma_diagnostic: Option<i64>,
    pub additive: Valuation,
    pub multiplicative: MultiplicativeOrder,
    /// Both observed orders meet the predicted bound.
    pub pass: bool,
}

/// Runs the full battery on one instance. `k_work` defaults to the
/// predicted order plus [`DEFAULT_PRECISION_MARGIN`].
pub fn analyze(
    inst: &ApproxInstance,
    k_work: Option<u32>,
    max_units: usize,
) -> Result<OrderReport> {
    let predicted = predicted_order(inst)?;
    let k = match k_work {
        Some(k) => k,
        None => u32::try_from(predicted).map_err(|_| {
            Error::Resource(format!("predicted order {predicted} out of precision range"))
        })? + DEFAULT_PRECISION_MARGIN,
    };
    let additive = additive_residual_order(inst)?;
    let multiplicative = multiplicative_residual_order(inst, k)?;
    let sigma_diagnostic = match sigma_order_diagnostic(inst, max_units) {
        Ok(v) => Some(v),
        Err(Error::Resource(_)) => None,
        Err(e) => return Err(e),
    };
    let pass = additive.at_least(predicted as i64) && multiplicative.order as u64 >= predicted;
    Ok(OrderReport { predicted, sigma_diagnostic, additive, multiplicative, pass })
}
