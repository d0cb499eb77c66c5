//! Cross-module identities: the same quantities computed through
//! independent routes must agree exactly.

use num_traits::One;
use padbin::approx::{additive_residual, jacobsthal_order, ApproxInstance};
use padbin::arith::{rational_valuation, valuation_u64, Valuation};
use padbin::bernoulli::{is_wolstenholme_prime, wolstenholme_order};
use padbin::binomial::{binomial_exact, modified_binomial_exact};
use padbin::mobius::{divisor_mobius_sum, divisor_sum_check};
use padbin::primes::primes_in;
use padbin::wolstenholme::combo_sum;
use padbin::Rational;

/// The alternating central combination is the one-point approximation
/// residual in disguise: for a0 = n+1, a_i = 1..n, b = 1, q = p^e the
/// interpolation weights reduce to the combination weights, so the two
/// sums agree term by term.
#[test]
fn combination_is_an_approximation_residual() {
    for n in 1..=3u64 {
        for p in primes_in(2 * n + 2, 50) {
            for e in 1..=2u32 {
                if e == 2 && p > 23 {
                    continue;
                }
                let inst =
                    ApproxInstance::new(p, e, 1, n + 1, (1..=n).collect()).unwrap();
                let residual = additive_residual(&inst).unwrap();
                let sum = combo_sum(n, p.pow(e), p).unwrap();
                assert_eq!(residual, sum, "n = {n}, p = {p}, e = {e}");
            }
        }
    }
}

/// Ordinary and modified binomials split multiplicatively:
/// C(ap, bp) = C(a, b) * C(ap, bp)_p, because the multiples of p inside
/// (ap)! contribute exactly p^a * a!.
#[test]
fn ordinary_binomial_splits_off_modified_part() {
    for p in [2u64, 3, 5, 7, 11, 13, 17] {
        for a in 1..=8u64 {
            for b in 0..=a {
                let lhs = Rational::from_integer(binomial_exact(a * p, b * p));
                let rhs = Rational::from_integer(binomial_exact(a, b))
                    * modified_binomial_exact(a * p, b * p, p).unwrap();
                assert_eq!(lhs, rhs, "a = {a}, b = {b}, p = {p}");
            }
        }
    }
}

/// For prime modulus the Möbius sum collapses to a two-term difference,
/// and its p-order decomposes as nu_p(C(a,b)) plus the congruence order
/// of the modified binomial.
#[test]
fn mobius_sum_at_prime_modulus_tracks_congruence_order() {
    for p in primes_in(5, 50) {
        for a in 2..=6u64 {
            for b in 1..a {
                let sum = divisor_mobius_sum(a, b, p).unwrap();
                let direct = binomial_exact(a * p, b * p) - binomial_exact(a, b);
                assert_eq!(sum, direct);

                let (congruence_order, _) = jacobsthal_order(a, b, p).unwrap();
                let expected = match congruence_order {
                    Valuation::Finite(v) => {
                        let base = rational_valuation(
                            &Rational::from_integer(binomial_exact(a, b)),
                            p,
                        )
                        .finite()
                        .unwrap();
                        Valuation::Finite(base + v)
                    }
                    Valuation::Infinite => Valuation::Infinite,
                };
                assert_eq!(
                    rational_valuation(&Rational::from_integer(sum), p),
                    expected,
                    "a = {a}, b = {b}, p = {p}"
                );

                let report = divisor_sum_check(a, b, p, false).unwrap();
                assert!(report.pass, "a = {a}, b = {b}, p = {p}");
            }
        }
    }
}

/// The C(2p,p) mod p^4 criterion and the congruence order of the central
/// modified binomial pick out the same primes.
#[test]
fn wolstenholme_prime_criteria_agree() {
    let mut ps = primes_in(5, 300);
    ps.push(16843);
    for p in ps {
        let (observed, bound) = jacobsthal_order(2, 1, p).unwrap();
        assert_eq!(bound, 3, "p = {p}");
        let order = wolstenholme_order(p).unwrap();
        match observed {
            Valuation::Finite(v) => assert_eq!(order as i64, 4.min(v), "p = {p}"),
            Valuation::Infinite => assert_eq!(order, 4, "p = {p}"),
        }
        assert_eq!(
            is_wolstenholme_prime(p).unwrap(),
            observed.at_least(4),
            "p = {p}"
        );
    }
}

/// The modified binomial at scaled arguments is 1 + O(p^3): subtracting 1
/// never loses the third-order contact even across b and a sharing factors
/// with p.
#[test]
fn scaled_modified_binomials_have_third_order_contact() {
    for p in primes_in(5, 40) {
        for a in 2..=6u64 {
            for b in 1..a {
                let m = modified_binomial_exact(a * p, b * p, p).unwrap();
                let shifted = m - Rational::one();
                let needed = 3 + valuation_u64(a, p) as i64
                    + valuation_u64(b, p) as i64
                    + valuation_u64(a - b, p) as i64;
                assert!(
                    rational_valuation(&shifted, p).at_least(needed),
                    "a = {a}, b = {b}, p = {p}"
                );
            }
        }
    }
}
