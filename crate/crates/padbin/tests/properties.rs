//! Randomized algebraic laws. Each property is an identity that must hold
//! on every input, so shrinking failures point at real defects rather
//! than tolerance noise.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use padbin::approx::coefficients_y;
use padbin::arith::{rational_valuation, valuation, ResidueContext, Valuation};
use padbin::arith::padic_pow;
use padbin::binomial::{binomial_exact, kummer_carries, BaseDigits};
use padbin::Rational;

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (
        (-1_000_000_000i64..1_000_000_000).prop_filter("nonzero", |n| *n != 0),
        1i64..1_000_000_000,
    )
        .prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    /// nu_p is additive on products of rationals.
    #[test]
    fn valuation_additive_on_products(
        x in nonzero_rational(),
        y in nonzero_rational(),
        p in small_prime(),
    ) {
        let vx = rational_valuation(&x, p).finite().unwrap();
        let vy = rational_valuation(&y, p).finite().unwrap();
        prop_assert_eq!(
            rational_valuation(&(x * y), p),
            Valuation::Finite(vx + vy)
        );
    }

    /// Carry count when adding b and a-b in base p equals
    /// (S(b) + S(a-b) - S(a)) / (p - 1), with S the base-p digit sum.
    /// The digit-sum route never touches the binomial machinery.
    #[test]
    fn carries_match_digit_sum_formula(
        a in 0u64..1_000_000_000_000,
        frac in 0.0f64..=1.0,
        p in small_prime(),
    ) {
        let b = (a as f64 * frac) as u64;
        let report = kummer_carries(a, b, p).unwrap();
        let digit_sum = |x: u64| -> u64 {
            BaseDigits::of(x, p).digits.iter().map(|&d| d as u64).sum()
        };
        let excess = digit_sum(b) + digit_sum(a - b) - digit_sum(a);
        prop_assert_eq!(excess % (p - 1), 0);
        prop_assert_eq!(report.carries as u64, excess / (p - 1));
        prop_assert_eq!(report.positions.len() as u32, report.carries);
    }

    /// Pascal's rule on the exact binomial.
    #[test]
    fn pascal_rule(a in 1u64..400, frac in 0.0f64..=1.0) {
        let b = 1 + ((a - 1) as f64 * frac) as u64;
        prop_assert_eq!(
            binomial_exact(a, b),
            binomial_exact(a - 1, b - 1) + binomial_exact(a - 1, b)
        );
    }

    /// Fractional powers are multiplicative on 1-units: with deviations
    /// u, v from 1, the product base is 1 + (u + v + uv), and
    /// ((1+u)(1+v))^y = (1+u)^y (1+v)^y mod p^k whenever the series
    /// applies (p > k).
    #[test]
    fn fractional_power_is_homomorphic(
        p in prop::sample::select(vec![5u64, 7, 11]),
        k in 1u32..5,
        ru in 0u64..2000,
        rv in 0u64..2000,
        s in -20i64..20,
        t in prop::sample::select(vec![1u64, 2, 3, 4, 6]),
    ) {
        prop_assume!(t % p != 0);
        let ctx = ResidueContext::new(p, k).unwrap();
        let u = ctx.reduce(&BigInt::from(p * ru));
        let v = ctx.reduce(&BigInt::from(p * rv));
        let combined = &(&u + &v) + &(&u * &v);
        let y = Rational::new(BigInt::from(s), BigInt::from(t));
        let lhs = padic_pow(&combined, &y).unwrap();
        let rhs = &padic_pow(&u, &y).unwrap() * &padic_pow(&v, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Integer-exponent residue powers agree with BigInt modpow.
    #[test]
    fn integer_power_matches_modpow(
        p in small_prime(),
        k in 1u32..6,
        base in 1u64..100_000,
        exp in 0u64..1000,
    ) {
        let ctx = ResidueContext::new(p, k).unwrap();
        let u = ctx.reduce_u64(base);
        let direct = BigInt::from(base).modpow(&BigInt::from(exp), ctx.modulus());
        let via_residue = u.pow_integer(&BigInt::from(exp)).unwrap();
        prop_assert_eq!(via_residue.value(), &direct);
    }

    /// The interpolation weights solve the moment system
    /// sum_i y_i z_i^d = z0^d for 0 <= d < n, where z = (a - b/2)^2.
    /// Purely algebraic: no primality involved.
    #[test]
    fn interpolation_weights_solve_moment_system(
        b in 1u64..=4,
        picks in prop::collection::btree_set(0u64..12, 1..=4),
        extra in 0u64..6,
    ) {
        let a_list: Vec<u64> = picks.iter().map(|d| b + d).collect();
        let a0 = b + 12 + extra;
        let ys = coefficients_y(a0, &a_list, b).unwrap();
        let z = |a: u64| -> Rational {
            let t = Rational::new(BigInt::from(2 * a - b), BigInt::from(2));
            t.clone() * t
        };
        let z0 = z(a0);
        let mut z0_pow = Rational::one();
        for d in 0..a_list.len() {
            let _ = d;
            let total: Rational = ys
                .iter()
                .zip(&a_list)
                .map(|(y, &ai)| {
                    let mut zi_pow = Rational::one();
                    for _ in 0..d {
                        zi_pow = zi_pow * z(ai);
                    }
                    y * zi_pow
                })
                .fold(Rational::zero(), |acc, t| acc + t);
            prop_assert_eq!(&total, &z0_pow);
            z0_pow = z0_pow * z0.clone();
        }
    }

    /// Valuation of a u64 product agrees with the BigInt route.
    #[test]
    fn valuation_consistent_across_widths(
        x in 1u64..1_000_000_000,
        y in 1u64..1_000_000_000,
        p in small_prime(),
    ) {
        let big = BigInt::from(x) * BigInt::from(y);
        let split = padbin::arith::valuation_u64(x, p) + padbin::arith::valuation_u64(y, p);
        prop_assert_eq!(valuation(&big, p), Valuation::Finite(split as i64));
    }
}
