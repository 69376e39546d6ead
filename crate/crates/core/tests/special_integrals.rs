//! Checks of `J(ξ, β) = ∫_ξ^1 (1 - s²)^β ds` against independent oracles.

use nlsdelta::special_integrals::{incomplete_profile_integral, j, sech_power_tail_integral, IntegralQuery};
use proptest::prelude::*;
use statrs::function::gamma::ln_gamma;

/// `J(0, β) = B(1/2, β + 1) / 2`.
fn half_beta(beta: f64) -> f64 {
    0.5 * (ln_gamma(0.5) + ln_gamma(beta + 1.0) - ln_gamma(beta + 1.5)).exp()
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn full_interval_matches_beta_function() {
    for beta in [-0.95, -0.9, -0.6, -0.2, 0.0, 0.4, 1.5, 7.0, 30.0] {
        let got = j(0.0, beta).unwrap();
        let want = half_beta(beta);
        // ln Γ near 75 limits the oracle to about 1e-13 relative
        assert!((got - want).abs() <= 5e-13 * want, "β = {beta}: {got} vs {want}");
    }
}

#[test]
fn half_beta_at_one_point_two() {
    // B(1/2, 2.2)/2, the exponent 1.2 exercised with an independent ln Γ
    let want = half_beta(1.2);
    assert!((j(0.0, 1.2).unwrap() - want).abs() < 1e-14);
}

#[test]
fn integer_exponents_have_polynomial_antiderivatives() {
    for xi in [0.0f64, 0.1, 0.37, 0.8, 0.999] {
        let one = (1.0 - xi) - (1.0 - xi * xi * xi) / 3.0;
        let two = (1.0 - xi) - 2.0 * (1.0 - xi.powi(3)) / 3.0 + (1.0 - xi.powi(5)) / 5.0;
        assert!((j(xi, 1.0).unwrap() - one).abs() < 1e-15);
        assert!((j(xi, 2.0).unwrap() - two).abs() < 1e-15);
        assert!((j(xi, 0.0).unwrap() - (1.0 - xi)).abs() < 1e-15);
    }
}

#[test]
fn smooth_integrands_match_simpson() {
    for (xi, beta) in [(0.2, 2.0 / 3.0 + 2.0), (0.5, 3.5), (0.05, 2.25), (0.9, 4.0)] {
        let oracle = simpson(|s: f64| (1.0 - s * s).max(0.0).powf(beta), xi, 1.0, 200_000);
        let got = j(xi, beta).unwrap();
        assert!((got - oracle).abs() < 1e-11, "ξ = {xi}, β = {beta}: {got} vs {oracle}");
    }
}

#[test]
fn profile_exponents_for_every_power() {
    // β = 2/(p−1) − 1 and 2/(p−1) for the powers used by the thresholds
    for p in [5.001, 5.5, 6.0, 10.0, 30.0, 101.0] {
        let b = 2.0 / (p - 1.0);
        for xi in [1e-10, 0.3, 0.9, 1.0 - 1e-10] {
            for beta in [b - 1.0, b] {
                let r = incomplete_profile_integral(IntegralQuery::new(xi, beta).unwrap()).unwrap();
                assert!(r.value.is_finite() && r.value >= 0.0);
                assert!(r.error_estimate <= 1e-10 * r.value.max(1.0), "{p} {xi} {beta}: {r:?}");
            }
        }
    }
}

#[test]
fn tail_identity_examples() {
    for (a, beta) in [(0.1, 0.4), (0.5, 1.0), (0.25, 1.4), (0.9, 2.5), (0.01, 0.05)] {
        let tail = sech_power_tail_integral(a, beta).unwrap().value;
        let inc = j(a, beta - 1.0).unwrap();
        assert!((tail - inc).abs() < 1e-10 * inc.max(1.0), "a = {a}, β = {beta}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Integration by parts: (1 + 2β) J(ξ, β) = 2β J(ξ, β − 1) − ξ(1 − ξ²)^β.
    #[test]
    fn integration_by_parts(xi in 0.0f64..0.999, beta in 0.05f64..6.0) {
        let lhs = (1.0 + 2.0 * beta) * j(xi, beta).unwrap();
        let rhs = 2.0 * beta * j(xi, beta - 1.0).unwrap() - xi * (1.0 - xi * xi).powf(beta);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn decreasing_in_lower_limit(a in 0.0f64..1.0, b in 0.0f64..1.0, beta in -0.9f64..5.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-9);
        prop_assert!(j(lo, beta).unwrap() > j(hi, beta).unwrap());
    }

    /// Additivity: J(ξ₁) − J(ξ₂) = ∫_{ξ₁}^{ξ₂}, smooth away from s = 1.
    #[test]
    fn additivity_against_simpson(xi in 0.0f64..0.5, width in 0.01f64..0.4, beta in -0.9f64..3.0) {
        let upper = xi + width;
        let piece = simpson(|s: f64| (1.0 - s * s).powf(beta), xi, upper, 2000);
        let diff = j(xi, beta).unwrap() - j(upper, beta).unwrap();
        prop_assert!((piece - diff).abs() < 1e-11, "{} vs {}", piece, diff);
    }
}
