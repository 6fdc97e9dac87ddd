mod common;

use common::{dd, Dd};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sipmm::model::{classify_regime, validate, ModelParams, Regime};

fn presets() -> [ModelParams; 3] {
    [ModelParams::example1(), ModelParams::example2(), ModelParams::example3()]
}

#[test]
fn drift_matches_extended_precision() {
    // a₋₁/x − a₀ + a₁x − a₂x^r with r = 4 at x = 1 and r = 2 at x = 0.5
    let ex1 = dd(1.5) / dd(1.0) - dd(2.0) + dd(1.0) - dd(13.0) * dd(1.0).powi(4);
    assert_eq!(ex1.to_f64(), -12.5);
    assert_eq!(ModelParams::example1().drift(1.0).unwrap(), ex1.to_f64());

    let x = dd(0.5);
    let ex3 = dd(1.5) / x - dd(2.0) + x - dd(13.0) * x.powi(2);
    assert_eq!(ex3.to_f64(), -1.75);
    assert_eq!(ModelParams::example3().drift(0.5).unwrap(), ex3.to_f64());
}

#[test]
fn drift_rearrangement_identity() {
    let mut rng = StdRng::seed_from_u64(5);
    for p in presets() {
        for _ in 0..1000 {
            let x: f64 = rng.random_range(1e-2..1e1);
            let drift = p.drift(x).unwrap();
            let lhs = p.alpha_m1 / x + p.alpha_1 * x - p.alpha_2 * x.powf(p.r);
            let rhs = p.alpha_0 + drift;
            let scale = (p.alpha_m1 / x).max(p.alpha_2 * x.powf(p.r)).max(1.0);
            assert!((lhs - rhs).abs() <= 1e-14 * scale, "x = {x}");
        }
    }
}

#[test]
fn g_hat_example_in_extended_precision() {
    // σ = 1, ρ = 3/2, x = 4: g = 4·√4, ĝ = (3/2)·4²
    let x = dd(4.0);
    let g: Dd = x * x.sqrt();
    let g_hat = dd(1.5) * x.powi(2);
    let p = ModelParams::example1();
    assert_eq!(p.g(4.0).unwrap(), g.to_f64());
    assert_eq!(p.g_hat(4.0).unwrap(), g_hat.to_f64());
    assert_eq!(g_hat.to_f64(), 24.0);
}

#[test]
fn g_hat_is_g_prime_times_g() {
    let mut rng = StdRng::seed_from_u64(17);
    for p in presets() {
        for _ in 0..1000 {
            let x = (rng.random_range((1e-3f64).ln()..(1e3f64).ln())).exp();
            let prod = p.g_prime(x).unwrap() * p.g(x).unwrap();
            let g_hat = p.g_hat(x).unwrap();
            assert!((g_hat - prod).abs() <= 1e-13 * g_hat.abs(), "x = {x}");
        }
    }
}

#[test]
fn g_hat_is_derivative_of_half_g_squared() {
    for p in presets() {
        let half_sq = |x: f64| 0.5 * p.g(x).unwrap().powi(2);
        for i in 0..=100 {
            let x = 0.1 * (100.0f64).powf(i as f64 / 100.0);
            let eps = 1e-5 * x;
            let fd = (half_sq(x + eps) - half_sq(x - eps)) / (2.0 * eps);
            let g_hat = p.g_hat(x).unwrap();
            assert!((fd - g_hat).abs() <= 1e-6 * g_hat.abs(), "x = {x}: {fd} vs {g_hat}");
        }
    }
}

#[test]
fn validate_examples() {
    assert!(validate(ModelParams::new(1.5, 2.0, 1.0, 13.0, 1.0, 4.0, 1.5, 0.5).unwrap()).is_ok());
    let bad = ModelParams {
        r: 1.5,
        rho: 2.0,
        ..ModelParams::example1()
    };
    assert!(validate(bad).is_err());
    let bad = ModelParams {
        alpha_m1: 0.0,
        ..ModelParams::example1()
    };
    assert!(validate(bad).unwrap_err().to_string().contains("alpha_m1"));
}

#[test]
fn regime_labels() {
    assert_eq!(classify_regime(&ModelParams::example1()), Regime::NonCritical);
    assert_eq!(classify_regime(&ModelParams::example2()), Regime::CriticalOrderOne);
    let half = ModelParams {
        alpha_2: 10.0,
        ..ModelParams::example2()
    };
    assert_eq!(classify_regime(&half), Regime::CriticalHalfOnly);
}

proptest! {
    #[test]
    fn regime_invariant_under_joint_rescaling(
        alpha_2 in 0.1f64..30.0,
        sigma in 0.2f64..3.0,
        rho in 1.05f64..3.0,
        gap in prop_oneof![Just(0.0), 0.01f64..2.0],
        c in 0.01f64..100.0,
    ) {
        let r = 2.0 * rho - 1.0 + gap;
        let p = ModelParams { alpha_2, sigma, r, rho, ..ModelParams::example1() };
        let ratio = alpha_2 / (sigma * sigma);
        // keep clear of the branch thresholds where rounding could flip the test
        prop_assume!((ratio - p.order_one_threshold()).abs() > 1e-9 * ratio);
        prop_assume!((ratio - p.monotonicity_threshold()).abs() > 1e-9 * ratio);
        let scaled = ModelParams { alpha_2: c * alpha_2, sigma: sigma * c.sqrt(), ..p };
        prop_assert_eq!(p.classify_regime(), scaled.classify_regime());
    }

    #[test]
    fn drift_has_correct_boundary_signs(
        alpha_m1 in 0.1f64..5.0,
        alpha_0 in 0.1f64..5.0,
        alpha_1 in 0.1f64..5.0,
        alpha_2 in 0.1f64..20.0,
        r in 1.5f64..5.0,
    ) {
        let p = ModelParams { alpha_m1, alpha_0, alpha_1, alpha_2, r, rho: 1.2, ..ModelParams::example1() };
        prop_assume!(p.validate().is_ok());
        prop_assert!(p.drift(1e-8).unwrap() > 0.0);
        prop_assert!(p.drift(1e8).unwrap() < 0.0);
    }
}
