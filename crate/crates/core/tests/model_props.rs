use liqlimit_core::model::{modified_payoff_g, modified_payoff_no_liq, payoff_f, simulate_paths};
use liqlimit_core::{MarketParams, ModifiedClaim, OptionSpec, TimeGrid};
use proptest::prelude::*;

fn claim(theta: f64, strike: f64, sigma: f64, a: f64, horizon: f64) -> ModifiedClaim {
    let market = MarketParams::new(0.0, 0.0, sigma, horizon).unwrap();
    ModifiedClaim::new(OptionSpec::new(theta, strike).unwrap(), &market, a)
}

proptest! {
    #[test]
    fn payoffs_are_ordered(
        theta in -3.0..3.0f64, strike in -2.0..2.0f64, sigma in 0.01..2.0f64,
        a in 0.0..4.0f64, x in -10.0..10.0f64,
    ) {
        let o = OptionSpec::new(theta, strike).unwrap();
        let f = payoff_f(&o, x);
        let h = modified_payoff_no_liq(&o, sigma, a, x);
        let g = modified_payoff_g(&o, sigma, a, x);
        prop_assert!(f >= 0.0);
        prop_assert!(h >= f);
        prop_assert!(g >= h);
    }

    #[test]
    fn price_dominates_payoff_and_is_convex(
        theta in -3.0..3.0f64, strike in -1.0..1.0f64, sigma in 0.05..1.0f64,
        a in 0.01..2.0f64, frac in 0.0..0.99f64, x in -3.0..3.0f64,
    ) {
        let c = claim(theta, strike, sigma, a, 1.5);
        let t = frac * 1.5;
        let u = c.value(t, x).unwrap();
        // Jensen: E g(x + sigma W) >= g(x).
        prop_assert!(u >= c.payoff_g(x) - 1e-12);
        prop_assert!(c.gamma(t, x).unwrap() >= 0.0);
        prop_assert!(c.delta(t, x).unwrap().abs() <= theta.abs());
        let h = 1e-3;
        let second = c.value(t, x + h).unwrap() - 2.0 * u + c.value(t, x - h).unwrap();
        prop_assert!(second >= -1e-12);
    }

    #[test]
    fn maturity_value_is_the_payoff(theta in -2.0..2.0f64, x in -3.0..3.0f64) {
        let c = claim(theta, 0.3, 0.4, 1.0, 1.0);
        prop_assert_eq!(c.value(1.0, x).unwrap(), c.payoff_g(x));
    }

    #[test]
    fn delta_is_nondecreasing_in_spot(theta in -2.0..2.0f64, x in -2.0..2.0f64, dx in 0.0..1.0f64) {
        let c = claim(theta, 0.0, 0.3, 1.0, 1.0);
        let (d0, d1) = (c.delta(0.5, x).unwrap(), c.delta(0.5, x + dx).unwrap());
        // g is convex for either sign of theta.
        prop_assert!(d1 >= d0);
    }
}

#[test]
fn out_of_range_times_are_errors() {
    let c = claim(1.0, 0.0, 0.2, 1.0, 1.0);
    assert!(c.value(-0.1, 0.0).is_err());
    assert!(c.value(1.1, 0.0).is_err());
    assert!(c.delta(1.0, 0.0).is_err());
}

#[test]
fn terminal_moments_of_simulated_paths() {
    let market = MarketParams::new(1.0, 0.3, 0.5, 2.0).unwrap();
    let grid = TimeGrid::new(2.0, 100).unwrap();
    let n = 20_000;
    let finals: Vec<f64> = simulate_paths(&market, grid, n, 11)
        .iter()
        .map(|p| p.s[100])
        .collect();
    let mean = finals.iter().sum::<f64>() / n as f64;
    let var = finals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    let sd = 0.5 * 2f64.sqrt();
    assert!((mean - 1.6).abs() < 4.0 * sd / (n as f64).sqrt());
    assert!((var / (sd * sd) - 1.0).abs() < 0.05);
}

#[test]
fn paths_are_reproducible_and_distinct() {
    let market = MarketParams::new(0.0, 0.0, 1.0, 1.0).unwrap();
    let grid = TimeGrid::new(1.0, 50).unwrap();
    let a = simulate_paths(&market, grid, 3, 5);
    let b = simulate_paths(&market, grid, 3, 5);
    assert_eq!(a, b);
    assert_ne!(a[0].w, a[1].w);
    assert_ne!(a[0].w, simulate_paths(&market, grid, 1, 6)[0].w);
}
