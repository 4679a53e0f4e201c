use liqlimit_core::mc::{estimate_ce, schied_schoneborn_ce, CeEstimate};
use liqlimit_core::model::simulate_path;
use liqlimit_core::strategy::{benchmark_sinh_profile, integrate_trajectory};
use liqlimit_core::wealth::{compute_wealth, martingale_diagnostic, payoff_slack};
use liqlimit_core::{
    ImpactParams, LiquidationProblem, MarketParams, OptionSpec, StrategyKind, TimeGrid,
};
use proptest::prelude::*;

fn problem(lambda: f64, theta: f64, phi0: f64, mu: f64) -> LiquidationProblem {
    LiquidationProblem {
        market: MarketParams::new(0.0, mu, 0.2, 1.0).unwrap(),
        impact: ImpactParams::new(lambda, 1.0).unwrap(),
        option: OptionSpec::new(theta, 0.05).unwrap(),
        phi0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn upper_bound_chain_per_path(
        lambda in 0.01..0.9f64, theta in -2.0..2.0f64, phi0 in -1.5..1.5f64,
        mu in -0.3..0.3f64, seed in 0u64..500,
    ) {
        let p = problem(lambda, theta, phi0, mu);
        let grid = TimeGrid::new(1.0, 300).unwrap();
        let path = simulate_path(&p.market, grid, seed, 1);
        let traj = integrate_trajectory(&p, &path).unwrap();
        let w = compute_wealth(&path, &traj, &p).unwrap();
        let d = martingale_diagnostic(&path, &traj, &w, &p).unwrap();
        prop_assert_eq!(w.v_terminal, w.trading_pnl - w.impact_cost);
        let slack = payoff_slack(&p);
        let s_t = path.s[300];
        let g = p.claim().payoff_g(s_t - p.shift_scale() * traj.f_vals[300]);
        prop_assert!(w.payoff_x <= g + slack + 1e-12);
        prop_assert!(w.exponent / p.alpha() <= d.log_m[300] / p.alpha() + slack + 1e-9);
        prop_assert_eq!(d.log_n[0], d.log_m[0]);
    }

    #[test]
    fn certainty_equivalent_shift(exps in prop::collection::vec(-50.0..50.0f64, 2..200), b in -5.0..5.0f64, alpha in 0.1..20.0f64) {
        let base = CeEstimate::from_exponents(&exps, alpha).unwrap();
        let moved: Vec<f64> = exps.iter().map(|e| e + alpha * b).collect();
        let moved = CeEstimate::from_exponents(&moved, alpha).unwrap();
        prop_assert!((moved.value - base.value - b).abs() <= 1e-9 * (1.0 + base.value.abs()));
        // log-mean-exp lies between the mean and the max.
        let mean = exps.iter().sum::<f64>() / exps.len() as f64;
        prop_assert!(base.log_mean_exp >= mean - 1e-9);
        prop_assert!(base.log_mean_exp <= base.max_exponent + 1e-12);
    }
}

#[test]
fn terminal_wealth_converges_under_refinement() {
    let p = problem(0.2, 1.0, 0.5, 0.1);
    let fine_grid = TimeGrid::new(1.0, 4000).unwrap();
    let mut total = [0.0; 3];
    for i in 0..20 {
        let fine = simulate_path(&p.market, fine_grid, 8, i);
        let reference = {
            let traj = integrate_trajectory(&p, &fine).unwrap();
            compute_wealth(&fine, &traj, &p).unwrap().v_terminal
        };
        for (j, factor) in [8, 4, 2].into_iter().enumerate() {
            let path = fine.coarsen(&p.market, factor).unwrap();
            let traj = integrate_trajectory(&p, &path).unwrap();
            total[j] += (compute_wealth(&path, &traj, &p).unwrap().v_terminal - reference).abs();
        }
    }
    assert!(total[1] < total[0] && total[2] < total[1], "{total:?}");
}

#[test]
fn deterministic_liquidation_cost_without_noise() {
    let market = MarketParams {
        s0: 0.0,
        mu: 0.0,
        sigma: 0.0,
        horizon: 1.0,
    };
    let p = LiquidationProblem {
        market,
        impact: ImpactParams::new(0.5, 1.0).unwrap(),
        option: OptionSpec::none(),
        phi0: 1.0,
    };
    let grid = TimeGrid::new(1.0, 4000).unwrap();
    let path = simulate_path(&market, grid, 1, 0);
    let kappa = 2.0;
    let prof = benchmark_sinh_profile(1.0, kappa, grid);
    let w = compute_wealth(&path, &prof, &p).unwrap();
    // Impact cost of sinh liquidation: (lambda / 2) int Phidot^2.
    let exact = 0.25 * kappa * kappa * (0.5 * (2.0 * kappa).sinh() / kappa + 1.0)
        / kappa.sinh().powi(2)
        * 0.5;
    assert!(
        (w.impact_cost - exact).abs() / exact < 2e-3,
        "{} {exact}",
        w.impact_cost
    );
}

#[test]
fn benchmark_estimate_tracks_closed_form() {
    let p = LiquidationProblem {
        market: MarketParams::new(0.0, 0.0, 1.0, 1.0).unwrap(),
        impact: ImpactParams::new(0.5, 1.0).unwrap(),
        option: OptionSpec::none(),
        phi0: 1.0,
    };
    let grid = TimeGrid::new(1.0, 200).unwrap();
    let ce = estimate_ce(&p, StrategyKind::BenchmarkSinh, grid, 4000, 3).unwrap();
    let closed = schied_schoneborn_ce(1.0, p.alpha(), 0.5, 1.0, 1.0);
    assert!(
        (ce.value - closed).abs() < (4.0 * ce.stderr_proxy).max(1e-2),
        "{} {closed}",
        ce.value
    );
    assert!(!ce.heavy_tailed());
}
