use liqlimit_core::varcalc::{
    brute_force_objective, brute_force_solve, brute_force_stage_one, limit_gap, stage_one_energy,
    xi_minimizer,
};
use liqlimit_core::VariationalProblem;
use proptest::prelude::*;

fn integrate(n: usize, t_end: f64, h: impl Fn(f64) -> f64) -> f64 {
    // Composite Simpson.
    let dx = t_end / n as f64;
    let mut s = h(0.0) + h(t_end);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * h(i as f64 * dx);
    }
    s * dx / 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimizer_meets_its_constraints(
        lambda in 0.02..0.95f64, a in 0.2..3.0f64, sigma in 0.2..2.0f64,
        t_end in 0.1..2.0f64, x in -2.0..2.0f64, phi in -1.0..1.0f64,
    ) {
        let p = VariationalProblem::new(lambda, a, sigma, t_end, x, phi).unwrap();
        let s = xi_minimizer(&p).unwrap();
        let scale = x.abs().max(s.y.abs()).max(1.0);
        prop_assert!(s.minimizer(0.0).abs() <= 1e-12 * scale);
        prop_assert!((s.minimizer(t_end) - x).abs() <= 1e-12 * scale);
        let mean = integrate(20_000, t_end, |t| s.minimizer(t));
        prop_assert!((mean - s.y).abs() <= 1e-9 * scale);
        let q = p.sqrt_rho();
        let energy = integrate(20_000, t_end, |t| {
            let (d, dd) = (s.minimizer(t), s.derivative(t));
            q * q * d * d + dd * dd
        });
        let closed = stage_one_energy(&p, s.y).unwrap();
        prop_assert!((energy - closed).abs() <= 1e-6 * closed.max(1e-12));
    }

    #[test]
    fn grid_stage_one_sits_above_continuum(
        lambda in 0.05..0.9f64, x in -2.0..2.0f64, y in -1.0..1.0f64, t_end in 0.25..1.5f64,
    ) {
        let p = VariationalProblem::new(lambda, 1.0, 1.0, t_end, x, 0.0).unwrap();
        let scale = lambda / 2.0;
        let continuum = scale * stage_one_energy(&p, y).unwrap();
        let n = 400;
        let discrete = brute_force_stage_one(&p, y, n).unwrap();
        let slack = 10.0 * continuum.abs().max(1.0) / (n * n) as f64;
        prop_assert!(discrete.value >= continuum - slack);
        prop_assert!((discrete.value - continuum).abs() <= 1e-2 * continuum.abs().max(1.0));
        prop_assert_eq!(discrete.delta[0], 0.0);
        prop_assert_eq!(discrete.delta[n], x);
    }

    #[test]
    fn oracle_agrees_with_closed_form(
        lambda in 0.05..0.9f64, x in -1.5..1.5f64, phi in -1.0..1.0f64, t_end in 0.25..1.0f64,
    ) {
        let p = VariationalProblem::new(lambda, 1.0, 1.0, t_end, x, phi).unwrap();
        let closed = xi_minimizer(&p).unwrap();
        let oracle = brute_force_solve(&p, 1000).unwrap();
        prop_assert!((closed.value - oracle.value).abs() <= 1e-3 * oracle.value.abs().max(1.0));
        prop_assert!((closed.y - oracle.y).abs() <= 1e-3 * closed.y.abs().max(1.0));
        // Oracle objective is minimal at its own vertex.
        let bumped = brute_force_objective(&p, oracle.y + 0.01, 1000).unwrap();
        prop_assert!(bumped >= oracle.value);
    }
}

#[test]
fn limit_with_vanishing_square_term() {
    // x = -sigma sqrt(a) phi: the limit reduces to -sigma sqrt(a) phi^2 / 2.
    let (sigma, a, phi) = (0.5, 4.0, 0.6);
    let p = VariationalProblem::new(0.01, a, sigma, 1.0, -sigma * a.sqrt() * phi, phi).unwrap();
    assert_eq!(p.limit_value(), -0.5 * sigma * a.sqrt() * phi * phi);
    let v = xi_minimizer(&p).unwrap().value;
    assert!((limit_gap(&p).unwrap() - (v - p.limit_value()).abs()).abs() < 1e-15);
    assert!(limit_gap(&p).unwrap() < 1e-3);
}

#[test]
fn oracle_error_is_second_order() {
    let p = VariationalProblem::new(0.1, 1.0, 1.0, 1.0, 1.0, 0.5).unwrap();
    let closed = xi_minimizer(&p).unwrap().value;
    let errs: Vec<f64> = [250, 500, 1000]
        .iter()
        .map(|&n| (brute_force_solve(&p, n).unwrap().value - closed).abs())
        .collect();
    for w in errs.windows(2) {
        let r = w[1] / w[0];
        assert!((0.2..0.3).contains(&r), "{errs:?}");
    }
}
