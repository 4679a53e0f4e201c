//! Parameterized invariant checks. Each returns measured values against a
//! bound; `validate` and the acceptance tests choose the parameters.

use std::f64::consts::PI;
use std::fmt;

use liqlimit_core::mc::{schied_schoneborn_ce, CeEstimate, PathEvaluator};
use liqlimit_core::model::{modified_payoff_g, modified_payoff_no_liq, payoff_f, simulate_path};
use liqlimit_core::qp::liquidation_qp_min;
use liqlimit_core::quadrature::{
    gauss_hermite_normal, gauss_legendre, normal_expectation_piecewise, Rule,
};
use liqlimit_core::strategy::{
    benchmark_sinh_profile, integrate_trajectory, integrate_trajectory_with, phi_rate_coth_form,
    terminal_f_bound, tracking_gap_bound, TrackingIntegrals,
};
use liqlimit_core::varcalc::{brute_force_value, limit_gap, stage_one_energy, xi_minimizer};
use liqlimit_core::wealth::{compute_wealth, martingale_diagnostic, payoff_slack};
use liqlimit_core::{
    ImpactParams, IntegratorScheme, LiquidationProblem, MarketParams, ModifiedClaim, OptionSpec,
    Path, StrategyKind, TimeGrid, VariationalProblem,
};

use crate::error::Result;
use crate::parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured <= bound`; NaN fails.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            relation: Relation::AtMost,
            passed: measured <= bound,
        }
    }

    /// Passes when `measured >= bound`; NaN fails.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            relation: Relation::AtLeast,
            passed: measured >= bound,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        write!(
            f,
            "{} {}: measured {:.6e} {op} bound {:.6e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.bound
        )
    }
}

/// Largest element, with NaN treated as `+inf`.
fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, |m, v| {
        if v.is_nan() {
            f64::INFINITY
        } else {
            m.max(v)
        }
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Composite Gauss-Legendre integral of `h` over `[lo, hi]`.
fn integrate(rule: &Rule, lo: f64, hi: f64, panels: usize, mut h: impl FnMut(f64) -> f64) -> f64 {
    let width = (hi - lo) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = lo + (p as f64 + 0.5) * width;
            0.5 * width * rule.apply(|s| h(mid + 0.5 * width * s))
        })
        .sum()
}

// ---------------------------------------------------------------- model

/// Kink of `g`, where `theta (x - K) + sigma sqrt(a) theta^2` changes sign.
fn kink(claim: &ModifiedClaim) -> f64 {
    if claim.theta == 0.0 {
        claim.strike
    } else {
        claim.strike - claim.shift / claim.theta
    }
}

/// `n` spot values over `+-4` terminal standard deviations around the kink.
fn x_points(claim: &ModifiedClaim, n: usize) -> Vec<f64> {
    let width = 4.0 * claim.sigma * claim.horizon.sqrt();
    let k = kink(claim);
    linspace(k - width, k + width, n).collect()
}

/// `n x n` grid with `t` in `[0, T)`.
fn price_grid(claim: &ModifiedClaim, n: usize) -> Vec<(f64, f64)> {
    let xs = x_points(claim, n);
    (0..n)
        .flat_map(|i| {
            let t = claim.horizon * i as f64 / n as f64;
            xs.iter().map(move |&x| (t, x))
        })
        .collect()
}

fn claim_kink_z(claim: &ModifiedClaim, t: f64, x: f64) -> f64 {
    (kink(claim) - x) / (claim.sigma * (claim.horizon - t).sqrt())
}

/// `max |u - E g(x + sigma W_{T-t})|` on an `n x n` grid, expectation by
/// kink-split composite quadrature.
pub fn price_matches_quadrature(problem: &LiquidationProblem, n: usize, tol: f64) -> Result<Check> {
    let claim = problem.claim();
    let mut worst: f64 = 0.0;
    for (t, x) in price_grid(&claim, n) {
        let s = claim.sigma * (claim.horizon - t).sqrt();
        let oracle = normal_expectation_piecewise(
            |z| claim.payoff_g(x + s * z),
            &[claim_kink_z(&claim, t, x)],
        );
        worst = worst.max((claim.value(t, x)? - oracle).abs());
    }
    Ok(Check::at_most(
        "price vs kink-split quadrature (abs)",
        worst,
        tol,
    ))
}

/// Same comparison against a 128-node Gauss-Hermite rule, whose accuracy
/// is limited by the payoff kink.
pub fn price_matches_gauss_hermite(
    problem: &LiquidationProblem,
    n: usize,
    tol: f64,
) -> Result<Check> {
    let claim = problem.claim();
    let rule = gauss_hermite_normal(128);
    let mut worst: f64 = 0.0;
    for (t, x) in price_grid(&claim, n) {
        let s = claim.sigma * (claim.horizon - t).sqrt();
        let oracle = rule.apply(|z| claim.payoff_g(x + s * z));
        worst = worst.max((claim.value(t, x)? - oracle).abs());
    }
    Ok(Check::at_most(
        "price vs 128-node Gauss-Hermite (abs)",
        worst,
        tol,
    ))
}

/// `max |u_t + sigma^2 u_xx / 2|` by central differences with step `h`,
/// over interior times in `[0.05 T, 0.9 T]`.
pub fn pde_residual(problem: &LiquidationProblem, n: usize, h: f64, tol: f64) -> Result<Check> {
    let claim = problem.claim();
    let t_end = claim.horizon;
    let mut worst: f64 = 0.0;
    let xs = x_points(&claim, n);
    for t in linspace(0.05 * t_end, 0.9 * t_end, n) {
        for &x in &xs {
            let u_t = (claim.value(t + h, x)? - claim.value(t - h, x)?) / (2.0 * h);
            let u_xx = (claim.value(t, x + h)? - 2.0 * claim.value(t, x)?
                + claim.value(t, x - h)?)
                / (h * h);
            worst = worst.max((u_t + 0.5 * claim.sigma * claim.sigma * u_xx).abs());
        }
    }
    Ok(Check::at_most("pricing PDE residual", worst, tol))
}

/// `max (|u_x| - |theta|)` including times right up to maturity.
pub fn delta_bounded(problem: &LiquidationProblem, n: usize) -> Result<Check> {
    let claim = problem.claim();
    let mut worst = f64::NEG_INFINITY;
    let mut times: Vec<f64> = (0..n)
        .map(|i| claim.horizon * i as f64 / n as f64)
        .collect();
    times.extend([1.0 - 1e-6, 1.0 - 1e-10].map(|f| claim.horizon * f));
    for t in times {
        for &x in &x_points(&claim, n) {
            worst = worst.max(claim.delta(t, x)?.abs() - claim.theta.abs());
        }
    }
    Ok(Check::at_most("|u_x| - |theta|", worst, 0.0))
}

/// Closed-form `u_x` against a central difference of `u`.
pub fn delta_matches_fd(problem: &LiquidationProblem, n: usize, tol: f64) -> Result<Check> {
    let claim = problem.claim();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for (t, x) in price_grid(&claim, n) {
        let fd = (claim.value(t, x + h)? - claim.value(t, x - h)?) / (2.0 * h);
        worst = worst.max((claim.delta(t, x)? - fd).abs());
    }
    Ok(Check::at_most("u_x vs finite difference", worst, tol))
}

/// `min (g - g_noliq)` and `min (g_noliq - f)` over a dense line.
pub fn payoff_ordering(problem: &LiquidationProblem, n: usize) -> Vec<Check> {
    let (o, sigma, a) = (&problem.option, problem.market.sigma, problem.impact.a);
    let span = 5.0 * (1.0 + sigma);
    let mut gap_g = f64::INFINITY;
    let mut gap_f = f64::INFINITY;
    for x in linspace(o.strike - span, o.strike + span, n) {
        let g = modified_payoff_g(o, sigma, a, x);
        let h = modified_payoff_no_liq(o, sigma, a, x);
        gap_g = gap_g.min(g - h);
        gap_f = gap_f.min(h - payoff_f(o, x));
    }
    vec![
        Check::at_least("g - g_noliq", gap_g, 0.0),
        Check::at_least("g_noliq - f", gap_f, 0.0),
    ]
}

/// Sample mean and variance of `S_T` against `s0 + mu T` and `sigma^2 T`.
pub fn terminal_moments(
    market: &MarketParams,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<Vec<Check>> {
    let grid = TimeGrid::new(market.horizon, n_steps)?;
    let finals = parallel::map_indices(n_paths, |i| {
        Ok(*simulate_path(market, grid, seed, i).s.last().unwrap())
    })?;
    let n = n_paths as f64;
    let mean = finals.iter().sum::<f64>() / n;
    let var = finals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let t = market.horizon;
    let sd = market.sigma * t.sqrt();
    Ok(vec![
        Check::at_most(
            "S_T sample mean error / (sigma sqrt(T / n))",
            (mean - market.s0 - market.mu * t).abs() / (sd / n.sqrt()),
            4.0,
        ),
        Check::at_most(
            "S_T sample variance relative error",
            (var / (sd * sd) - 1.0).abs(),
            0.05,
        ),
    ])
}

// ---------------------------------------------------------------- strategy

/// Integrated trajectory with `theta = 0` against the closed sinh profile,
/// relative error with the subnormal floor `f64::MIN_POSITIVE`.
pub fn theta_zero_exactness(q_horizons: &[f64], n_steps: usize, seed: u64) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for &qt in q_horizons {
        for phi0 in [1.0, -2.5] {
            let market = MarketParams::new(0.3, 0.05, 1.0, 1.0)?;
            let problem = LiquidationProblem {
                market,
                impact: ImpactParams::new(1.0 / qt, 1.0)?,
                option: OptionSpec::none(),
                phi0,
            };
            let grid = TimeGrid::new(1.0, n_steps)?;
            let path = simulate_path(&market, grid, seed, 0);
            let traj = integrate_trajectory(&problem, &path)?;
            let prof = benchmark_sinh_profile(phi0, problem.sqrt_rho(), grid);
            for (a, b) in traj.phi_vals.iter().zip(&prof.phi_vals) {
                let rel = (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
                worst = worst.max(if a.is_finite() { rel } else { f64::INFINITY });
            }
        }
    }
    Ok(Check::at_most(
        "theta = 0 trajectory vs sinh profile (rel)",
        worst,
        1e-10,
    ))
}

struct PathStats {
    phi_terminal: f64,
    f_terminal: f64,
    identity: f64,
    gap: f64,
}

/// Four checks over `n_paths` simulated paths: `Phi_T = 0`, the terminal
/// `F` bound, the tracking identity and the tracking-gap bound.
pub fn admissibility(
    problem: &LiquidationProblem,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
    scheme: IntegratorScheme,
) -> Result<Vec<Check>> {
    let grid = TimeGrid::new(problem.market.horizon, n_steps)?;
    let stats = parallel::map_indices(n_paths, |i| {
        let path = simulate_path(&problem.market, grid, seed, i);
        let traj = integrate_trajectory_with(problem, &path, scheme)?;
        let ints = TrackingIntegrals::of(&traj);
        Ok(PathStats {
            phi_terminal: traj.phi_vals[n_steps].abs(),
            f_terminal: traj.f_vals[n_steps].abs(),
            identity: ints.identity_residual(problem).abs(),
            gap: ints.gap(),
        })
    })?;
    let dt = grid.dt();
    Ok(vec![
        Check::at_most(
            "max |Phi_T|",
            max_of(stats.iter().map(|s| s.phi_terminal)),
            0.0,
        ),
        Check::at_most(
            "max |F_T|",
            max_of(stats.iter().map(|s| s.f_terminal)),
            terminal_f_bound(problem) + 1e-6,
        ),
        Check::at_most(
            "max tracking identity residual",
            max_of(stats.iter().map(|s| s.identity)),
            5.0 * dt,
        ),
        Check::at_most(
            "max |int Upsilon - int Phi|",
            max_of(stats.iter().map(|s| s.gap)),
            tracking_gap_bound(problem) + 5.0 * dt,
        ),
    ])
}

/// The explicit Euler scheme at `sqrt(rho) dt = 4` must break the tracking
/// identity; passes when the residual exceeds `5 dt`.
pub fn euler_negative_control(n_paths: usize, seed: u64) -> Result<Check> {
    let market = MarketParams::new(0.0, 0.0, 0.2, 1.0)?;
    let n_steps = 1000;
    let dt = 1.0 / n_steps as f64;
    let problem = LiquidationProblem {
        market,
        impact: ImpactParams::new(0.2 * dt / 4.0, 1.0)?,
        option: OptionSpec::new(1.0, 0.0)?,
        phi0: 0.5,
    };
    let checks = admissibility(
        &problem,
        n_paths,
        n_steps,
        seed,
        IntegratorScheme::ExplicitEuler,
    )?;
    let residual = checks[2].measured;
    let measured = if residual.is_finite() {
        residual
    } else {
        f64::INFINITY
    };
    Ok(Check::at_least(
        "explicit Euler breaks the tracking identity",
        measured,
        5.0 * dt,
    ))
}

/// `Phidot` in the `F` form against the `coth` form away from maturity.
pub fn rate_forms_agree(problem: &LiquidationProblem, n_steps: usize, seed: u64) -> Result<Check> {
    let grid = TimeGrid::new(problem.market.horizon, n_steps)?;
    let path = simulate_path(&problem.market, grid, seed, 0);
    let traj = integrate_trajectory(problem, &path)?;
    let coth = phi_rate_coth_form(&traj);
    let worst = max_of(
        traj.phi_rate[..n_steps]
            .iter()
            .zip(&coth)
            .map(|(a, b)| (a - b).abs() / b.abs().max(1.0)),
    );
    Ok(Check::at_most(
        "Phidot F-form vs coth-form (rel)",
        worst,
        1e-9,
    ))
}

/// Closed-form pure-liquidation value against the tridiagonal QP minimum.
pub fn closed_form_vs_qp(
    phi0: f64,
    alpha: f64,
    lambda: f64,
    sigma: f64,
    horizon: f64,
    n: usize,
) -> Result<Check> {
    let closed = schied_schoneborn_ce(phi0, alpha, lambda, sigma, horizon);
    let qp = liquidation_qp_min(phi0, alpha * sigma * sigma, lambda, horizon, n)?;
    Ok(Check::at_most(
        "liquidation closed form vs QP (rel)",
        (closed - qp).abs() / qp.abs(),
        1e-5,
    ))
}

// ---------------------------------------------------------------- wealth

/// `V_T = pnl - cost` exactly, and pathwise `f(S_T) <= g(S_T - sigma
/// sqrt(a) F_T) + slack`, which closes the chain `X - V_T <= log M_T / alpha + slack`.
pub fn wealth_chain(
    problem: &LiquidationProblem,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<Vec<Check>> {
    let grid = TimeGrid::new(problem.market.horizon, n_steps)?;
    let slack = payoff_slack(problem);
    let claim = problem.claim();
    let shift = problem.shift_scale();
    let rows = parallel::map_indices(n_paths, |i| {
        let path = simulate_path(&problem.market, grid, seed, i);
        let traj = integrate_trajectory(problem, &path)?;
        let w = compute_wealth(&path, &traj, problem)?;
        let d = martingale_diagnostic(&path, &traj, &w, problem)?;
        let s_t = path.s[n_steps];
        let domination = w.payoff_x - claim.payoff_g(s_t - shift * traj.f_vals[n_steps]) - slack;
        let chain = w.exponent - d.log_m[n_steps] - problem.alpha() * slack;
        let decomposition = (w.v_terminal - (w.trading_pnl - w.impact_cost)).abs();
        Ok((decomposition, domination, chain / problem.alpha()))
    })?;
    Ok(vec![
        Check::at_most(
            "|V_T - (pnl - cost)|",
            max_of(rows.iter().map(|r| r.0)),
            0.0,
        ),
        Check::at_most(
            "max f(S_T) - g(S_T - kF_T) - slack",
            max_of(rows.iter().map(|r| r.1)),
            1e-12,
        ),
        Check::at_most(
            "max (X - V_T) - log M_T / alpha - slack",
            max_of(rows.iter().map(|r| r.2)),
            1e-9,
        ),
    ])
}

/// Which per-path residual functional a refinement check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualMeasure {
    /// `|sum_k r_k|` of the raw residuals.
    RawSum,
    /// `sum_k |r_k|` of the raw residuals.
    RawL1,
    /// `sum_k |r_k|` after removing the quadratic-variation term.
    ItoRemainderL1,
}

fn residual_measure(
    problem: &LiquidationProblem,
    path: &Path,
    measure: ResidualMeasure,
) -> liqlimit_core::Result<f64> {
    let traj = integrate_trajectory(problem, path)?;
    let w = compute_wealth(path, &traj, problem)?;
    let d = martingale_diagnostic(path, &traj, &w, problem)?;
    Ok(match measure {
        ResidualMeasure::RawSum => d.residual_sum().abs(),
        ResidualMeasure::RawL1 => d.residual_l1(),
        ResidualMeasure::ItoRemainderL1 => d.ito_remainder_l1(),
    })
}

/// Number of `n_paths` fixed fine paths whose residual shrinks when the
/// step is halved, i.e. the fine value is below that of the path coarsened by 2.
pub fn residual_refinement(
    problem: &LiquidationProblem,
    n_fine: usize,
    n_paths: usize,
    seed: u64,
    measure: ResidualMeasure,
    min_fraction: f64,
) -> Result<Check> {
    let grid = TimeGrid::new(problem.market.horizon, n_fine)?;
    let shrunk = parallel::map_indices(n_paths, |i| {
        let fine = simulate_path(&problem.market, grid, seed, i);
        let coarse = fine.coarsen(&problem.market, 2)?;
        Ok(residual_measure(problem, &fine, measure)?
            < residual_measure(problem, &coarse, measure)?)
    })?;
    let count = shrunk.iter().filter(|&&s| s).count() as f64;
    let name = match measure {
        ResidualMeasure::RawSum => "paths with |sum residual| shrinking under dt halving",
        ResidualMeasure::RawL1 => "paths with L1 residual shrinking under dt halving",
        ResidualMeasure::ItoRemainderL1 => "paths with Ito remainder shrinking under dt halving",
    };
    Ok(Check::at_least(
        name,
        count,
        (min_fraction * n_paths as f64).ceil(),
    ))
}

/// `mean N_T <= N_0 + 3 se` for the drift-compensated exponential.
pub fn supermartingale(
    problem: &LiquidationProblem,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<Check> {
    let grid = TimeGrid::new(problem.market.horizon, n_steps)?;
    let rows = parallel::map_indices(n_paths, |i| {
        let path = simulate_path(&problem.market, grid, seed, i);
        let traj = integrate_trajectory(problem, &path)?;
        let w = compute_wealth(&path, &traj, problem)?;
        let d = martingale_diagnostic(&path, &traj, &w, problem)?;
        Ok((d.log_n[n_steps].exp(), d.n0))
    })?;
    let n = n_paths as f64;
    let mean = rows.iter().map(|r| r.0).sum::<f64>() / n;
    let var = rows
        .iter()
        .map(|r| (r.0 - mean) * (r.0 - mean))
        .sum::<f64>()
        / (n - 1.0);
    let n0 = rows[0].1;
    Ok(Check::at_most(
        "mean N_T",
        mean,
        n0 + 3.0 * (var / n).sqrt(),
    ))
}

// ---------------------------------------------------------------- mc

/// Benchmark-strategy certainty equivalent against the closed form.
pub fn mc_vs_closed_form(
    problem: &LiquidationProblem,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<Check> {
    let grid = TimeGrid::new(problem.market.horizon, n_steps)?;
    let ce = parallel::estimate_ce(problem, StrategyKind::BenchmarkSinh, grid, n_paths, seed)?;
    let m = &problem.market;
    let closed = schied_schoneborn_ce(
        problem.phi0,
        problem.alpha(),
        problem.impact.lambda,
        m.sigma,
        m.horizon,
    );
    Ok(Check::at_most(
        "|CE(benchmark) - closed form|",
        (ce.value - closed).abs(),
        (3.0 * ce.stderr_proxy).max(5e-3),
    ))
}

/// Parallel estimates in pools of 1 and 4 threads and the sequential core
/// routine agree bitwise; measured is the number of mismatches.
pub fn determinism(
    problem: &LiquidationProblem,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<Check> {
    let grid = TimeGrid::new(problem.market.horizon, n_steps)?;
    let reference =
        liqlimit_core::mc::estimate_ce(problem, StrategyKind::Asymptotic, grid, n_paths, seed)?;
    let mut mismatches = 0;
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        let ce = pool.install(|| {
            parallel::estimate_ce(problem, StrategyKind::Asymptotic, grid, n_paths, seed)
        })?;
        if ce.value.to_bits() != reference.value.to_bits()
            || ce.stderr_proxy.to_bits() != reference.stderr_proxy.to_bits()
        {
            mismatches += 1;
        }
    }
    Ok(Check::at_most(
        "estimate mismatches across thread counts",
        mismatches as f64,
        0.0,
    ))
}

/// Adding a constant `b` to every payoff moves the estimate by exactly `b`.
pub fn payoff_shift(
    problem: &LiquidationProblem,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<Check> {
    let grid = TimeGrid::new(problem.market.horizon, n_steps)?;
    let eval = PathEvaluator::new(*problem, StrategyKind::Asymptotic, grid)?;
    let exps = parallel::exponents(&eval, n_paths, seed)?;
    let b = 0.37;
    let alpha = problem.alpha();
    let base = CeEstimate::from_exponents(&exps, alpha)?;
    let shifted: Vec<f64> = exps.iter().map(|e| e + alpha * b).collect();
    let moved = CeEstimate::from_exponents(&shifted, alpha)?;
    let err = (moved.value - base.value - b).abs() / base.value.abs().max(1.0);
    Ok(Check::at_most(
        "payoff shift by b moves CE by b (rel)",
        err,
        1e-10,
    ))
}

/// With no option and no drift, the asymptotic strategy cannot beat the
/// optimal deterministic liquidation value beyond noise and `O(dt)`.
pub fn asymptotic_not_below_optimum(
    problem: &LiquidationProblem,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<Check> {
    let grid = TimeGrid::new(problem.market.horizon, n_steps)?;
    let ce = parallel::estimate_ce(problem, StrategyKind::Asymptotic, grid, n_paths, seed)?;
    let m = &problem.market;
    let closed = schied_schoneborn_ce(
        problem.phi0,
        problem.alpha(),
        problem.impact.lambda,
        m.sigma,
        m.horizon,
    );
    Ok(Check::at_least(
        "CE(asymptotic) - closed form + 3 se + 5e-3",
        ce.value - closed + 3.0 * ce.stderr_proxy + 5e-3,
        0.0,
    ))
}

/// `limit_value` from the report against an independent quadrature of
/// `u(0, s0 - sigma sqrt(a) phi0) + sigma sqrt(a) phi0^2 / 2`.
pub fn limit_value_recomputed(problem: &LiquidationProblem, reported: f64) -> Check {
    let k = problem.market.sigma * problem.impact.a.sqrt();
    let x = problem.market.s0 - k * problem.phi0;
    let claim = problem.claim();
    let s = claim.sigma * claim.horizon.sqrt();
    let u = normal_expectation_piecewise(
        |z| claim.payoff_g(x + s * z),
        &[claim_kink_z(&claim, 0.0, x)],
    );
    let independent = u + 0.5 * k * problem.phi0 * problem.phi0;
    Check::at_most(
        "limit_value vs independent recomputation",
        (reported - independent).abs(),
        1e-10,
    )
}

/// The scaling-limit sweep: closeness at the smallest `lambda`, then a
/// non-increasing gap sequence within two standard errors.
pub fn scaling_limit(
    problem: &LiquidationProblem,
    lambdas: &[f64],
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<Vec<Check>> {
    let grid = TimeGrid::new(problem.market.horizon, n_steps)?;
    let limit = problem.limit_value();
    let mut rows = Vec::new();
    for &l in lambdas {
        let ce = parallel::estimate_ce(
            &problem.with_lambda(l)?,
            StrategyKind::Asymptotic,
            grid,
            n_paths,
            seed,
        )?;
        rows.push(((ce.value - limit).abs(), ce.stderr_proxy));
    }
    let (last_gap, last_se) = *rows.last().expect("non-empty sweep");
    let worst_increase = max_of(
        rows.windows(2)
            .map(|w| w[1].0 - w[0].0 - 2.0 * w[1].1.max(w[0].1)),
    );
    Ok(vec![
        Check::at_most(
            format!("|CE(lambda = {}) - limit|", lambdas[lambdas.len() - 1]),
            last_gap,
            0.1 * limit.abs() + 3.0 * last_se,
        ),
        Check::at_most("max gap increase beyond 2 se", worst_increase, 0.0),
    ])
}

// ---------------------------------------------------------------- varcalc

/// The acceptance lattice; `max_points` keeps an evenly spread subset.
pub fn varcalc_lattice(max_points: usize) -> Result<Vec<VariationalProblem>> {
    let mut all = Vec::new();
    for l in [0.5, 0.1, 0.02] {
        for x in [-1.0, 0.0, 1.3] {
            for phi in [0.0, 0.7] {
                for t in [0.25, 1.0] {
                    all.push(VariationalProblem::new(l, 1.0, 1.0, t, x, phi)?);
                }
            }
        }
    }
    if max_points >= all.len() {
        return Ok(all);
    }
    let stride = all.len() as f64 / max_points as f64;
    Ok((0..max_points)
        .map(|i| all[(i as f64 * stride) as usize])
        .collect())
}

pub fn closed_vs_oracle(lattice: &[VariationalProblem], n_grid: usize, tol: f64) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for p in lattice {
        let closed = xi_minimizer(p)?.value;
        let oracle = brute_force_value(p, n_grid)?;
        worst = worst.max((closed - oracle).abs() / oracle.abs().max(1.0));
    }
    Ok(Check::at_most(
        "variational closed form vs grid oracle (rel)",
        worst,
        tol,
    ))
}

const PANELS: usize = 400;

/// Boundary values and mean of the minimizer, relative to `max(|x|, |y|, 1)`.
pub fn minimizer_constraints(lattice: &[VariationalProblem]) -> Result<Check> {
    let rule = gauss_legendre(20);
    let mut worst: f64 = 0.0;
    for p in lattice {
        let s = xi_minimizer(p)?;
        let scale = p.x.abs().max(s.y.abs()).max(1.0);
        let mean = integrate(&rule, 0.0, p.t_end, PANELS, |t| s.minimizer(t));
        worst = worst
            .max(s.minimizer(0.0).abs() / scale)
            .max((s.minimizer(p.t_end) - p.x).abs() / scale)
            .max((mean - s.y).abs() / scale);
    }
    Ok(Check::at_most(
        "minimizer boundary and mean constraints (rel)",
        worst,
        1e-9,
    ))
}

/// `rho int delta^2 + int delta'^2` by quadrature against its closed form.
pub fn stage_one_identity(lattice: &[VariationalProblem]) -> Result<Check> {
    let rule = gauss_legendre(20);
    let mut worst: f64 = 0.0;
    for p in lattice {
        let s = xi_minimizer(p)?;
        let rho = p.sqrt_rho() * p.sqrt_rho();
        let quad = integrate(&rule, 0.0, p.t_end, PANELS, |t| {
            let (d, dd) = (s.minimizer(t), s.derivative(t));
            rho * d * d + dd * dd
        });
        let closed = stage_one_energy(p, s.y)?;
        worst = worst.max((quad - closed).abs() / closed.abs().max(1e-12));
    }
    Ok(Check::at_most(
        "stage-one energy identity (rel)",
        worst,
        1e-6,
    ))
}

fn full_objective(p: &VariationalProblem, rule: &Rule, delta: impl Fn(f64) -> (f64, f64)) -> f64 {
    let (mut rate_sq, mut sq, mut mean) = (0.0, 0.0, 0.0);
    let width = p.t_end / PANELS as f64;
    for k in 0..PANELS {
        let mid = (k as f64 + 0.5) * width;
        for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
            let (d, dd) = delta(mid + 0.5 * width * z);
            let w = 0.5 * width * w;
            rate_sq += w * dd * dd;
            sq += w * d * d;
            mean += w * d;
        }
    }
    p.objective(rate_sq, sq, mean)
}

/// Perturbing the minimizer by each of 50 smooth bumps vanishing at both
/// ends raises the objective; measured is the smallest relative increase.
pub fn uniqueness_probe(lattice: &[VariationalProblem]) -> Result<Check> {
    let rule = gauss_legendre(20);
    let mut worst = f64::INFINITY;
    for p in lattice {
        let s = xi_minimizer(p)?;
        let base = full_objective(p, &rule, |t| (s.minimizer(t), s.derivative(t)));
        for j in 1..=50 {
            let freq = ((j + 1) / 2) as f64 * PI / p.t_end;
            let amp = if j % 2 == 0 { -0.05 } else { 0.05 } / (1.0 + (j as f64).sqrt());
            // odd j: sine bump; even j: a sine times a tilt, still zero at both ends.
            let tilt = if j % 2 == 0 { 1.0 } else { 0.0 };
            let bumped = full_objective(p, &rule, |t| {
                let (sn, cs) = (freq * t).sin_cos();
                let lin = 1.0 + tilt * t / p.t_end;
                (
                    s.minimizer(t) + amp * sn * lin,
                    s.derivative(t) + amp * (freq * cs * lin + sn * tilt / p.t_end),
                )
            });
            worst = worst.min((bumped - base) / base.abs().max(1.0));
        }
    }
    Ok(Check::at_least(
        "smallest objective increase under bumps",
        worst,
        f64::MIN_POSITIVE,
    ))
}

/// The outer objective in `y` built from the closed-form stage one; its
/// three-point parabola vertex against the closed-form optimal `y`.
pub fn vertex_matches(lattice: &[VariationalProblem]) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for p in lattice {
        let s = xi_minimizer(p)?;
        let scale = p.lambda / (2.0 * p.sigma * p.sigma * p.a);
        let outer = |y: f64| -> Result<f64> {
            let pen = p.phi * p.lambda - y;
            Ok(scale * stage_one_energy(p, y)? - pen * pen / (2.0 * p.lambda * p.t_end))
        };
        let step = 1.0 + p.x.abs() * p.t_end + p.phi.abs();
        let (lo, mid, hi) = (outer(s.y - step)?, outer(s.y)?, outer(s.y + step)?);
        let curvature = hi + lo - 2.0 * mid;
        if curvature.is_nan() || curvature <= 0.0 {
            return Ok(Check::at_least(
                "outer objective curvature",
                curvature,
                f64::MIN_POSITIVE,
            ));
        }
        let vertex = s.y - step * (hi - lo) / (2.0 * curvature);
        worst = worst.max((vertex - s.y).abs() / s.y.abs().max(1.0));
    }
    Ok(Check::at_most(
        "outer vertex vs closed-form y (rel)",
        worst,
        1e-8,
    ))
}

/// Grid oracle error ratio under `n_grid` doubling; `O(1/n^2)` means about 1/4.
pub fn oracle_self_convergence(lattice: &[VariationalProblem], n_grid: usize) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for p in lattice {
        let closed = xi_minimizer(p)?.value;
        let e1 = (brute_force_value(p, n_grid)? - closed).abs();
        let e2 = (brute_force_value(p, 2 * n_grid)? - closed).abs();
        if e1 > 1e-11 {
            worst = worst.max(e2 / e1);
        }
    }
    Ok(Check::at_most(
        "oracle error ratio under grid doubling",
        worst,
        0.3,
    ))
}

/// `gap <= C lambda` with one constant `C = max 2 gap(0.2) / 0.2` over the
/// lattice's `(x, phi, t_end)` points. The bound is a small-`lambda`
/// statement, so only points with `lambda <= 0.2` are tested.
pub fn limit_gap_bound(lattice: &[VariationalProblem]) -> Result<Check> {
    let mut c_hat: f64 = 0.0;
    for p in lattice {
        let calib = VariationalProblem { lambda: 0.2, ..*p };
        c_hat = c_hat.max(2.0 * limit_gap(&calib)? / 0.2);
    }
    let mut worst = f64::NEG_INFINITY;
    for p in lattice.iter().filter(|p| p.lambda <= 0.2) {
        worst = worst.max(limit_gap(p)? - c_hat * p.lambda);
    }
    Ok(Check::at_most(
        "max (gap - C lambda) for lambda <= 0.2",
        worst,
        0.0,
    ))
}

/// Successive ratios `gap(lambda / 2) / gap(lambda)` for a halving sequence.
pub fn limit_gap_ratios(
    base: &VariationalProblem,
    lambdas: &[f64],
) -> Result<Vec<(f64, f64, f64)>> {
    let mut out = Vec::new();
    for w in lambdas.windows(2) {
        let g0 = limit_gap(&VariationalProblem {
            lambda: w[0],
            ..*base
        })?;
        let g1 = limit_gap(&VariationalProblem {
            lambda: w[1],
            ..*base
        })?;
        out.push((w[0], w[1], g1 / g0));
    }
    Ok(out)
}

/// Every ratio in `[lo, hi]`: reported as the largest distance outside.
pub fn limit_gap_rate(
    base: &VariationalProblem,
    lambdas: &[f64],
    lo: f64,
    hi: f64,
) -> Result<Vec<Check>> {
    Ok(limit_gap_ratios(base, lambdas)?
        .into_iter()
        .flat_map(|(l0, l1, r)| {
            [
                Check::at_least(format!("gap({l1}) / gap({l0})"), r, lo),
                Check::at_most(format!("gap({l1}) / gap({l0})"), r, hi),
            ]
        })
        .collect())
}
