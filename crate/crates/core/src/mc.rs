//! Monte Carlo certainty equivalents and indifference prices.
//!
//! For exponents `e_i = alpha (X_i - V_i)` the certainty equivalent is
//! `(1 / alpha) log mean exp(e_i)`. With `alpha = a / lambda` the exponents
//! are large for small `lambda`, so only `exp(e_i - max e)` is formed.
//! Per-path work is keyed by `(seed, path index)` and the reduction runs in
//! index order, so a parallel driver that fills the exponent array by index
//! reproduces these results exactly.

use alloc::vec::Vec;

use libm::{exp, log, sqrt};

use crate::hyperbolic::coth;
use crate::model::{simulate_path, LiquidationProblem, TimeGrid};
use crate::strategy::{
    benchmark_sinh_profile, integrate_trajectory, no_trading, DeterministicProfile,
};
use crate::wealth::compute_wealth;
use crate::{Error, Result};

/// Gap between the largest exponent and the log-mean-exp above which the
/// estimate is dominated by a handful of paths.
pub const HEAVY_TAIL_GAP: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrategyKind {
    /// The ODE-driven strategy, asymptotically optimal as `lambda -> 0`.
    #[default]
    Asymptotic,
    /// Deterministic `sinh` liquidation at speed `sqrt(rho)`.
    BenchmarkSinh,
    /// Hold nothing (`Phi = 0`); admissible only for `phi0 = 0`.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeEstimate {
    pub value: f64,
    /// Delta-method standard error of the log-mean-exp, in currency.
    pub stderr_proxy: f64,
    pub n_paths: usize,
    pub max_exponent: f64,
    pub log_mean_exp: f64,
}

impl CeEstimate {
    pub fn from_exponents(exponents: &[f64], alpha: f64) -> Result<Self> {
        let n = exponents.len();
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n_paths",
                value: n as f64,
                constraint: "n_paths >= 2",
            });
        }
        let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::Degenerate("non-finite exponent"));
        }
        let nf = n as f64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for &e in exponents {
            let x = exp(e - max);
            sum += x;
            sum_sq += x * x;
        }
        let mean = sum / nf;
        let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
        let lme = max + log(mean);
        Ok(Self {
            value: lme / alpha,
            stderr_proxy: sqrt(var / nf) / (alpha * mean),
            n_paths: n,
            max_exponent: max,
            log_mean_exp: lme,
        })
    }

    pub fn heavy_tailed(&self) -> bool {
        self.max_exponent - self.log_mean_exp > HEAVY_TAIL_GAP
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceEstimate {
    pub pi: f64,
    pub ce_with_option: CeEstimate,
    pub ce_without: CeEstimate,
}

impl PriceEstimate {
    pub fn new(ce_with_option: CeEstimate, ce_without: CeEstimate) -> Self {
        Self {
            pi: ce_with_option.value - ce_without.value,
            ce_with_option,
            ce_without,
        }
    }
}

/// Computes the utility exponent of one simulated path.
#[derive(Debug, Clone)]
pub struct PathEvaluator {
    problem: LiquidationProblem,
    kind: StrategyKind,
    grid: TimeGrid,
    profile: Option<DeterministicProfile>,
}

impl PathEvaluator {
    pub fn new(problem: LiquidationProblem, kind: StrategyKind, grid: TimeGrid) -> Result<Self> {
        if (grid.horizon() - problem.market.horizon).abs() > 1e-12 * problem.market.horizon {
            return Err(Error::InvalidParameter {
                name: "grid horizon",
                value: grid.horizon(),
                constraint: "equals the market horizon",
            });
        }
        let profile = match kind {
            StrategyKind::Asymptotic => None,
            StrategyKind::BenchmarkSinh => Some(benchmark_sinh_profile(
                problem.phi0,
                problem.sqrt_rho(),
                grid,
            )),
            StrategyKind::None => Some(no_trading(grid)),
        };
        Ok(Self {
            problem,
            kind,
            grid,
            profile,
        })
    }

    pub fn problem(&self) -> &LiquidationProblem {
        &self.problem
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn exponent(&self, seed: u64, index: u64) -> Result<f64> {
        let path = simulate_path(&self.problem.market, self.grid, seed, index);
        let wealth = match &self.profile {
            Some(p) => compute_wealth(&path, p, &self.problem)?,
            None => {
                let traj = integrate_trajectory(&self.problem, &path)?;
                compute_wealth(&path, &traj, &self.problem)?
            }
        };
        Ok(wealth.exponent)
    }

    pub fn estimate(&self, exponents: &[f64]) -> Result<CeEstimate> {
        CeEstimate::from_exponents(exponents, self.problem.alpha())
    }
}

/// Sequential certainty-equivalent estimate over paths `0..n_paths`.
pub fn estimate_ce(
    problem: &LiquidationProblem,
    kind: StrategyKind,
    grid: TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<CeEstimate> {
    let eval = PathEvaluator::new(*problem, kind, grid)?;
    let exps = (0..n_paths as u64)
        .map(|i| eval.exponent(seed, i))
        .collect::<Result<Vec<_>>>()?;
    eval.estimate(&exps)
}

/// Both legs share `seed`, hence the same Brownian paths.
pub fn estimate_indifference_price(
    problem: &LiquidationProblem,
    kind: StrategyKind,
    grid: TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<PriceEstimate> {
    let with = estimate_ce(problem, kind, grid, n_paths, seed)?;
    let without = estimate_ce(&problem.without_option(), kind, grid, n_paths, seed)?;
    Ok(PriceEstimate::new(with, without))
}

/// Certainty equivalent of pure liquidation at zero drift,
/// `(phi0^2 / 2) sigma sqrt(alpha lambda) coth(sigma sqrt(alpha / lambda) T)`.
///
/// Wealth is measured from the mark-to-market book value, so the
/// `-phi0 S0` revenue term of the cost convention is absent.
pub fn schied_schoneborn_ce(phi0: f64, alpha: f64, lambda: f64, sigma: f64, horizon: f64) -> f64 {
    if phi0 == 0.0 {
        return 0.0;
    }
    0.5 * phi0 * phi0 * sigma * sqrt(alpha * lambda) * coth(sigma * sqrt(alpha / lambda) * horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ImpactParams, MarketParams, OptionSpec};

    #[test]
    fn log_mean_exp_examples() {
        let e = [3.0; 10];
        let ce = CeEstimate::from_exponents(&e, 2.0).unwrap();
        assert_eq!(ce.value, 1.5);
        assert_eq!(ce.stderr_proxy, 0.0);
        assert!(CeEstimate::from_exponents(&[1.0], 1.0).is_err());

        // Huge exponents do not overflow.
        let e = [1e4, 1e4 + 1.0, 1e4 - 2.0];
        let ce = CeEstimate::from_exponents(&e, 1.0).unwrap();
        let direct = 1e4 + log((1.0 + exp(1.0) + exp(-2.0)) / 3.0);
        assert!((ce.value - direct).abs() < 1e-12);
    }

    #[test]
    fn shift_invariance() {
        let e: Vec<f64> = (0..50).map(|i| libm::sin(i as f64) * 3.0).collect();
        let alpha = 4.0;
        let b = 0.37;
        let base = CeEstimate::from_exponents(&e, alpha).unwrap();
        let shifted: Vec<f64> = e.iter().map(|x| x + alpha * b).collect();
        let moved = CeEstimate::from_exponents(&shifted, alpha).unwrap();
        assert!((moved.value - base.value - b).abs() < 1e-14);
        assert!((moved.stderr_proxy - base.stderr_proxy).abs() < 1e-14);
    }

    #[test]
    fn deterministic_market_gives_exact_exponent() {
        let market = MarketParams {
            s0: 0.0,
            mu: 0.0,
            sigma: 0.0,
            horizon: 1.0,
        };
        let problem = LiquidationProblem {
            market,
            impact: ImpactParams::new(0.5, 1.0).unwrap(),
            option: OptionSpec::none(),
            phi0: 1.0,
        };
        let grid = TimeGrid::new(1.0, 100).unwrap();
        let ce = estimate_ce(&problem, StrategyKind::BenchmarkSinh, grid, 4, 1).unwrap();
        // Linear liquidation: e = alpha (lambda / 2) phi0^2 / T.
        let e = problem.alpha() * 0.5 * 0.5;
        assert!((ce.value - e / problem.alpha()).abs() < 1e-15);
    }

    #[test]
    fn zero_position_has_zero_price() {
        let problem = LiquidationProblem {
            market: MarketParams::new(0.0, 0.0, 0.2, 1.0).unwrap(),
            impact: ImpactParams::new(0.2, 1.0).unwrap(),
            option: OptionSpec::none(),
            phi0: 0.5,
        };
        let grid = TimeGrid::new(1.0, 100).unwrap();
        let p =
            estimate_indifference_price(&problem, StrategyKind::Asymptotic, grid, 50, 3).unwrap();
        assert_eq!(p.pi, 0.0);
    }

    #[test]
    fn schied_schoneborn_limits() {
        assert_eq!(schied_schoneborn_ce(0.0, 2.0, 0.5, 1.0, 1.0), 0.0);
        let (a, sigma, phi0) = (1.0, 0.3, 2.0);
        let lambda = 1e-6;
        let v = schied_schoneborn_ce(phi0, a / lambda, lambda, sigma, 1.0);
        assert!((v - sigma * a.sqrt() * phi0 * phi0 / 2.0).abs() < 1e-12);
    }
}
