//! Terminal wealth under linear impact and the exponential martingale that
//! controls the utility of the asymptotic strategy.
//!
//! Wealth is the Ito sum of the inventory against price moves minus the
//! quadratic impact cost, both evaluated at left nodes:
//!
//! ```text
//! V_n = sum_k Phi_k (S_{k+1} - S_k) - (lambda / 2) sum_k Phidot_k^2 dt
//! ```

use alloc::vec::Vec;

use libm::{exp, fabs};

use crate::hyperbolic::csch;
use crate::model::{payoff_f, LiquidationProblem, Path};
use crate::strategy::{Inventory, StrategyTrajectory};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WealthBreakdown {
    pub trading_pnl: f64,
    pub impact_cost: f64,
    pub v_terminal: f64,
    pub payoff_x: f64,
    /// `alpha (X - V_T)`; exponentiated only inside a log-sum-exp.
    pub exponent: f64,
    pub running_v: Vec<f64>,
}

fn check_grid(path: &Path, inv: &impl Inventory) -> Result<()> {
    let (a, b) = (path.grid.n_steps(), inv.grid().n_steps());
    if a != b || path.w.len() != inv.phi().len() || inv.rate().len() != inv.phi().len() {
        return Err(Error::GridMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

pub fn compute_wealth(
    path: &Path,
    inventory: &impl Inventory,
    problem: &LiquidationProblem,
) -> Result<WealthBreakdown> {
    check_grid(path, inventory)?;
    let phi = inventory.phi();
    let rate = inventory.rate();
    let dt = path.grid.dt();
    let half_lambda = 0.5 * problem.impact.lambda;

    let mut running_v = Vec::with_capacity(phi.len());
    let mut pnl = 0.0;
    let mut cost = 0.0;
    running_v.push(0.0);
    for k in 0..path.grid.n_steps() {
        pnl += phi[k] * (path.s[k + 1] - path.s[k]);
        cost += half_lambda * rate[k] * rate[k] * dt;
        running_v.push(pnl - cost);
    }
    let v_terminal = pnl - cost;
    let payoff_x = payoff_f(&problem.option, path.s[path.s.len() - 1]);
    Ok(WealthBreakdown {
        trading_pnl: pnl,
        impact_cost: cost,
        v_terminal,
        payoff_x,
        exponent: problem.alpha() * (payoff_x - v_terminal),
        running_v,
    })
}

/// Discrete version of
///
/// ```text
/// log M_t = (a / lambda) ( u(t, S_t - sigma sqrt(a) F_t) + sigma sqrt(a) F_t Phi_t / 2 - V_t )
/// ```
///
/// whose Ito differential is `c dS - c^2 sigma^2 dt / 2` with
/// `c = (a / lambda)(Y - Phi)`, together with the drift-compensated
/// `log N_t = log M_t - mu (a / lambda) int (Y - Phi) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleDiagnostic {
    pub log_m: Vec<f64>,
    pub log_n: Vec<f64>,
    pub c_series: Vec<f64>,
    /// `(log M_{k+1} - log M_k) - c_k dS_k + c_k^2 sigma^2 dt / 2`.
    pub residuals: Vec<f64>,
    /// `residuals` minus the quadratic-variation term
    /// `(a / lambda) u_xx (dS_k^2 - sigma^2 dt) / 2`. That term is a
    /// mean-zero `O(dt)` increment per step, so only this remainder
    /// vanishes in L1 under refinement.
    pub ito_remainder: Vec<f64>,
    /// `N_0 = M_0`.
    pub n0: f64,
}

impl MartingaleDiagnostic {
    pub fn residual_l1(&self) -> f64 {
        self.residuals.iter().map(|r| fabs(*r)).sum()
    }

    pub fn residual_sum(&self) -> f64 {
        self.residuals.iter().sum()
    }

    pub fn ito_remainder_l1(&self) -> f64 {
        self.ito_remainder.iter().map(|r| fabs(*r)).sum()
    }
}

pub fn martingale_diagnostic(
    path: &Path,
    traj: &StrategyTrajectory,
    wealth: &WealthBreakdown,
    problem: &LiquidationProblem,
) -> Result<MartingaleDiagnostic> {
    check_grid(path, traj)?;
    let grid = path.grid;
    let n = grid.n_steps();
    let alpha = problem.alpha();
    let shift = problem.shift_scale();
    let claim = problem.claim();
    let sigma = problem.market.sigma;
    let dt = grid.dt();

    let mut log_m = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let f = traj.f_vals[k];
        let u = claim.value(grid.time(k), path.s[k] - shift * f)?;
        log_m.push(alpha * (u + 0.5 * shift * f * traj.phi_vals[k] - wealth.running_v[k]));
    }
    let c_series: Vec<f64> = (0..=n)
        .map(|k| alpha * (traj.upsilon[k] - traj.phi_vals[k]))
        .collect();
    let mut residuals = Vec::with_capacity(n);
    let mut ito_remainder = Vec::with_capacity(n);
    for k in 0..n {
        let c = c_series[k];
        let ds = path.s[k + 1] - path.s[k];
        let r = (log_m[k + 1] - log_m[k]) - c * ds + 0.5 * c * c * sigma * sigma * dt;
        let gamma = claim.gamma(grid.time(k), path.s[k] - shift * traj.f_vals[k])?;
        residuals.push(r);
        ito_remainder.push(r - 0.5 * alpha * gamma * (ds * ds - sigma * sigma * dt));
    }
    let mut log_n = Vec::with_capacity(n + 1);
    let mut drift = 0.0;
    log_n.push(log_m[0]);
    for k in 0..n {
        drift += problem.market.mu * c_series[k] * dt;
        log_n.push(log_m[k + 1] - drift);
    }
    Ok(MartingaleDiagnostic {
        n0: exp(log_m[0]),
        log_m,
        log_n,
        c_series,
        residuals,
        ito_remainder,
    })
}

/// `sigma sqrt(a) |phi0 theta| / sinh(sqrt(rho) T)`: the payoff slack
/// between `f(S_T)` and `g(S_T - sigma sqrt(a) F_T)`.
pub fn payoff_slack(problem: &LiquidationProblem) -> f64 {
    problem.shift_scale()
        * fabs(problem.phi0 * problem.option.theta)
        * csch(problem.sqrt_rho() * problem.market.horizon)
}
