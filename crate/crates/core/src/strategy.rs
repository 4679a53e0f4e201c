//! The asymptotically optimal liquidation strategy.
//!
//! Along a price path the auxiliary state `F` solves the linear random ODE
//!
//! ```text
//! F'(t) = q ( c(t) Y(t) - tanh(q (T - t)) F(t) ),   F(0) = phi0 coth(q T)
//! c(t)  = cosh(q (T - t)) / (2 cosh^2(q (T - t) / 2))
//! Y(t)  = du/dx (t, S_t - sigma sqrt(a) F(t))
//! ```
//!
//! with `q = sqrt(rho)`, and the inventory is `Phi = tanh(q (T - t)) F`.
//! Dividing by `cosh(q (T - t))` removes the stiff homogeneous term:
//!
//! ```text
//! d/dt [ F / cosh(q (T - t)) ] = q Y / (2 cosh^2(q (T - t) / 2))
//! ```
//!
//! The exponential scheme freezes `Y` at the left node and integrates this
//! relation exactly over each step, so it is exact when `Y` vanishes and
//! stable for any `q dt`.

use alloc::vec::Vec;

use libm::{exp, expm1, fabs};

use crate::hyperbolic::{cosh_over_sinh, coth, csch, sech2, sinh_ratio, tanh};
use crate::model::{LiquidationProblem, Path, TimeGrid};
use crate::{Error, Result};

/// Inventory and trading rate on a grid; what the wealth computation needs.
pub trait Inventory {
    fn grid(&self) -> &TimeGrid;
    fn phi(&self) -> &[f64];
    fn rate(&self) -> &[f64];
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyTrajectory {
    pub grid: TimeGrid,
    pub sqrt_rho: f64,
    pub f_vals: Vec<f64>,
    pub phi_vals: Vec<f64>,
    pub phi_rate: Vec<f64>,
    pub upsilon: Vec<f64>,
}

impl Inventory for StrategyTrajectory {
    fn grid(&self) -> &TimeGrid {
        &self.grid
    }
    fn phi(&self) -> &[f64] {
        &self.phi_vals
    }
    fn rate(&self) -> &[f64] {
        &self.phi_rate
    }
}

/// A deterministic inventory profile (benchmark or no trading).
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicProfile {
    pub grid: TimeGrid,
    pub phi_vals: Vec<f64>,
    pub phi_rate: Vec<f64>,
}

impl Inventory for DeterministicProfile {
    fn grid(&self) -> &TimeGrid {
        &self.grid
    }
    fn phi(&self) -> &[f64] {
        &self.phi_vals
    }
    fn rate(&self) -> &[f64] {
        &self.phi_rate
    }
}

/// ODE discretization. Only `Exponential` is meant for use; `ExplicitEuler`
/// exists as a negative control for the validation suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegratorScheme {
    #[default]
    Exponential,
    ExplicitEuler,
}

/// `F_0 = phi0 coth(sqrt(rho) T)`.
pub fn initial_f(phi0: f64, rho: f64, horizon: f64) -> f64 {
    if phi0 == 0.0 {
        return 0.0;
    }
    phi0 * coth(libm::sqrt(rho) * horizon)
}

/// `c(t) = 1 - sech^2(x / 2) / 2` with `x = sqrt(rho) (T - t)`; lies in (1/2, 1].
pub fn tracking_weight(x: f64) -> f64 {
    1.0 - 0.5 * sech2(0.5 * x)
}

/// `cosh(b) (tanh(a / 2) - tanh(b / 2))` for `a >= b >= 0`: the exact
/// forcing weight of one exponential step, bounded by 2.
fn forcing_weight(a: f64, b: f64) -> f64 {
    let h = a - b;
    -expm1(-h) * (1.0 + exp(-2.0 * b)) / ((1.0 + exp(-a)) * (1.0 + exp(-b)))
}

/// `cosh(b) / cosh(a)` for `a >= b >= 0`.
fn decay_factor(a: f64, b: f64) -> f64 {
    exp(b - a) * (1.0 + exp(-2.0 * b)) / (1.0 + exp(-2.0 * a))
}

pub fn integrate_trajectory(
    problem: &LiquidationProblem,
    path: &Path,
) -> Result<StrategyTrajectory> {
    integrate_trajectory_with(problem, path, IntegratorScheme::Exponential)
}

pub fn integrate_trajectory_with(
    problem: &LiquidationProblem,
    path: &Path,
    scheme: IntegratorScheme,
) -> Result<StrategyTrajectory> {
    let grid = path.grid;
    if fabs(grid.horizon() - problem.market.horizon) > 1e-12 * problem.market.horizon {
        return Err(Error::InvalidParameter {
            name: "path horizon",
            value: grid.horizon(),
            constraint: "equals the problem horizon",
        });
    }
    let n = grid.n_steps();
    let q = problem.sqrt_rho();
    let dt = grid.dt();
    let claim = problem.claim();
    let shift = problem.shift_scale();

    let mut f_vals = Vec::with_capacity(n + 1);
    let mut upsilon = Vec::with_capacity(n + 1);
    let mut f = initial_f(problem.phi0, q * q, grid.horizon());
    f_vals.push(f);
    for k in 0..n {
        let y = claim.delta(grid.time(k), path.s[k] - shift * f)?;
        upsilon.push(y);
        let a = q * grid.remaining(k);
        let b = q * grid.remaining(k + 1);
        f = match scheme {
            IntegratorScheme::Exponential => decay_factor(a, b) * f + forcing_weight(a, b) * y,
            IntegratorScheme::ExplicitEuler => f + dt * q * (tracking_weight(a) * y - tanh(a) * f),
        };
        f_vals.push(f);
    }
    // Y is only defined on [0, T); its terminal value multiplies tanh(0) = 0.
    let last = upsilon.last().copied().unwrap_or(0.0);
    upsilon.push(last);

    let mut phi_vals: Vec<f64> = (0..=n)
        .map(|k| tanh(q * grid.remaining(k)) * f_vals[k])
        .collect();
    phi_vals[0] = problem.phi0;
    let phi_rate = phi_rate(&grid, q, &f_vals, &upsilon);
    Ok(StrategyTrajectory {
        grid,
        sqrt_rho: q,
        f_vals,
        phi_vals,
        phi_rate,
        upsilon,
    })
}

/// Trading rate `q (tanh(q (T - t) / 2) Y - F)`.
///
/// Equal to `q (tanh(q (T - t) / 2) Y - coth(q (T - t)) Phi)` because
/// `coth(q (T - t)) Phi = F`, but finite at maturity.
pub fn phi_rate(grid: &TimeGrid, sqrt_rho: f64, f_vals: &[f64], upsilon: &[f64]) -> Vec<f64> {
    f_vals
        .iter()
        .zip(upsilon)
        .enumerate()
        .map(|(k, (&f, &y))| sqrt_rho * (tanh(0.5 * sqrt_rho * grid.remaining(k)) * y - f))
        .collect()
}

/// The rate in its original coth form; singular at maturity.
pub fn phi_rate_coth_form(traj: &StrategyTrajectory) -> Vec<f64> {
    let q = traj.sqrt_rho;
    (0..traj.grid.len())
        .map(|k| {
            let x = q * traj.grid.remaining(k);
            q * (tanh(0.5 * x) * traj.upsilon[k] - coth(x) * traj.phi_vals[k])
        })
        .collect()
}

/// Deterministic profile `phi0 sinh(kappa (T - t)) / sinh(kappa T)`; linear
/// liquidation at `kappa = 0`.
pub fn benchmark_sinh_profile(phi0: f64, kappa: f64, grid: TimeGrid) -> DeterministicProfile {
    let horizon = grid.horizon();
    let (phi_vals, phi_rate) = if kappa == 0.0 {
        (
            (0..grid.len())
                .map(|k| phi0 * grid.remaining(k) / horizon)
                .collect(),
            alloc::vec![-phi0 / horizon; grid.len()],
        )
    } else {
        let b = kappa * horizon;
        (
            (0..grid.len())
                .map(|k| phi0 * sinh_ratio(kappa * grid.remaining(k), b))
                .collect(),
            (0..grid.len())
                .map(|k| -phi0 * kappa * cosh_over_sinh(kappa * grid.remaining(k), b))
                .collect(),
        )
    };
    DeterministicProfile {
        grid,
        phi_vals,
        phi_rate,
    }
}

pub fn no_trading(grid: TimeGrid) -> DeterministicProfile {
    DeterministicProfile {
        grid,
        phi_vals: alloc::vec![0.0; grid.len()],
        phi_rate: alloc::vec![0.0; grid.len()],
    }
}

/// `|phi0| / sinh(q T) + |theta|`, the a-priori bound on `|F_T|`.
pub fn terminal_f_bound(problem: &LiquidationProblem) -> f64 {
    fabs(problem.phi0) * csch(problem.sqrt_rho() * problem.market.horizon)
        + fabs(problem.option.theta)
}

/// Integrals entering the tracking-error identity along one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingIntegrals {
    /// `int Phi dt` (trapezoid).
    pub phi: f64,
    /// `int Y dt` with `Y` frozen at left nodes, as in the scheme.
    pub upsilon: f64,
    /// `int Y sech^2(q (T - s) / 2) ds`, each step integrated exactly.
    pub weighted_upsilon: f64,
}

impl TrackingIntegrals {
    pub fn of(traj: &StrategyTrajectory) -> Self {
        let grid = traj.grid;
        let dt = grid.dt();
        let n = grid.n_steps();
        let q = traj.sqrt_rho;
        let mut phi = 0.0;
        let mut ups = 0.0;
        let mut weighted = 0.0;
        for k in 0..n {
            phi += 0.5 * dt * (traj.phi_vals[k] + traj.phi_vals[k + 1]);
            ups += dt * traj.upsilon[k];
            let w = if q == 0.0 {
                dt
            } else {
                2.0 / q
                    * (tanh(0.5 * q * grid.remaining(k)) - tanh(0.5 * q * grid.remaining(k + 1)))
            };
            weighted += w * traj.upsilon[k];
        }
        Self {
            phi,
            upsilon: ups,
            weighted_upsilon: weighted,
        }
    }

    /// `(int Phi - int Y) - (phi0 tanh(q T / 2) / q - int Y sech^2)`, zero up to O(dt).
    ///
    /// Integrating `d(F / cosh(q (T - t))) = (q / 2) sech^2(q (T - t) / 2) Y dt`
    /// against `sinh(q (T - t))` gives
    /// `int Phi = phi0 tanh(q T / 2) / q + int tanh^2(q (T - s) / 2) Y ds`.
    pub fn identity_residual(&self, problem: &LiquidationProblem) -> f64 {
        let q = problem.sqrt_rho();
        let rhs = problem.phi0 * tanh(0.5 * q * problem.market.horizon) / q - self.weighted_upsilon;
        (self.phi - self.upsilon) - rhs
    }

    pub fn gap(&self) -> f64 {
        fabs(self.upsilon - self.phi)
    }
}

/// `(|phi0| + 2 |theta|) lambda / (sigma sqrt(a))`, bounding `|int Y - int Phi|`.
pub fn tracking_gap_bound(problem: &LiquidationProblem) -> f64 {
    (fabs(problem.phi0) + 2.0 * fabs(problem.option.theta)) * problem.impact.lambda
        / problem.shift_scale()
}
