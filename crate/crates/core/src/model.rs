//! Bachelier market, the vanilla payoff family and its modified payoff, the
//! closed-form price surface `u(t, x)`, uniform time grids and seeded
//! Brownian paths.

use alloc::vec::Vec;

use libm::{fabs, sqrt};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::ensure;
use crate::{normal, Error, Result};

/// Bachelier dynamics `S_t = s0 + mu t + sigma W_t` on `[0, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub s0: f64,
    pub mu: f64,
    pub sigma: f64,
    pub horizon: f64,
}

impl MarketParams {
    pub fn new(s0: f64, mu: f64, sigma: f64, horizon: f64) -> Result<Self> {
        ensure(s0.is_finite(), "s0", s0, "finite")?;
        ensure(mu.is_finite(), "mu", mu, "finite")?;
        ensure(
            sigma > 0.0 && sigma.is_finite(),
            "sigma",
            sigma,
            "sigma > 0",
        )?;
        ensure(
            horizon > 0.0 && horizon.is_finite(),
            "horizon",
            horizon,
            "horizon > 0",
        )?;
        Ok(Self {
            s0,
            mu,
            sigma,
            horizon,
        })
    }
}

/// Vanilla claim `max(0, theta (x - strike))`. `theta = 0` is "no option".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionSpec {
    pub theta: f64,
    pub strike: f64,
}

impl OptionSpec {
    pub fn new(theta: f64, strike: f64) -> Result<Self> {
        ensure(theta.is_finite(), "theta", theta, "finite")?;
        ensure(strike.is_finite(), "strike", strike, "finite")?;
        Ok(Self { theta, strike })
    }

    pub const fn none() -> Self {
        Self {
            theta: 0.0,
            strike: 0.0,
        }
    }
}

/// Linear impact coefficient `lambda` and the risk scale `a`; the investor's
/// risk aversion is `a / lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpactParams {
    pub lambda: f64,
    pub a: f64,
}

impl ImpactParams {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        ensure(
            lambda > 0.0 && lambda.is_finite(),
            "lambda",
            lambda,
            "lambda > 0",
        )?;
        ensure(a > 0.0 && a.is_finite(), "a", a, "a > 0")?;
        Ok(Self { lambda, a })
    }

    /// Risk aversion `a / lambda`.
    pub fn alpha(&self) -> f64 {
        self.a / self.lambda
    }

    /// Risk-liquidity ratio `sigma^2 a / lambda^2`.
    pub fn rho(&self, sigma: f64) -> f64 {
        sigma * sigma * self.a / (self.lambda * self.lambda)
    }

    /// `sigma sqrt(a) / lambda`, the mean-reversion speed of the strategy.
    pub fn sqrt_rho(&self, sigma: f64) -> f64 {
        sigma * sqrt(self.a) / self.lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiquidationProblem {
    pub market: MarketParams,
    pub impact: ImpactParams,
    pub option: OptionSpec,
    /// Initial inventory in shares.
    pub phi0: f64,
}

impl LiquidationProblem {
    pub fn alpha(&self) -> f64 {
        self.impact.alpha()
    }

    pub fn sqrt_rho(&self) -> f64 {
        self.impact.sqrt_rho(self.market.sigma)
    }

    /// `sigma sqrt(a)`: price shift per share of the impact-adjusted state.
    pub fn shift_scale(&self) -> f64 {
        self.market.sigma * sqrt(self.impact.a)
    }

    pub fn claim(&self) -> ModifiedClaim {
        ModifiedClaim::new(self.option, &self.market, self.impact.a)
    }

    /// Same problem with the option removed.
    pub fn without_option(&self) -> Self {
        Self {
            option: OptionSpec::none(),
            ..*self
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Ok(Self {
            impact: ImpactParams::new(lambda, self.impact.a)?,
            ..*self
        })
    }

    /// Scaling limit of the certainty equivalent:
    /// `u(0, s0 - sigma sqrt(a) phi0) + sigma sqrt(a) phi0^2 / 2`.
    pub fn limit_value(&self) -> f64 {
        let k = self.shift_scale();
        let u = self
            .claim()
            .value(0.0, self.market.s0 - k * self.phi0)
            .expect("t = 0 is always in range");
        u + 0.5 * k * self.phi0 * self.phi0
    }
}

pub fn payoff_f(option: &OptionSpec, x: f64) -> f64 {
    (option.theta * (x - option.strike)).max(0.0)
}

/// `max(0, theta (x - strike) + sigma sqrt(a) theta^2)`.
pub fn modified_payoff_g(option: &OptionSpec, sigma: f64, a: f64, x: f64) -> f64 {
    let th = option.theta;
    (th * (x - option.strike) + sigma * sqrt(a) * th * th).max(0.0)
}

/// Modified payoff of the regime without terminal liquidation; half the
/// shift of [`modified_payoff_g`]. Comparison only.
pub fn modified_payoff_no_liq(option: &OptionSpec, sigma: f64, a: f64, x: f64) -> f64 {
    let th = option.theta;
    (th * (x - option.strike) + 0.5 * sigma * sqrt(a) * th * th).max(0.0)
}

/// The modified claim `g(S_T)` priced in the frictionless Bachelier market.
///
/// With `m = theta (x - K) + sigma sqrt(a) theta^2` and
/// `s = |theta| sigma sqrt(T - t)`, `g(x + sigma W_{T-t})` is the positive
/// part of a `N(m, s^2)` variable, so
/// `u(t, x) = m N(m / s) + s n(m / s)` and `du/dx = theta N(m / s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedClaim {
    pub theta: f64,
    pub strike: f64,
    pub sigma: f64,
    pub shift: f64,
    pub horizon: f64,
}

impl ModifiedClaim {
    pub fn new(option: OptionSpec, market: &MarketParams, a: f64) -> Self {
        Self {
            theta: option.theta,
            strike: option.strike,
            sigma: market.sigma,
            shift: market.sigma * sqrt(a) * option.theta * option.theta,
            horizon: market.horizon,
        }
    }

    fn moneyness(&self, x: f64) -> f64 {
        self.theta * (x - self.strike) + self.shift
    }

    fn spread(&self, t: f64) -> f64 {
        fabs(self.theta) * self.sigma * sqrt((self.horizon - t).max(0.0))
    }

    pub fn payoff_g(&self, x: f64) -> f64 {
        self.moneyness(x).max(0.0)
    }

    /// Price surface `u(t, x) = E[g(x + sigma W_{T-t})]` for `t` in `[0, T]`.
    pub fn value(&self, t: f64, x: f64) -> Result<f64> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                lower: 0.0,
                upper: self.horizon,
            });
        }
        let m = self.moneyness(x);
        let s = self.spread(t);
        if s == 0.0 {
            return Ok(m.max(0.0));
        }
        let d = m / s;
        Ok(s * (d * normal::cdf(d) + normal::pdf(d)))
    }

    /// `du/dx (t, x)` for `t` in `[0, T)`.
    pub fn delta(&self, t: f64, x: f64) -> Result<f64> {
        if !(0.0..self.horizon).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                lower: 0.0,
                upper: self.horizon,
            });
        }
        let s = self.spread(t);
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(self.theta * normal::cdf(self.moneyness(x) / s))
    }

    /// `d^2u/dx^2 (t, x) = theta^2 n(m / s) / s` for `t` in `[0, T)`.
    pub fn gamma(&self, t: f64, x: f64) -> Result<f64> {
        if !(0.0..self.horizon).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                lower: 0.0,
                upper: self.horizon,
            });
        }
        let s = self.spread(t);
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(self.theta * self.theta * normal::pdf(self.moneyness(x) / s) / s)
    }
}

/// Uniform grid `0 = t_0 < ... < t_n = horizon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    n_steps: usize,
    horizon: f64,
    dt: f64,
}

impl TimeGrid {
    pub fn new(horizon: f64, n_steps: usize) -> Result<Self> {
        ensure(
            horizon > 0.0 && horizon.is_finite(),
            "horizon",
            horizon,
            "horizon > 0",
        )?;
        ensure(n_steps >= 2, "n_steps", n_steps as f64, "n_steps >= 2")?;
        Ok(Self {
            n_steps,
            horizon,
            dt: horizon / n_steps as f64,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// `t_k`; the last node is exactly the horizon.
    pub fn time(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.horizon
        } else {
            k as f64 * self.dt
        }
    }

    /// Time to maturity `T - t_k`, exactly zero at the last node.
    pub fn remaining(&self, k: usize) -> f64 {
        if k == self.n_steps {
            0.0
        } else {
            (self.n_steps - k) as f64 * self.dt
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|k| self.time(k)).collect()
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid with `factor` times fewer steps over the same horizon.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        ensure(
            factor >= 1 && self.n_steps % factor == 0,
            "factor",
            factor as f64,
            "divides n_steps",
        )?;
        Self::new(self.horizon, self.n_steps / factor)
    }
}

/// One sampled trajectory of the Brownian motion and the price.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub grid: TimeGrid,
    pub w: Vec<f64>,
    pub s: Vec<f64>,
}

impl Path {
    /// Build the price samples from Brownian samples (`w[0]` must be 0).
    pub fn from_brownian(market: &MarketParams, grid: TimeGrid, w: Vec<f64>) -> Result<Self> {
        if w.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.n_steps(),
                found: w.len().saturating_sub(1),
            });
        }
        ensure(w[0] == 0.0, "w[0]", w[0], "w[0] == 0")?;
        let s = w
            .iter()
            .enumerate()
            .map(|(k, &wk)| price_at(market, grid.time(k), wk))
            .collect();
        Ok(Self { grid, w, s })
    }

    /// Subsample every `factor`-th node.
    pub fn coarsen(&self, market: &MarketParams, factor: usize) -> Result<Self> {
        let grid = self.grid.coarsen(factor)?;
        let w = self.w.iter().step_by(factor).copied().collect();
        Self::from_brownian(market, grid, w)
    }
}

fn price_at(market: &MarketParams, t: f64, w: f64) -> f64 {
    market.s0 + market.mu * t + market.sigma * w
}

/// Path `index` of the stream keyed by `seed`.
///
/// Each path owns a ChaCha8 stream selected by its index, so the result
/// depends on `(seed, index)` only and not on which paths were drawn before.
pub fn simulate_path(market: &MarketParams, grid: TimeGrid, seed: u64, index: u64) -> Path {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let sd = sqrt(grid.dt());
    let mut w = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    w.push(acc);
    for _ in 0..grid.n_steps() {
        let z: f64 = StandardNormal.sample(&mut rng);
        acc += sd * z;
        w.push(acc);
    }
    Path::from_brownian(market, grid, w).expect("grid and samples agree by construction")
}

pub fn simulate_paths(
    market: &MarketParams,
    grid: TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Vec<Path> {
    (0..n_paths as u64)
        .map(|i| simulate_path(market, grid, seed, i))
        .collect()
}
