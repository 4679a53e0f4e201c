//! Numerical core for asymptotically optimal liquidation of a hedging
//! portfolio under linear temporary price impact in the Bachelier model.
//!
//! The crate is `no_std` (with `alloc`). Everything here is a pure function
//! of its inputs: path simulation is keyed by `(seed, path index)`, so any
//! parallel driver reproduces the sequential results bit for bit.
//!
//! Module map:
//!
//! * [`model`] market/payoff types, the modified payoff and its Bachelier
//!   price surface, uniform grids and seeded Brownian paths.
//! * [`strategy`] the random ODE driving the asymptotically optimal
//!   inventory, its rate, and the deterministic sinh benchmark.
//! * [`wealth`] terminal wealth with impact costs and the exponential
//!   (super)martingale diagnostics.
//! * [`mc`] certainty equivalents and indifference prices by Monte Carlo.
//! * [`varcalc`] the deterministic variational problem, closed form and
//!   brute-force oracle.
//! * [`hyperbolic`], [`normal`], [`quadrature`], [`tridiag`] numerical
//!   building blocks.
#![no_std]

extern crate alloc;

pub mod hyperbolic;
pub mod mc;
pub mod model;
pub mod normal;
pub mod qp;
pub mod quadrature;
pub mod strategy;
pub mod tridiag;
pub mod varcalc;
pub mod wealth;

mod error;

pub use error::{Error, Result};
pub use mc::{CeEstimate, PriceEstimate, StrategyKind};
pub use model::{
    ImpactParams, LiquidationProblem, MarketParams, ModifiedClaim, OptionSpec, Path, TimeGrid,
};
pub use strategy::{IntegratorScheme, StrategyTrajectory};
pub use varcalc::{VariationalProblem, VariationalSolution};
pub use wealth::{MartingaleDiagnostic, WealthBreakdown};
