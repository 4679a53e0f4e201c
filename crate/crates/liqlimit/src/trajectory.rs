//! Dump of one simulated strategy path.

use liqlimit_core::model::simulate_path;
use liqlimit_core::strategy::integrate_trajectory;
use liqlimit_core::{StrategyTrajectory, TimeGrid};

use crate::config::ExperimentConfig;
use crate::csv::CsvTable;
use crate::error::Result;

pub const COLUMNS: [&str; 6] = ["t", "S", "F", "Phi", "PhiRate", "Upsilon"];

pub fn run_trajectory(
    config: &ExperimentConfig,
    lambda: f64,
    path_index: u64,
) -> Result<(Vec<f64>, StrategyTrajectory)> {
    let grid = TimeGrid::new(config.market.horizon, config.n_steps)?;
    let problem = config.problem(lambda)?;
    let path = simulate_path(&config.market, grid, config.seed, path_index);
    let traj = integrate_trajectory(&problem, &path)?;
    Ok((path.s, traj))
}

pub fn table(prices: &[f64], traj: &StrategyTrajectory) -> CsvTable {
    let mut t = CsvTable::new("trajectory", &COLUMNS);
    for (k, &s) in prices.iter().enumerate().take(traj.grid.len()) {
        t.push(vec![
            traj.grid.time(k),
            s,
            traj.f_vals[k],
            traj.phi_vals[k],
            traj.phi_rate[k],
            traj.upsilon[k],
        ]);
    }
    t
}
