//! Lambda sweeps of the certainty equivalent against its scaling limit.

use liqlimit_core::{CeEstimate, TimeGrid};

use crate::config::ExperimentConfig;
use crate::csv::CsvTable;
use crate::error::Result;
use crate::parallel;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub estimate: CeEstimate,
    /// `|ce - limit_value|`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub limit_value: f64,
    pub rows: Vec<SweepRow>,
}

pub const COLUMNS: [&str; 5] = ["lambda", "ce_estimate", "stderr", "limit_value", "gap"];

impl SweepReport {
    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new("sweep", &COLUMNS);
        for r in &self.rows {
            t.push(vec![
                r.lambda,
                r.estimate.value,
                r.estimate.stderr_proxy,
                self.limit_value,
                r.gap,
            ]);
        }
        t
    }
}

/// Runs every lambda in order; `progress` sees each row as it completes.
pub fn run_sweep(
    config: &ExperimentConfig,
    mut progress: impl FnMut(&SweepRow),
) -> Result<SweepReport> {
    let grid = TimeGrid::new(config.market.horizon, config.n_steps)?;
    let limit_value = config.problem(config.lambda_sweep[0])?.limit_value();
    let mut rows = Vec::with_capacity(config.lambda_sweep.len());
    for &lambda in &config.lambda_sweep {
        let problem = config.problem(lambda)?;
        let estimate =
            parallel::estimate_ce(&problem, config.strategy, grid, config.n_paths, config.seed)?;
        let row = SweepRow {
            lambda,
            gap: (estimate.value - limit_value).abs(),
            estimate,
        };
        progress(&row);
        rows.push(row);
    }
    Ok(SweepReport { limit_value, rows })
}
