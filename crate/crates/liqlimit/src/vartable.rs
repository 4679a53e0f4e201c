//! Closed-form variational values against the grid oracle over a lattice.

use liqlimit_core::varcalc::{brute_force_value, xi_minimizer};
use liqlimit_core::VariationalProblem;
use rayon::prelude::*;

use crate::config::VarTableConfig;
use crate::csv::CsvTable;
use crate::error::Result;

pub const COLUMNS: [&str; 8] = [
    "lambda",
    "x",
    "phi",
    "t_end",
    "value_closed",
    "value_oracle",
    "gap",
    "gap_over_lambda",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarRow {
    pub problem: VariationalProblem,
    pub value_closed: f64,
    pub value_oracle: f64,
    /// Distance of the closed-form value from its small-lambda limit.
    pub gap: f64,
}

impl VarRow {
    pub fn compute(problem: VariationalProblem, n_grid: usize) -> Result<Self> {
        let value_closed = xi_minimizer(&problem)?.value;
        Ok(Self {
            problem,
            value_closed,
            value_oracle: brute_force_value(&problem, n_grid)?,
            gap: (value_closed - problem.limit_value()).abs(),
        })
    }

    pub fn oracle_error(&self) -> f64 {
        (self.value_closed - self.value_oracle).abs() / self.value_oracle.abs().max(1.0)
    }
}

/// Lattice in `lambda, x, phi, t_end` order (last index fastest).
pub fn lattice(config: &VarTableConfig) -> Result<Vec<VariationalProblem>> {
    let mut out = Vec::new();
    for &l in &config.lambdas {
        for &x in &config.xs {
            for &phi in &config.phis {
                for &t in &config.t_ends {
                    out.push(VariationalProblem::new(
                        l,
                        config.a,
                        config.sigma,
                        t,
                        x,
                        phi,
                    )?);
                }
            }
        }
    }
    Ok(out)
}

pub fn run_var_table(config: &VarTableConfig) -> Result<Vec<VarRow>> {
    lattice(config)?
        .into_par_iter()
        .map(|p| VarRow::compute(p, config.n_grid))
        .collect()
}

pub fn table(rows: &[VarRow]) -> CsvTable {
    let mut t = CsvTable::new("var-table", &COLUMNS);
    for r in rows {
        let p = r.problem;
        t.push(vec![
            p.lambda,
            p.x,
            p.phi,
            p.t_end,
            r.value_closed,
            r.value_oracle,
            r.gap,
            r.gap / p.lambda,
        ]);
    }
    t
}
