//! Rayon drivers over path indices.
//!
//! Each path writes only its own slot of the exponent array and the
//! reduction is sequential in index order, so results match the sequential
//! core routines bit for bit at any thread count.

use liqlimit_core::mc::PathEvaluator;
use liqlimit_core::{CeEstimate, LiquidationProblem, PriceEstimate, StrategyKind, TimeGrid};
use rayon::prelude::*;

use crate::error::Result;

/// Runs `f(i)` for `i in 0..n` in parallel, returning results in index order.
pub fn map_indices<T, F>(n: usize, f: F) -> liqlimit_core::Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> liqlimit_core::Result<T> + Sync + Send,
{
    (0..n as u64).into_par_iter().map(f).collect()
}

pub fn exponents(eval: &PathEvaluator, n_paths: usize, seed: u64) -> Result<Vec<f64>> {
    Ok(map_indices(n_paths, |i| eval.exponent(seed, i))?)
}

pub fn estimate_ce(
    problem: &LiquidationProblem,
    kind: StrategyKind,
    grid: TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<CeEstimate> {
    let eval = PathEvaluator::new(*problem, kind, grid)?;
    let exps = exponents(&eval, n_paths, seed)?;
    Ok(eval.estimate(&exps)?)
}

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
