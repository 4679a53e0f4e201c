//! The invariant suite run by `liqlimit validate`.

use liqlimit_core::{
    ImpactParams, IntegratorScheme, LiquidationProblem, MarketParams, OptionSpec,
    VariationalProblem,
};

use crate::checks::{self, Check, ResidualMeasure};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// At most 1e4 paths and 8 variational lattice points.
    Fast,
    Full,
}

impl Level {
    fn paths(self) -> usize {
        match self {
            Level::Fast => 10_000,
            Level::Full => 100_000,
        }
    }

    fn lattice_points(self) -> usize {
        match self {
            Level::Fast => 8,
            Level::Full => usize::MAX,
        }
    }
}

const SEED: u64 = 20_240_601;

/// Call on a Bachelier underlying with `lambda = 0.1`.
pub fn reference_problem() -> LiquidationProblem {
    LiquidationProblem {
        market: MarketParams {
            s0: 0.0,
            mu: 0.0,
            sigma: 0.2,
            horizon: 1.0,
        },
        impact: ImpactParams {
            lambda: 0.1,
            a: 1.0,
        },
        option: OptionSpec {
            theta: 1.0,
            strike: 0.0,
        },
        phi0: 0.5,
    }
}

/// Pure liquidation used by the Monte Carlo engine checks.
pub fn liquidation_problem() -> LiquidationProblem {
    LiquidationProblem {
        market: MarketParams {
            s0: 0.0,
            mu: 0.0,
            sigma: 1.0,
            horizon: 1.0,
        },
        impact: ImpactParams {
            lambda: 0.5,
            a: 1.0,
        },
        option: OptionSpec::none(),
        phi0: 1.0,
    }
}

/// Short put with drift, to exercise negative `theta` and `mu != 0`.
fn put_problem() -> LiquidationProblem {
    LiquidationProblem {
        market: MarketParams {
            s0: 1.0,
            mu: 0.05,
            sigma: 0.3,
            horizon: 2.0,
        },
        impact: ImpactParams {
            lambda: 0.2,
            a: 0.5,
        },
        option: OptionSpec {
            theta: -1.5,
            strike: 1.2,
        },
        phi0: -0.4,
    }
}

/// Runs every check, passing each result line (and table rows of the full
/// level) to `emit` as soon as it is available.
pub fn run(level: Level, mut emit: impl FnMut(&str)) -> Result<Vec<Check>> {
    let mut all = Vec::new();
    let mut push = |cs: Vec<Check>, emit: &mut dyn FnMut(&str)| {
        for c in cs {
            emit(&c.to_string());
            all.push(c);
        }
    };
    let reference = reference_problem();
    let put = put_problem();
    let n_paths = level.paths();
    let steps = 1000;

    emit("[model]");
    for p in [&reference, &put] {
        push(
            vec![
                checks::price_matches_quadrature(p, 20, 1e-8)?,
                checks::price_matches_gauss_hermite(p, 20, 2e-3)?,
                checks::pde_residual(p, 20, 1e-4, 1e-4)?,
                checks::delta_bounded(p, 20)?,
                checks::delta_matches_fd(p, 20, 1e-6)?,
            ],
            &mut emit,
        );
        push(checks::payoff_ordering(p, 1000), &mut emit);
    }
    push(
        checks::terminal_moments(&put.market, n_paths, 100, SEED)?,
        &mut emit,
    );

    emit("[strategy]");
    push(
        vec![
            checks::theta_zero_exactness(&[1e-2, 1.0, 10.0, 100.0, 1000.0], steps, SEED)?,
            checks::rate_forms_agree(&reference, steps, SEED)?,
            checks::rate_forms_agree(&put, steps, SEED)?,
            checks::closed_form_vs_qp(1.0, 2.0, 0.5, 1.0, 1.0, 4000)?,
        ],
        &mut emit,
    );
    push(
        checks::admissibility(&reference, 1000, steps, SEED, IntegratorScheme::Exponential)?,
        &mut emit,
    );
    push(
        checks::admissibility(&put, 1000, steps, SEED, IntegratorScheme::Exponential)?,
        &mut emit,
    );
    push(vec![checks::euler_negative_control(20, SEED)?], &mut emit);

    emit("[wealth]");
    push(
        checks::wealth_chain(&reference, 1000, steps, SEED)?,
        &mut emit,
    );
    push(checks::wealth_chain(&put, 1000, steps, SEED)?, &mut emit);
    push(
        vec![
            checks::residual_refinement(
                &reference,
                2000,
                10,
                SEED,
                ResidualMeasure::ItoRemainderL1,
                0.9,
            )?,
            checks::supermartingale(&reference, n_paths.min(10_000), steps, SEED)?,
            checks::supermartingale(&put, n_paths.min(10_000), steps, SEED)?,
        ],
        &mut emit,
    );

    emit("[mc]");
    let liq = liquidation_problem();
    push(
        vec![
            checks::mc_vs_closed_form(&liq, n_paths, steps, SEED)?,
            checks::asymptotic_not_below_optimum(&liq, n_paths, steps, SEED)?,
            checks::determinism(&reference, 500, steps, SEED)?,
            checks::payoff_shift(&reference, 1000, steps, SEED)?,
            checks::limit_value_recomputed(&reference, reference.limit_value()),
            checks::limit_value_recomputed(&put, put.limit_value()),
        ],
        &mut emit,
    );

    emit("[varcalc]");
    let lattice = checks::varcalc_lattice(level.lattice_points())?;
    push(
        vec![
            checks::closed_vs_oracle(&lattice, 2000, 1e-3)?,
            checks::minimizer_constraints(&lattice)?,
            checks::stage_one_identity(&lattice)?,
            checks::uniqueness_probe(&lattice)?,
            checks::vertex_matches(&lattice)?,
            checks::oracle_self_convergence(&lattice, 200)?,
            checks::limit_gap_bound(&lattice)?,
        ],
        &mut emit,
    );
    if level == Level::Full {
        let base = VariationalProblem::new(0.2, 1.0, 1.0, 1.0, 1.0, 0.5)?;
        emit("lambda_from,lambda_to,gap_ratio");
        for (l0, l1, r) in checks::limit_gap_ratios(&base, &[0.2, 0.1, 0.05, 0.025])? {
            emit(&format!("{l0},{l1},{r:e}"));
        }
    }
    Ok(all)
}
