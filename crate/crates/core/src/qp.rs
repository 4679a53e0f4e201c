//! Discretized quadratic program for deterministic liquidation:
//!
//! ```text
//! min  (k / 2) int Phi^2 dt + (lambda / 2) int Phi'^2 dt,   Phi(0) = phi0, Phi(T) = 0
//! ```
//!
//! Trapezoid rule for the running term, forward differences for the rate.
//! Independent of the closed-form sinh solution; used as its oracle.

use alloc::vec;
use alloc::vec::Vec;

use crate::{tridiag, Result};

/// Minimizing grid profile (length `n + 1`).
pub fn liquidation_qp_profile(
    phi0: f64,
    risk_weight: f64,
    lambda: f64,
    horizon: f64,
    n: usize,
) -> Result<Vec<f64>> {
    let dt = horizon / n as f64;
    let m = n - 1;
    let diag = vec![risk_weight * dt + 2.0 * lambda / dt; m];
    let off = vec![-lambda / dt; m];
    let mut rhs = vec![0.0; m];
    rhs[0] = lambda / dt * phi0;
    let interior = tridiag::solve(&off, &diag, &off, &rhs)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(phi0);
    out.extend(interior);
    out.push(0.0);
    Ok(out)
}

/// Discrete cost of a grid profile under the same quadrature.
pub fn liquidation_cost(phi: &[f64], risk_weight: f64, lambda: f64, horizon: f64) -> f64 {
    let n = phi.len() - 1;
    let dt = horizon / n as f64;
    let mut running = 0.0;
    let mut kinetic = 0.0;
    for k in 0..n {
        running += 0.5 * dt * (phi[k] * phi[k] + phi[k + 1] * phi[k + 1]);
        let d = phi[k + 1] - phi[k];
        kinetic += d * d / dt;
    }
    0.5 * risk_weight * running + 0.5 * lambda * kinetic
}

/// Minimum value of the discretized program on `n` steps.
pub fn liquidation_qp_min(
    phi0: f64,
    risk_weight: f64,
    lambda: f64,
    horizon: f64,
    n: usize,
) -> Result<f64> {
    let phi = liquidation_qp_profile(phi0, risk_weight, lambda, horizon, n)?;
    Ok(liquidation_cost(&phi, risk_weight, lambda, horizon))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_risk_gives_linear_profile() {
        let phi = liquidation_qp_profile(2.0, 0.0, 0.5, 1.0, 10).unwrap();
        for (k, v) in phi.iter().enumerate() {
            assert!((v - 2.0 * (1.0 - k as f64 / 10.0)).abs() < 1e-14);
        }
        let c = liquidation_qp_min(2.0, 0.0, 0.5, 1.0, 10).unwrap();
        assert!((c - 0.5 * 0.5 * 4.0).abs() < 1e-13);
    }

    #[test]
    fn minimizer_beats_perturbations() {
        let phi = liquidation_qp_profile(1.0, 4.0, 0.3, 1.0, 50).unwrap();
        let base = liquidation_cost(&phi, 4.0, 0.3, 1.0);
        for j in 1..50 {
            let mut p = phi.clone();
            p[j] += 1e-3;
            assert!(liquidation_cost(&p, 4.0, 0.3, 1.0) > base);
        }
    }
}
