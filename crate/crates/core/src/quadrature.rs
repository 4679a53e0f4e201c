//! Gaussian quadrature rules used as independent oracles for the closed-form
//! price surface and the variational problem.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, fabs, pow, sqrt};

use crate::normal;

/// A quadrature rule: `sum_i weights[i] * h(nodes[i])`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre rule with `n` nodes on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut pp;
        loop {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if fabs(z - z1) <= 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    Rule { nodes, weights }
}

/// Gauss-Hermite rule for the standard normal law: `E[h(Z)] ~ sum w_i h(z_i)`.
///
/// Nodes come from Newton iteration on the orthonormal physicists' Hermite
/// recurrence and are then rescaled to the probabilists' weight. The
/// initial guesses lose roots beyond about 200 nodes, so `n` is capped.
pub fn gauss_hermite_normal(n: usize) -> Rule {
    assert!(n <= 128, "Gauss-Hermite rule limited to 128 nodes");
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => sqrt(2.0 * nf + 1.0) - 1.855_75 * pow(2.0 * nf + 1.0, -1.0 / 6.0),
            1 => z - 1.14 * pow(nf, 0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * sqrt(2.0 / (jf + 1.0)) * p2 - sqrt(jf / (jf + 1.0)) * p3;
            }
            pp = sqrt(2.0 * nf) * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if fabs(z - z1) <= 1e-14 * fabs(z).max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let scale = 1.0 / sqrt(PI);
    Rule {
        nodes: x.iter().map(|v| v * core::f64::consts::SQRT_2).collect(),
        weights: w.iter().map(|v| v * scale).collect(),
    }
}

impl Rule {
    pub fn apply(&self, mut h: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * h(z))
            .sum()
    }
}

/// `E[h(Z)]` for standard normal `Z` and a piecewise-smooth `h`.
///
/// The real line is truncated to `[-12, 12]` (tail mass below 1e-32), split
/// at every listed kink and into unit panels, and each panel is integrated
/// against the normal density with a 20-point Gauss-Legendre rule. This is
/// the oracle for payoffs whose kink defeats plain Gauss-Hermite.
pub fn normal_expectation_piecewise(mut h: impl FnMut(f64) -> f64, kinks: &[f64]) -> f64 {
    const HALF_WIDTH: f64 = 12.0;
    let rule = gauss_legendre(20);
    let mut breaks: Vec<f64> = kinks
        .iter()
        .copied()
        .filter(|k| k.is_finite() && fabs(*k) < HALF_WIDTH)
        .collect();
    let mut edge = -HALF_WIDTH;
    while edge <= HALF_WIDTH {
        breaks.push(edge);
        edge += 1.0;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        total += half
            * rule.apply(|s| {
                let z = mid + half * s;
                h(z) * normal::pdf(z)
            });
    }
    total
}
