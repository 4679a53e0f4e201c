//! The deterministic variational problem behind the lower bound:
//!
//! ```text
//! min over delta with delta(0) = 0, delta(t_end) = x of
//!   lambda / (2 sigma^2 a) int delta'^2 + 1 / (2 lambda) ( int delta^2 - (phi lambda - int delta)^2 / t_end )
//! ```
//!
//! For a fixed mean `y = int delta` the minimizer solves
//! `delta'' - rho delta = const`, giving
//! `delta(t) = c1 sinh(q t) + c2 sinh(q (t_end - t)) + c3` with `q = sqrt(rho)`.
//! The remaining objective is a convex quadratic in `y`, minimized in
//! closed form. [`brute_force_value`] repeats both stages on a grid.

use alloc::vec;
use alloc::vec::Vec;

use libm::{fabs, sqrt};

use crate::error::ensure;
use crate::hyperbolic::{cosh_over_sinh, coth, csch, s_minus_two_tanh_half, sinh_ratio, tanh};
use crate::{tridiag, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalProblem {
    pub lambda: f64,
    pub a: f64,
    pub sigma: f64,
    pub t_end: f64,
    pub x: f64,
    pub phi: f64,
}

impl VariationalProblem {
    pub fn new(lambda: f64, a: f64, sigma: f64, t_end: f64, x: f64, phi: f64) -> Result<Self> {
        ensure(
            lambda > 0.0 && lambda < 1.0,
            "lambda",
            lambda,
            "0 < lambda < 1",
        )?;
        ensure(a > 0.0 && a.is_finite(), "a", a, "a > 0")?;
        ensure(
            sigma > 0.0 && sigma.is_finite(),
            "sigma",
            sigma,
            "sigma > 0",
        )?;
        ensure(
            t_end > 0.0 && t_end.is_finite(),
            "t_end",
            t_end,
            "t_end > 0",
        )?;
        ensure(x.is_finite(), "x", x, "finite")?;
        ensure(phi.is_finite(), "phi", phi, "finite")?;
        Ok(Self {
            lambda,
            a,
            sigma,
            t_end,
            x,
            phi,
        })
    }

    /// `sigma sqrt(a)`.
    pub fn scale(&self) -> f64 {
        self.sigma * sqrt(self.a)
    }

    pub fn sqrt_rho(&self) -> f64 {
        self.scale() / self.lambda
    }

    /// Objective of the outer problem for a path with the given integrals.
    pub fn objective(&self, int_rate_sq: f64, int_sq: f64, int_path: f64) -> f64 {
        let l = self.lambda;
        let k2 = self.sigma * self.sigma * self.a;
        l / (2.0 * k2) * int_rate_sq
            + (int_sq - (self.phi * l - int_path) * (self.phi * l - int_path) / self.t_end)
                / (2.0 * l)
    }

    /// `(x + sigma sqrt(a) phi)^2 / (4 sigma sqrt(a)) - sigma sqrt(a) phi^2 / 2`.
    pub fn limit_value(&self) -> f64 {
        let k = self.scale();
        let s = self.x + k * self.phi;
        s * s / (4.0 * k) - 0.5 * k * self.phi * self.phi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalSolution {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Optimal `int delta dt`.
    pub y: f64,
    pub value: f64,
    sqrt_rho: f64,
    t_end: f64,
    x: f64,
}

impl VariationalSolution {
    /// `delta(t)` on `[0, t_end]`, via sinh ratios so huge `q t_end` is fine.
    pub fn minimizer(&self, t: f64) -> f64 {
        let q = self.sqrt_rho;
        let s = q * self.t_end;
        (self.x - self.c3) * sinh_ratio(q * t, s) - self.c3 * sinh_ratio(q * (self.t_end - t), s)
            + self.c3
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let q = self.sqrt_rho;
        let s = q * self.t_end;
        q * ((self.x - self.c3) * cosh_over_sinh(q * t, s)
            + self.c3 * cosh_over_sinh(q * (self.t_end - t), s))
    }
}

fn stage_one_denominator(s: f64) -> Result<f64> {
    let d = s_minus_two_tanh_half(s);
    if d.is_nan() || d <= 0.0 || d.is_infinite() {
        return Err(Error::Degenerate(
            "sqrt(rho) t_end - 2 tanh(sqrt(rho) t_end / 2) underflows",
        ));
    }
    Ok(d)
}

/// `rho int delta^2 + int delta'^2` of the constrained minimizer with mean `y`:
/// `q (x^2 coth(s) + (x tanh(s/2) - q y)^2 / (s - 2 tanh(s/2)))`, `s = q t_end`.
pub fn stage_one_energy(problem: &VariationalProblem, y: f64) -> Result<f64> {
    let q = problem.sqrt_rho();
    let s = q * problem.t_end;
    let d = stage_one_denominator(s)?;
    let th = tanh(0.5 * s);
    let x = problem.x;
    let m = x * th - q * y;
    Ok(q * (x * x * coth(s) + m * m / d))
}

pub fn xi_minimizer(problem: &VariationalProblem) -> Result<VariationalSolution> {
    let q = problem.sqrt_rho();
    let t_end = problem.t_end;
    let s = q * t_end;
    let d = stage_one_denominator(s)?;
    let th = tanh(0.5 * s);
    let (x, l) = (problem.x, problem.lambda);

    let y = 0.5 * x * t_end - problem.phi * l * d / (2.0 * th);
    let c3 = (q * y - x * th) / d;
    let inv_sinh = csch(s);
    let c1 = (x - c3) * inv_sinh;
    let c2 = -c3 * inv_sinh;

    let m = x * th - q * y;
    let value = (x * x * coth(s) + m * m / d) / (2.0 * problem.scale())
        - (problem.phi * l - y) * (problem.phi * l - y) / (2.0 * l * t_end);
    Ok(VariationalSolution {
        c1,
        c2,
        c3,
        y,
        value,
        sqrt_rho: q,
        t_end,
        x,
    })
}

/// `|V - limit|`, which decays like `O(lambda)`.
pub fn limit_gap(problem: &VariationalProblem) -> Result<f64> {
    Ok(fabs(xi_minimizer(problem)?.value - problem.limit_value()))
}

/// Grid minimizer of the inner problem at fixed mean `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageOne {
    pub delta: Vec<f64>,
    /// `lambda / (2 sigma^2 a) int delta'^2 + 1 / (2 lambda) int delta^2`.
    pub value: f64,
}

/// Minimize the discretized inner objective subject to `delta_0 = 0`,
/// `delta_n = x` and trapezoid mean `y`. The KKT system is tridiagonal plus
/// one multiplier: solve `Q z1 = b`, `Q z2 = h 1`, then fix the multiplier
/// from the mean constraint.
pub fn brute_force_stage_one(
    problem: &VariationalProblem,
    y: f64,
    n_grid: usize,
) -> Result<StageOne> {
    ensure(n_grid >= 100, "n_grid", n_grid as f64, "n_grid >= 100")?;
    let h = problem.t_end / n_grid as f64;
    let p = problem.lambda / (problem.sigma * problem.sigma * problem.a);
    let r = 1.0 / problem.lambda;
    let x = problem.x;
    let m = n_grid - 1;

    let diag = vec![2.0 * p / h + r * h; m];
    let off = vec![-p / h; m];
    let mut b = vec![0.0; m];
    b[m - 1] = p * x / h;
    let z1 = tridiag::solve(&off, &diag, &off, &b)?;
    let z2 = tridiag::solve(&off, &diag, &off, &vec![h; m])?;
    let s1: f64 = z1.iter().sum();
    let s2: f64 = z2.iter().sum();
    if s2 == 0.0 {
        return Err(Error::Singular);
    }
    let mu = (y / h - 0.5 * x - s1) / s2;

    let mut delta = Vec::with_capacity(n_grid + 1);
    delta.push(0.0);
    delta.extend(z1.iter().zip(&z2).map(|(a, b)| a + mu * b));
    delta.push(x);

    let mut kinetic = 0.0;
    let mut potential = 0.0;
    for k in 0..n_grid {
        let dd = delta[k + 1] - delta[k];
        kinetic += dd * dd / h;
        potential += 0.5 * h * (delta[k] * delta[k] + delta[k + 1] * delta[k + 1]);
    }
    Ok(StageOne {
        value: 0.5 * p * kinetic + 0.5 * r * potential,
        delta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForce {
    pub y: f64,
    pub value: f64,
}

/// Full objective at mean `y`: inner grid minimum minus the mean penalty.
pub fn brute_force_objective(problem: &VariationalProblem, y: f64, n_grid: usize) -> Result<f64> {
    let inner = brute_force_stage_one(problem, y, n_grid)?.value;
    let l = problem.lambda;
    Ok(inner - (problem.phi * l - y) * (problem.phi * l - y) / (2.0 * l * problem.t_end))
}

/// Two-stage grid oracle. The outer objective is exactly quadratic in `y`,
/// so three evaluations locate its vertex.
pub fn brute_force_solve(problem: &VariationalProblem, n_grid: usize) -> Result<BruteForce> {
    let step = 1.0 + fabs(problem.x) * problem.t_end + fabs(problem.phi);
    let f_lo = brute_force_objective(problem, -step, n_grid)?;
    let f_mid = brute_force_objective(problem, 0.0, n_grid)?;
    let f_hi = brute_force_objective(problem, step, n_grid)?;
    let curvature = (f_hi + f_lo - 2.0 * f_mid) / (2.0 * step * step);
    let slope = (f_hi - f_lo) / (2.0 * step);
    if curvature.is_nan() || curvature <= 0.0 {
        return Err(Error::Degenerate("outer objective is not convex"));
    }
    let y = -slope / (2.0 * curvature);
    Ok(BruteForce {
        y,
        value: brute_force_objective(problem, y, n_grid)?,
    })
}

pub fn brute_force_value(problem: &VariationalProblem, n_grid: usize) -> Result<f64> {
    Ok(brute_force_solve(problem, n_grid)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_data_gives_zero_minimizer() {
        let p = VariationalProblem::new(0.1, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        let s = xi_minimizer(&p).unwrap();
        assert_eq!((s.y, s.c1, s.c2, s.c3, s.value), (0.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(s.minimizer(0.4), 0.0);
        assert!(brute_force_value(&p, 200).unwrap().abs() < 1e-14);
    }

    #[test]
    fn validation() {
        assert!(VariationalProblem::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(VariationalProblem::new(0.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(VariationalProblem::new(0.5, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        let p = VariationalProblem::new(0.5, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert!(brute_force_value(&p, 99).is_err());
    }

    #[test]
    fn small_argument_branch() {
        // q t_end = 1e-3: series branch, still solves the constraints.
        let p = VariationalProblem::new(0.999, 1e-6, 1.0, 1.0, 0.4, 0.2).unwrap();
        let s = xi_minimizer(&p).unwrap();
        assert!(s.value.is_finite());
        assert!(s.minimizer(0.0).abs() < 1e-9);
        assert!((s.minimizer(1.0) - 0.4).abs() < 1e-9);
    }

    #[test]
    fn huge_rate_stays_finite() {
        let p = VariationalProblem::new(1e-4, 1.0, 1.0, 1.0, 1.0, 0.5).unwrap();
        let s = xi_minimizer(&p).unwrap();
        assert!(s.value.is_finite());
        assert!((s.minimizer(1.0) - 1.0).abs() < 1e-12);
        assert!(s.minimizer(0.0).abs() < 1e-12);
    }
}
