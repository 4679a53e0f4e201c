//! Thomas algorithm for tridiagonal systems.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Solve `A x = rhs` with `A` given by its sub-, main and super-diagonal.
///
/// `lower[0]` and `upper[n - 1]` are ignored. No pivoting: intended for the
/// symmetric positive-definite systems of the discretized quadratic programs.
pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::GridMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut denom = diag[0];
    if denom == 0.0 {
        return Err(Error::Singular);
    }
    c.push(upper[0] / denom);
    d.push(rhs[0] / denom);
    for i in 1..n {
        denom = diag[i] - lower[i] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::Singular);
        }
        c.push(upper[i] / denom);
        d.push((rhs[i] - lower[i] * d[i - 1]) / denom);
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [2 -1 0; -1 2 -1; 0 -1 2] x = [1 0 1] -> x = [1 1 1]
        let x = solve(
            &[0.0, -1.0, -1.0],
            &[2.0, 2.0, 2.0],
            &[-1.0, -1.0, 0.0],
            &[1.0, 0.0, 1.0],
        )
        .unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_pivot_is_singular() {
        let r = solve(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]);
        assert_eq!(r, Err(Error::Singular));
        assert!(solve(&[0.0], &[1.0], &[0.0], &[1.0, 2.0]).is_err());
    }
}
