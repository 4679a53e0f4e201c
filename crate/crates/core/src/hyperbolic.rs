//! Hyperbolic functions of possibly huge arguments.
//!
//! The liquidation clock `sqrt(rho) * (T - t)` grows like `1 / Lambda`, so
//! `cosh` and `sinh` overflow long before the ratios we actually need do.
//! Every routine here is written in terms of `exp(-2|x|)` and `expm1`, and
//! never evaluates `cosh`/`sinh` directly.

use libm::{exp, expm1, fabs};

/// Below this argument `s - 2 tanh(s / 2)` is evaluated by its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-2;

/// `coth(x)` for `x != 0`; `+inf` at zero.
pub fn coth(x: f64) -> f64 {
    if x == 0.0 {
        return f64::INFINITY;
    }
    let ax = fabs(x);
    let e = exp(-2.0 * ax);
    let v = (1.0 + e) / -expm1(-2.0 * ax);
    if x < 0.0 {
        -v
    } else {
        v
    }
}

pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

/// `1 / cosh(x)^2`, zero (not NaN) for huge `|x|`.
pub fn sech2(x: f64) -> f64 {
    let e = exp(-2.0 * fabs(x));
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// `1 / sinh(x)` for `x > 0`.
pub fn csch(x: f64) -> f64 {
    let ax = fabs(x);
    let v = 2.0 * exp(-ax) / -expm1(-2.0 * ax);
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `cosh(a) / cosh(b)` for `a, b >= 0`.
pub fn cosh_ratio(a: f64, b: f64) -> f64 {
    exp(a - b) * (1.0 + exp(-2.0 * a)) / (1.0 + exp(-2.0 * b))
}

/// `sinh(a) / sinh(b)` for `a >= 0`, `b > 0`. Exactly zero at `a = 0`.
pub fn sinh_ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    exp(a - b) * expm1(-2.0 * a) / expm1(-2.0 * b)
}

/// `cosh(a) / sinh(b)` for `a >= 0`, `b > 0`.
pub fn cosh_over_sinh(a: f64, b: f64) -> f64 {
    exp(a - b) * (1.0 + exp(-2.0 * a)) / -expm1(-2.0 * b)
}

/// `s - 2 tanh(s / 2)` for `s >= 0`, which behaves like `s^3 / 12` near zero.
pub fn s_minus_two_tanh_half(s: f64) -> f64 {
    if fabs(s) < SERIES_THRESHOLD {
        let s2 = s * s;
        s * s2 * (1.0 / 12.0 - s2 * (1.0 / 120.0 - s2 * (17.0 / 20160.0)))
    } else {
        s - 2.0 * libm::tanh(0.5 * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        fabs(a - b) / fabs(b)
    }

    #[test]
    fn moderate_arguments_match_direct_evaluation() {
        for &x in &[1e-6, 0.3, 1.0, 2.5, 7.0, 20.0] {
            assert!(
                rel(coth(x), libm::cosh(x) / libm::sinh(x)) < 1e-12,
                "coth {x}"
            );
            assert!(rel(sech2(x), 1.0 / (libm::cosh(x) * libm::cosh(x))) < 1e-12);
            assert!(rel(csch(x), 1.0 / libm::sinh(x)) < 1e-12);
            for &y in &[0.1, 1.0, 5.0] {
                assert!(rel(cosh_ratio(x, y), libm::cosh(x) / libm::cosh(y)) < 1e-12);
                assert!(rel(sinh_ratio(x, y), libm::sinh(x) / libm::sinh(y)) < 1e-12);
                assert!(rel(cosh_over_sinh(x, y), libm::cosh(x) / libm::sinh(y)) < 1e-12);
            }
        }
        assert!(rel(coth(1.0), (exp(2.0) + 1.0) / (exp(2.0) - 1.0)) < 1e-15);
    }

    #[test]
    fn huge_arguments_stay_finite() {
        assert_eq!(coth(1e3), 1.0);
        assert_eq!(coth(-1e3), -1.0);
        assert_eq!(sech2(1e3), 0.0);
        assert!((cosh_ratio(999.0, 1000.0) - exp(-1.0)).abs() < 1e-15);
        assert!((sinh_ratio(1000.0, 1001.0) - exp(-1.0)).abs() < 1e-15);
        assert!(cosh_ratio(2000.0, 2000.0) == 1.0);
    }

    #[test]
    fn series_branch_is_continuous() {
        let s = SERIES_THRESHOLD;
        let below = s_minus_two_tanh_half(s * (1.0 - 1e-12));
        let above = s_minus_two_tanh_half(s);
        assert!(rel(below, above) < 1e-8);
        // Tiny arguments: leading term dominates.
        assert!(rel(s_minus_two_tanh_half(1e-6), 1e-18 / 12.0) < 1e-10);
        assert!(s_minus_two_tanh_half(1e-6) > 0.0);
    }
}
