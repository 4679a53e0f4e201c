//! Standard normal law. `libm::erfc` is accurate to about one ulp, well
//! inside the 1e-12 budget the price surface needs.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

use libm::{erfc, exp, sqrt};

pub fn pdf(z: f64) -> f64 {
    exp(-0.5 * z * z) / sqrt(2.0 * PI)
}

pub fn cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}
