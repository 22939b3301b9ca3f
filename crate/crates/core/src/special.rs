//! Modified Bessel function of the first kind, order one.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 15.0;

/// `I₁(x)` for `x >= 0`. Odd extension for negative arguments.
pub fn bessel_i1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_i1(-x);
    }
    if x < SERIES_LIMIT {
        series(x)
    } else {
        asymptotic_scaled(x) * x.exp()
    }
}

/// `e^{-x} I₁(x)` for `x >= 0`; finite for arguments where `I₁` overflows.
pub fn bessel_i1_scaled(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_i1_scaled(-x);
    }
    if x < SERIES_LIMIT {
        series(x) * (-x).exp()
    } else {
        asymptotic_scaled(x)
    }
}

/// `Σ (x/2)^{2k+1} / (k! (k+1)!)`; all terms positive so no cancellation.
fn series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + 1.0));
        sum += term;
        if term <= 1e-17 * sum {
            return sum;
        }
    }
}

/// Hankel expansion `e^{-x} I₁(x) ~ (2πx)^{-1/2} Σ (-1)^k a_k / x^k`,
/// `a_k = Π_{j=1..k} (4 - (2j-1)²) / (k! 8^k)`, summed to its smallest term.
fn asymptotic_scaled(x: f64) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 1..200 {
        let j = (2 * k - 1) as f64;
        let next = -term * (4.0 - j * j) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}
