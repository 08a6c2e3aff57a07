//! Exponentially scaled modified Bessel functions and the error function.
//!
//! `ie0(x) = e^{-|x|} I₀(x)` and `ie1(x) = e^{-|x|} I₁(x)` stay O(1/√x) for
//! large arguments, so products like `I₁(2α²) e^{-2α²}` never overflow.

use core::f64::consts::PI;

use num_traits::Float;

/// Below this the power series is used; above it the asymptotic expansion.
const SWITCH: f64 = 15.0;

fn series_scaled(nu: u32, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = if nu == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let mut k = 1.0;
    while k < 500.0 {
        term *= q / (k * (k + nu as f64));
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
        k += 1.0;
    }
    sum * (-x).exp()
}

fn asymptotic_scaled(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while k < 60.0 {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (k * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    sum / (2.0 * PI * x).sqrt()
}

/// e^{-|x|} I₀(x)
pub fn ie0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SWITCH {
        series_scaled(0, ax)
    } else {
        asymptotic_scaled(0, ax)
    }
}

/// e^{-|x|} I₁(x)
pub fn ie1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SWITCH {
        series_scaled(1, ax)
    } else {
        asymptotic_scaled(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

pub fn i0(x: f64) -> f64 {
    ie0(x) * x.abs().exp()
}

pub fn i1(x: f64) -> f64 {
    ie1(x) * x.abs().exp()
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}
