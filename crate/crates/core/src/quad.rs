//! Globally adaptive Gauss–Kronrod (7/15) quadrature in one and two dimensions.

use alloc::collections::BinaryHeap;
use core::cell::Cell;
use core::cmp::Ordering;

use num_traits::Float;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// An integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 0.0,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Tolerance {
            rel,
            ..Self::default()
        }
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let (f1, f2) = (f(center - x), f(center + x));
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let (res_k, res_abs, res_asc) = (res_k * half, res_abs * half.abs(), res_asc * half.abs());
    let mut err = (res_k - res_g * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Estimate {
        value: res_k,
        error: err,
    }
}

struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.est.error == o.est.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.est.error.total_cmp(&o.est.error)
    }
}

/// ∫ₐᵇ f, bisecting the interval with the largest error until
/// `error ≤ max(abs, rel·|value|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let first = gk15(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, est: first });
    loop {
        let target = tol.abs.max(tol.rel * value.abs());
        if error <= target {
            return Ok(Estimate { value, error });
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::NonConvergence {
                achieved: error,
                target,
                value,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            return Err(Error::NonConvergence {
                achieved: error,
                target,
                value,
            });
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        value += left.value + right.value - worst.est.value;
        error += left.error + right.error - worst.est.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            est: right,
        });
        if heap.len() % 64 == 0 {
            // Resum to keep the running totals from drifting.
            value = heap.iter().map(|p| p.est.value).sum();
            error = heap.iter().map(|p| p.est.error).sum();
        }
    }
}

/// ∫ₐᵇ dx ∫_{c(x)}^{d(x)} dy f(x, y), by nesting the 1-D routine. The inner
/// tolerance is a tenth of the outer one; inner errors are added to the
/// reported error.
pub fn integrate_2d<F, C, D>(f: F, a: f64, b: f64, c: C, d: D, tol: Tolerance) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64,
    C: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let inner_tol = Tolerance {
        abs: tol.abs * 0.1 / (b - a).abs().max(f64::MIN_POSITIVE),
        rel: tol.rel * 0.1,
        max_intervals: tol.max_intervals,
    };
    let worst_inner = Cell::new(0.0f64);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let outer = integrate(
        |x| match integrate(|y| f(x, y), c(x), d(x), inner_tol) {
            Ok(e) => {
                worst_inner.set(worst_inner.get().max(e.error));
                e.value
            }
            Err(err) => {
                if let Error::NonConvergence {
                    value, achieved, ..
                } = err
                {
                    worst_inner.set(worst_inner.get().max(achieved));
                    failure.set(Some(err));
                    value
                } else {
                    failure.set(Some(err));
                    0.0
                }
            }
        },
        a,
        b,
        tol,
    )?;
    let error = outer.error + worst_inner.get() * (b - a).abs();
    if let Some(err) = failure.take() {
        if !matches!(err, Error::NonConvergence { .. }) {
            return Err(err);
        }
        let target = tol.abs.max(tol.rel * outer.value.abs());
        if error > target {
            return Err(Error::NonConvergence {
                achieved: error,
                target,
                value: outer.value,
            });
        }
    }
    Ok(Estimate {
        value: outer.value,
        error,
    })
}

/// Upper limit used for the Bose-type integrals; the tail beyond it is
/// below 200⁸e^{-200} ≈ 1e-69.
pub const Z_MAX: f64 = 200.0;

/// ∫₀^∞ zⁿ eᶻ/(eᶻ−1)² dz (= n! ζ(n)), evaluated numerically on [0, Z_MAX].
pub fn bose_integral(n: i32) -> Result<Estimate> {
    integrate(|z| bose_integrand(n, z), 0.0, Z_MAX, Tolerance::rel(1e-12))
}

/// zⁿ eᶻ/(eᶻ−1)², written as zⁿ e^{-z}/(1−e^{-z})² to stay finite.
pub fn bose_integrand(n: i32, z: f64) -> f64 {
    if z <= 0.0 {
        return if n == 2 { 1.0 } else { 0.0 };
    }
    let d = -(-z).exp_m1();
    z.powi(n) * (-z).exp() / (d * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, Tolerance::default()).unwrap();
        assert!((e.value - 13.5).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand() {
        let e = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::rel(1e-11)).unwrap();
        let exact = 2.0 * 100.0 * (100.0f64).atan();
        assert!((e.value / exact - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_2d_over_triangle() {
        let e = integrate_2d(
            |x, y| x * y,
            0.0,
            1.0,
            |_| 0.0,
            |x| x,
            Tolerance::rel(1e-10),
        )
        .unwrap();
        assert!((e.value - 0.125).abs() < 1e-12);
    }

    #[test]
    fn bose_identities() {
        let four = bose_integral(4).unwrap().value;
        assert!((four / (4.0 * PI.powi(4) / 15.0) - 1.0).abs() < 1e-10);
        let eight = bose_integral(8).unwrap().value;
        assert!((eight / ((2.0 * PI).powi(8) / 60.0) - 1.0).abs() < 1e-10);
        assert!((eight - 4.05e4).abs() < 0.01 * 4.05e4);
    }

    #[test]
    fn budget_exhaustion_reports_best_value() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-15,
            max_intervals: 3,
        };
        match integrate(|x| x.abs().sqrt().recip(), 1e-300, 1.0, tol) {
            Err(Error::NonConvergence {
                value, achieved, ..
            }) => {
                assert!(value > 0.0 && achieved > 0.0)
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
