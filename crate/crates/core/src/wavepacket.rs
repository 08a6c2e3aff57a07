//! Deterministic evolution of the complex Gaussian variance σ² of the
//! centre-of-mass wavefunction ψ ∝ exp(−(x − b)²/4σ²) under Schrödinger
//! spreading and collapse narrowing:
//!
//!   dσ²/dt = iħ/2M − (2λN²f/a²) σ⁴.
//!
//! In units of s_inf² and τ_s this is y' = i/2 − y², with stable fixed point
//! y = (1 + i)/2.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::constants::CGS;
use crate::error::{non_negative, positive, Error, Result};

/// σ² = σ_R² + iσ_I², cm².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVariance(pub Complex64);

impl ComplexVariance {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        positive("sigma_R^2", re)?;
        Ok(ComplexVariance(Complex64::new(re, im)))
    }

    /// The equilibrium value s²(1 + i)/2.
    pub fn equilibrium(s_inf: f64) -> Self {
        let h = 0.5 * s_inf * s_inf;
        ComplexVariance(Complex64::new(h, h))
    }

    /// Squared packet width |ψ|² ∝ exp(−x²/2s²): s² = σ_R² + σ_I⁴/σ_R².
    pub fn width_sq(&self) -> f64 {
        let (r, i) = (self.0.re, self.0.im);
        r + i * i / r
    }
}

const Y_EQ: Complex64 = Complex64::new(0.5, 0.5);

/// Exact solution of the variance equation from σ²(0) = `sigma0`.
pub fn sigma_closed_form(
    sigma0: ComplexVariance,
    s_inf: f64,
    tau_s: f64,
    t: f64,
) -> Result<ComplexVariance> {
    positive("s_inf", s_inf)?;
    positive("tau_s", tau_s)?;
    non_negative("t", t)?;
    positive("sigma_R^2(0)", sigma0.0.re)?;
    let s2 = s_inf * s_inf;
    let y0 = sigma0.0 / s2;
    let w0 = (y0 - Y_EQ) / (y0 + Y_EQ);
    let w = w0 * (-2.0 * Y_EQ * (t / tau_s)).exp();
    let y = Y_EQ * (1.0 + w) / (1.0 - w);
    Ok(ComplexVariance(y * s2))
}

#[derive(Debug, Clone, Copy)]
pub struct OdeTolerance {
    pub rel: f64,
    pub max_steps: usize,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        OdeTolerance {
            rel: 1e-10,
            max_steps: 1_000_000,
        }
    }
}

// Dormand–Prince 5(4) tableau
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One adaptive Dormand–Prince step of an autonomous complex ODE. Returns
/// (new state, error ratio); the step is acceptable when the ratio ≤ 1.
fn dp45_step<F: Fn(Complex64) -> Complex64>(
    f: &F,
    y: Complex64,
    h: f64,
    rel: f64,
    scale: f64,
) -> (Complex64, f64) {
    let mut k = [Complex64::new(0.0, 0.0); 7];
    k[0] = f(y);
    for s in 1..7 {
        let mut acc = y;
        for j in 0..s {
            acc += k[j] * (h * A[s][j]);
        }
        k[s] = f(acc);
    }
    let mut y5 = y;
    let mut err = Complex64::new(0.0, 0.0);
    for s in 0..7 {
        y5 += k[s] * (h * B5[s]);
        err += k[s] * (h * (B5[s] - B4[s]));
    }
    let tol = rel * y.norm().max(y5.norm()).max(scale);
    (y5, err.norm() / tol)
}

/// Numerical solution of the variance equation on `t_grid` (s, ascending),
/// for body mass M, effective collapse rate λN²f and length a.
pub fn sigma_ode_integrate(
    sigma0: ComplexVariance,
    mass: f64,
    lam_eff: f64,
    a: f64,
    t_grid: &[f64],
    tol: OdeTolerance,
) -> Result<Vec<ComplexVariance>> {
    positive("M", mass)?;
    non_negative("lambda_eff", lam_eff)?;
    positive("a", a)?;
    positive("sigma_R^2(0)", sigma0.0.re)?;
    if t_grid.windows(2).any(|w| w[1] < w[0]) || t_grid.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_grid",
            reason: "must be nonnegative and ascending",
        });
    }
    let spread = Complex64::new(0.0, CGS.hbar / (2.0 * mass));
    let kappa = 2.0 * lam_eff / (a * a);
    let f = |s: Complex64| spread - s * s * kappa;
    let scale = 1e-6 * sigma0.0.norm();

    let mut out = Vec::with_capacity(t_grid.len());
    let mut y = sigma0.0;
    let mut t = 0.0;
    // initial step from the local time scale |y/f(y)|
    let mut h = {
        let rate = f(y).norm();
        if rate > 0.0 {
            1e-3 * y.norm() / rate
        } else {
            1.0
        }
    };
    let mut steps = 0;
    for &target in t_grid {
        while t < target {
            let last = h >= target - t;
            let step = if last { target - t } else { h };
            let (next, ratio) = dp45_step(&f, y, step, tol.rel, scale);
            steps += 1;
            if steps > tol.max_steps || !next.re.is_finite() {
                return Err(Error::NonConvergence {
                    achieved: ratio * tol.rel,
                    target: tol.rel,
                    value: y.re,
                });
            }
            if ratio <= 1.0 {
                y = next;
                t = if last { target } else { t + step };
            }
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            if !(last && ratio <= 1.0) {
                h = step * factor;
            }
        }
        out.push(ComplexVariance(y));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn equilibrium_is_fixed() {
        let s = 4e-7;
        let eq = ComplexVariance::equilibrium(s);
        for t in [0.0, 0.3, 7.0, 100.0] {
            let v = sigma_closed_form(eq, s, 0.7, t).unwrap();
            assert!(rel(v.0, eq.0) < 1e-15);
        }
        assert!((eq.width_sq() / (s * s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_relaxes() {
        let s = 2.0;
        let start = ComplexVariance::new(0.3, -1.0).unwrap();
        let late = sigma_closed_form(start, s, 1.0, 40.0).unwrap();
        assert!(rel(late.0, ComplexVariance::equilibrium(s).0) < 1e-6);
    }

    #[test]
    fn closed_form_solves_equation() {
        // centred difference of y(t) against y' = i/2 − y²
        let start = ComplexVariance::new(0.1, 0.4).unwrap();
        let y = |t| sigma_closed_form(start, 1.0, 1.0, t).unwrap().0;
        let (t, h) = (0.7, 1e-5);
        let dy = (y(t + h) - y(t - h)) / (2.0 * h);
        let rhs = Complex64::new(0.0, 0.5) - y(t) * y(t);
        assert!(rel(dy, rhs) < 1e-8);
    }

    #[test]
    fn ode_matches_closed_form() {
        // physical units: s_inf = 1e-6 cm, M = 1e-15 g gives τ_s = M s²/ħ
        let m = 1e-15;
        let s: f64 = 1e-6;
        let tau = m * s * s / CGS.hbar;
        let a = 1e-5;
        // λN²f from s⁴ = a²ħ/(2 N² M λ f)
        let lam_eff = a * a * CGS.hbar / (2.0 * m * s.powi(4));
        let start = ComplexVariance::new(3.0 * s * s, -0.5 * s * s).unwrap();
        let grid: Vec<f64> = (0..50).map(|k| 10.0 * tau * k as f64 / 49.0).collect();
        let num =
            sigma_ode_integrate(start, m, lam_eff, a, &grid, OdeTolerance::default()).unwrap();
        for (&t, v) in grid.iter().zip(&num) {
            let exact = sigma_closed_form(start, s, tau, t).unwrap();
            assert!(rel(v.0, exact.0) < 1e-8, "t={t}");
            assert!(v.0.re > 0.0);
        }
    }

    #[test]
    fn free_spreading() {
        let m = 1e-20;
        let start = ComplexVariance::new(1e-10, 0.0).unwrap();
        let grid = [0.0, 1.0, 5.0];
        let num = sigma_ode_integrate(start, m, 0.0, 1e-5, &grid, OdeTolerance::default()).unwrap();
        for (&t, v) in grid.iter().zip(&num) {
            let exact = start.0 + Complex64::new(0.0, CGS.hbar * t / (2.0 * m));
            assert!(rel(v.0, exact) < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_grid() {
        let start = ComplexVariance::new(1.0, 0.0).unwrap();
        assert!(
            sigma_ode_integrate(start, 1.0, 1.0, 1.0, &[1.0, 0.5], OdeTolerance::default())
                .is_err()
        );
        assert!(ComplexVariance::new(-1.0, 0.0).is_err());
    }
}
