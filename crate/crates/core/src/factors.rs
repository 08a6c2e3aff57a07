//! Dimensionless geometric collapse factors.
//!
//! `f` scales the CSL momentum-diffusion rate of a body translating along an
//! axis, `f_ROT` that of a disc turning about a diameter. Lengths enter as
//! x = R/a for spheres and α = L/2a, β = b/2a for discs.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::error::{positive, Result};
use crate::quad::{integrate, integrate_2d, Estimate, Tolerance};
use crate::special::{erf, ie0, ie1};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorResult {
    pub value: f64,
    pub method: Method,
    /// Absolute; zero for closed forms.
    pub est_error: f64,
}

impl FactorResult {
    fn analytic(value: f64) -> Self {
        FactorResult {
            value,
            method: Method::Analytic,
            est_error: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscAspect {
    /// L/2a
    pub alpha: f64,
    /// b/2a
    pub beta: f64,
}

impl DiscAspect {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Ok(DiscAspect {
            alpha: positive("alpha", alpha)?,
            beta: positive("beta", beta)?,
        })
    }

    pub fn from_disc(radius: f64, thickness: f64, a: f64) -> Result<Self> {
        let a = positive("a", a)?;
        Self::new(radius / (2.0 * a), thickness / (2.0 * a))
    }
}

const REL_TOL: f64 = 1e-8;

/// Sphere of radius R = x·a.
pub fn f_sphere(x: f64) -> Result<FactorResult> {
    let x = positive("x", x)?;
    let y = x * x;
    // The bracket cancels to O(y²) from O(1/y) terms, so the closed form
    // loses digits as 1/x⁴; below x = 1 sum its Taylor series instead:
    // f = 6 Σ_{k≥2} (−1)ᵏ (k−1)/(k+1)! y^{k−2}.
    let value = if x < 1.0 {
        let (mut sum, mut term) = (0.0, 1.0 / 6.0);
        for k in 2..40 {
            sum += (k - 1) as f64 * term;
            term *= -y / (k + 2) as f64;
            if term.abs() < 1e-18 {
                break;
            }
        }
        6.0 * sum
    } else {
        let iy = 1.0 / y;
        6.0 * iy * iy * (1.0 - 2.0 * iy + (1.0 + 2.0 * iy) * (-y).exp())
    };
    Ok(FactorResult::analytic(value))
}

/// (1 − e^{−β²})/β²
fn thickness_factor(beta: f64) -> f64 {
    -(-beta * beta).exp_m1() / (beta * beta)
}

fn quadrature(value: f64, error: f64) -> FactorResult {
    FactorResult {
        value,
        method: Method::Quadrature,
        est_error: error,
    }
}

fn square_2d<F: Fn(f64, f64) -> f64>(f: F, hi: f64) -> Result<Estimate> {
    integrate_2d(f, 0.0, hi, |_| 0.0, |_| hi, Tolerance::rel(REL_TOL))
}

/// Disc translating perpendicular to its face.
pub fn f_disc_perp(aspect: DiscAspect) -> Result<FactorResult> {
    let DiscAspect { alpha, beta } = aspect;
    // x x' I₀(2xx') e^{−(x²+x'²)}
    let e = square_2d(
        |x, xp| x * xp * ie0(2.0 * x * xp) * (-(x - xp) * (x - xp)).exp(),
        alpha,
    )?;
    let scale = 4.0 / alpha.powi(4) * thickness_factor(beta);
    Ok(quadrature(scale * e.value, scale * e.error))
}

/// Disc translating along its face.
pub fn f_disc_edge(aspect: DiscAspect) -> Result<FactorResult> {
    let DiscAspect { alpha, beta } = aspect;
    let a2 = alpha * alpha;
    let b2 = beta * beta;
    let radial = ie1(2.0 * a2) / a2;
    let axial = if beta < 1e-4 {
        1.0 - b2 / 6.0
    } else {
        (beta * PI.sqrt() * erf(beta) - 1.0 + (-b2).exp()) / b2
    };
    Ok(FactorResult::analytic(radial * axial))
}

/// The pieces of the rotational factor: faces (`f1`), edges (`f2`) and the
/// face–edge cross term (`f3` ≤ 0), each with its quadrature error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotTerms {
    pub prefactor: f64,
    pub f1: Estimate,
    pub f2: Estimate,
    pub f3: Estimate,
}

impl RotTerms {
    pub fn value(&self) -> f64 {
        self.prefactor * (self.f1.value + self.f2.value + self.f3.value)
    }

    pub fn error(&self) -> f64 {
        self.prefactor * (self.f1.error + self.f2.error + self.f3.error)
    }
}

/// ∬₀^α r² r'² I₁(2rr') e^{−(r²+r'²)}
fn face_integral(alpha: f64) -> Result<Estimate> {
    square_2d(
        |r, rp| r * r * rp * rp * ie1(2.0 * r * rp) * (-(r - rp) * (r - rp)).exp(),
        alpha,
    )
}

pub fn f_rot_terms(aspect: DiscAspect) -> Result<RotTerms> {
    let DiscAspect { alpha, beta } = aspect;
    let h = 0.5 * beta;
    let outer = 4.0 / ((1.0 + beta * beta / (3.0 * alpha * alpha)) * beta * alpha.powi(4));

    let faces = face_integral(alpha)?;
    let shell = -(-beta * beta).exp_m1();
    let f1 = Estimate {
        value: shell * faces.value,
        error: shell * faces.error,
    };

    let edge_pair = integrate_2d(
        |y, yp| y * yp * (-(y - yp) * (y - yp)).exp(),
        -h,
        h,
        |_| -h,
        |_| h,
        Tolerance {
            abs: 1e-300,
            ..Tolerance::rel(REL_TOL)
        },
    )?;
    let edge = 0.5 * alpha * alpha * ie1(2.0 * alpha * alpha);
    let f2 = Estimate {
        value: edge * edge_pair.value,
        error: edge * edge_pair.error,
    };

    // ∫_{−β/2}^{β/2} y e^{−(β/2−y)²} dy in closed form
    let axial = h * 0.5 * PI.sqrt() * erf(beta) + 0.5 * (-beta * beta).exp_m1();
    let radial = integrate(
        |r| r * r * ie1(2.0 * alpha * r) * (-(alpha - r) * (alpha - r)).exp(),
        0.0,
        alpha,
        Tolerance::rel(REL_TOL),
    )?;
    let cross = -2.0 * alpha * axial;
    let f3 = Estimate {
        value: cross * radial.value,
        error: cross.abs() * radial.error,
    };

    Ok(RotTerms {
        prefactor: outer * outer,
        f1,
        f2,
        f3,
    })
}

/// Disc turning about a diameter. Thin discs (β < 0.05 and β < 0.05α) keep
/// only the face term, (2/α²)⁴ ∬₀^α r² r'² I₁(2rr') e^{−(r²+r'²)}, which
/// drops corrections of relative order β².
pub fn f_rot_disc(aspect: DiscAspect) -> Result<FactorResult> {
    let DiscAspect { alpha, beta } = aspect;
    if beta < 0.05 && beta < 0.05 * alpha {
        let scale = (2.0 / (alpha * alpha)).powi(4);
        let e = face_integral(alpha)?;
        return Ok(quadrature(scale * e.value, scale * e.error));
    }
    let t = f_rot_terms(aspect)?;
    Ok(quadrature(t.value().max(0.0), t.error()))
}

/// Small-body limit of `f_ROT`, ((S_yy − S_zz)/(S_yy + S_zz))² with S the
/// second moments across and along the rotation axis' perpendicular plane.
pub fn f_rot_small_body_limit(aspect: DiscAspect) -> f64 {
    let syy = aspect.alpha * aspect.alpha / 4.0;
    let szz = aspect.beta * aspect.beta / 12.0;
    let r = (syy - szz) / (syy + szz);
    r * r
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Row {
    pub alpha: f64,
    pub beta: f64,
    pub f_rot: f64,
    pub est_error: f64,
}

/// Per-β summary of how f_ROT varies along the α grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Diagnostics {
    pub beta: f64,
    /// Number of sign changes of the α-differences.
    pub direction_changes: usize,
    /// α of the smallest value on the grid.
    pub alpha_at_min: f64,
    pub min_f_rot: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Table {
    pub rows: Vec<Fig1Row>,
    pub diagnostics: Vec<Fig1Diagnostics>,
}

/// f_ROT on the grid `betas × alphas`, β-major.
pub fn fig1_dataset(alphas: &[f64], betas: &[f64]) -> Result<Fig1Table> {
    if alphas.is_empty() || betas.is_empty() {
        return Err(crate::Error::InvalidParameter {
            name: "grid",
            reason: "alpha and beta grids must be nonempty",
        });
    }
    let mut rows = Vec::with_capacity(alphas.len() * betas.len());
    let mut diagnostics = Vec::with_capacity(betas.len());
    for &beta in betas {
        let start = rows.len();
        for &alpha in alphas {
            let r = f_rot_disc(DiscAspect::new(alpha, beta)?)?;
            rows.push(Fig1Row {
                alpha,
                beta,
                f_rot: r.value,
                est_error: r.est_error,
            });
        }
        diagnostics.push(diagnose(beta, &rows[start..]));
    }
    Ok(Fig1Table { rows, diagnostics })
}

fn diagnose(beta: f64, rows: &[Fig1Row]) -> Fig1Diagnostics {
    let mut changes = 0;
    let mut last_sign = 0.0f64;
    for w in rows.windows(2) {
        let d = w[1].f_rot - w[0].f_rot;
        if d != 0.0 {
            let s = d.signum();
            if last_sign != 0.0 && s != last_sign {
                changes += 1;
            }
            last_sign = s;
        }
    }
    let min = rows
        .iter()
        .min_by(|a, b| a.f_rot.total_cmp(&b.f_rot))
        .expect("rows nonempty");
    Fig1Diagnostics {
        beta,
        direction_changes: changes,
        alpha_at_min: min.alpha,
        min_f_rot: min.f_rot,
    }
}
