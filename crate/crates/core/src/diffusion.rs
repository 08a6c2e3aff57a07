//! CSL diffusion observables: rms translation and rotation, CSL plus
//! Brownian diffusion, the equilibrium wavepacket, energy gain, and the
//! "unobserved" standard-quantum baselines.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::body::{Body, Shape};
use crate::constants::{CslParams, CGS};
use crate::environment::Environment;
use crate::error::{non_negative, Error, Result};
use crate::factors::f_sphere;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mechanism {
    Csl,
    Brownian,
    Combined,
    QmBaseline,
}

impl Mechanism {
    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Csl => "csl",
            Mechanism::Brownian => "brownian",
            Mechanism::Combined => "combined",
            Mechanism::QmBaseline => "qm-baseline",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionMode {
    Translation,
    Rotation,
}

impl MotionMode {
    pub fn name(self) -> &'static str {
        match self {
            MotionMode::Translation => "translation",
            MotionMode::Rotation => "rotation",
        }
    }
}

/// rms displacement (cm) or angle (rad) sampled in time.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionCurve {
    pub mechanism: Mechanism,
    pub mode: MotionMode,
    /// (t in s, rms)
    pub samples: Vec<(f64, f64)>,
    pub csl: CslParams,
    pub body: Option<Body>,
    pub env: Option<Environment>,
}

impl DiffusionCurve {
    pub fn sample<F: FnMut(f64) -> Result<f64>>(
        mechanism: Mechanism,
        mode: MotionMode,
        csl: CslParams,
        times: &[f64],
        mut rms: F,
    ) -> Result<Self> {
        let samples = times
            .iter()
            .map(|&t| rms(t).map(|r| (t, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiffusionCurve {
            mechanism,
            mode,
            samples,
            csl,
            body: None,
            env: None,
        })
    }
}

fn check_fraction(name: &'static str, f: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&f) {
        Ok(f)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must lie in [0, 1]",
        })
    }
}

/// λħ²/(m²a²), the momentum-diffusion rate per unit f (g² cm²/s³ per g²).
fn kick_rate(csl: &CslParams) -> f64 {
    let u = CGS.hbar / (CGS.m_nucleon * csl.a);
    csl.lambda * u * u
}

/// ΔQ = [initial + λħ²f t³/(6m²a²)]^{1/2}
pub fn csl_rms_translation(csl: &CslParams, f: f64, t: f64, initial_term: f64) -> Result<f64> {
    check_fraction("f", f)?;
    non_negative("t", t)?;
    non_negative("initial_term", initial_term)?;
    Ok((initial_term + kick_rate(csl) * f * t.powi(3) / 6.0).sqrt())
}

/// Δθ = [initial + λ(ħ/ma²)² f_ROT t³/12]^{1/2}
pub fn csl_rms_rotation(csl: &CslParams, f_rot: f64, t: f64, initial_term: f64) -> Result<f64> {
    non_negative("f_rot", f_rot)?;
    non_negative("t", t)?;
    non_negative("initial_term", initial_term)?;
    Ok((initial_term + angular_rate(csl) * f_rot * t.powi(3) / 12.0).sqrt())
}

fn angular_rate(csl: &CslParams) -> f64 {
    let w = CGS.hbar / (CGS.m_nucleon * csl.a * csl.a);
    csl.lambda * w * w
}

/// Time for the CSL rms angle (from rest) to reach `angle`.
pub fn time_to_angle(csl: &CslParams, f_rot: f64, angle: f64) -> Result<f64> {
    crate::error::positive("f_rot", f_rot)?;
    non_negative("angle", angle)?;
    Ok((12.0 * angle * angle / (angular_rate(csl) * f_rot)).cbrt())
}

/// Time for the CSL rms displacement (from rest) to reach `distance`.
pub fn time_to_distance(csl: &CslParams, f: f64, distance: f64) -> Result<f64> {
    crate::error::positive("f", f)?;
    non_negative("distance", distance)?;
    Ok((6.0 * distance * distance / (kick_rate(csl) * f)).cbrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Short,
    Long,
    Auto,
}

/// Result of [`combined_rms`]: the total and the rms each mechanism would
/// give alone under the same asymptotic law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedRms {
    pub total: f64,
    pub brownian: f64,
    pub csl: f64,
    /// Short or Long; never Auto.
    pub regime: Regime,
    pub tau: f64,
}

fn combined_parts(
    xi: f64,
    mass: f64,
    temperature: f64,
    csl: &CslParams,
    f: f64,
    t: f64,
    regime: Regime,
) -> CombinedRms {
    let kt = CGS.k_boltzmann * temperature;
    let k = kick_rate(csl) * f;
    let (b2, c2) = match regime {
        Regime::Long => {
            let tau = mass / xi;
            (2.0 * kt / xi * t, tau * tau * k / 2.0 * t)
        }
        _ => (
            2.0 * kt * xi / (3.0 * mass * mass) * t.powi(3),
            k / 6.0 * t.powi(3),
        ),
    };
    CombinedRms {
        total: (b2 + c2).sqrt(),
        brownian: b2.sqrt(),
        csl: c2.sqrt(),
        regime,
        tau: mass / xi,
    }
}

/// CSL and Brownian diffusion together, in the long-time (t ≫ M/ξ) or
/// short-time (t ≪ M/ξ) limit. `Auto` picks by comparing t with τ = M/ξ and
/// refuses t ∈ [0.1τ, 10τ].
pub fn combined_rms(
    xi: f64,
    body: &Body,
    env: &Environment,
    csl: &CslParams,
    f: f64,
    t: f64,
    regime: Regime,
) -> Result<CombinedRms> {
    non_negative("xi", xi)?;
    check_fraction("f", f)?;
    non_negative("t", t)?;
    let m = body.mass();
    let temp = env.temperature;
    let regime = match regime {
        Regime::Auto => {
            let tau = m / xi;
            if t < 0.1 * tau {
                Regime::Short
            } else if t > 10.0 * tau {
                Regime::Long
            } else {
                return Err(Error::Crossover {
                    t,
                    tau,
                    short: combined_parts(xi, m, temp, csl, f, t, Regime::Short).total,
                    long: combined_parts(xi, m, temp, csl, f, t, Regime::Long).total,
                });
            }
        }
        r => r,
    };
    if regime == Regime::Long && xi == 0.0 {
        return Err(Error::InvalidParameter {
            name: "xi",
            reason: "long-time diffusion needs nonzero drag",
        });
    }
    Ok(combined_parts(xi, m, temp, csl, f, t, regime))
}

/// ΔQ_QM = ħt/(4MR): a sphere localized to about 2R, then left unobserved.
pub fn qm_baseline_translation(body: &Body, t: f64) -> Result<f64> {
    non_negative("t", t)?;
    match body.shape {
        Shape::Sphere { radius } => Ok(CGS.hbar * t / (body.mass() * 4.0 * radius)),
        _ => Err(Error::Unsupported(
            "translation baseline is defined for a sphere",
        )),
    }
}

/// Δθ_QM = 8ħt/(π² D b L⁴)
pub fn qm_baseline_rotation(body: &Body, t: f64) -> Result<f64> {
    non_negative("t", t)?;
    match body.shape {
        Shape::Disc { radius, thickness } => {
            Ok(8.0 * CGS.hbar * t / (PI * PI * body.density * thickness * radius.powi(4)))
        }
        _ => Err(Error::Unsupported(
            "rotation baseline is defined for a disc",
        )),
    }
}

/// Stationary centre-of-mass packet width and the time to reach it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketEquilibrium {
    pub s_inf: f64,
    pub tau_s: f64,
    /// s_inf < a/3, needed for the small-width expansion.
    pub width_ok: bool,
    /// N ≥ 3e7.
    pub nucleons_ok: bool,
}

impl WavepacketEquilibrium {
    /// From a known width and time, with both validity flags set.
    pub fn new(s_inf: f64, tau_s: f64) -> Result<Self> {
        Ok(WavepacketEquilibrium {
            s_inf: crate::error::positive("s_inf", s_inf)?,
            tau_s: crate::error::positive("tau_s", tau_s)?,
            width_ok: true,
            nucleons_ok: true,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.width_ok && self.nucleons_ok
    }
}

/// s⁴ = a²ħ/(2N²Mλf), τ_s = M s²/ħ.
pub fn equilibrium_width(csl: &CslParams, body: &Body, f: f64) -> Result<WavepacketEquilibrium> {
    crate::error::positive("f", f)?;
    check_fraction("f", f)?;
    let n = body.nucleon_count();
    let m = body.mass();
    let s2 = csl.a / n * (CGS.hbar / (2.0 * m * csl.lambda * f)).sqrt();
    let s = s2.sqrt();
    Ok(WavepacketEquilibrium {
        s_inf: s,
        tau_s: m * s2 / CGS.hbar,
        width_ok: s < csl.a / 3.0,
        nucleons_ok: n >= 3e7,
    })
}

/// Width growth after equilibrium: s²[1 + t/τ + t²/2τ² + t³/12τ³].
pub fn equilibrium_series_rms(eq: &WavepacketEquilibrium, t: f64) -> Result<f64> {
    non_negative("t", t)?;
    let u = t / eq.tau_s;
    Ok(eq.s_inf * (1.0 + u + u * u / 2.0 + u * u * u / 12.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRates {
    /// erg/s
    pub total: f64,
    /// erg/s, summed over three axes
    pub cm_part: f64,
}

/// dE/dt = 3λħ²N²/(4Ma²) in total, times f for the centre of mass.
pub fn energy_gain_rates(csl: &CslParams, body: &Body, f: f64) -> Result<EnergyRates> {
    check_fraction("f", f)?;
    let n = body.nucleon_count();
    let total =
        3.0 * csl.lambda * CGS.hbar * CGS.hbar * n * n / (4.0 * body.mass() * csl.a * csl.a);
    Ok(EnergyRates {
        total,
        cm_part: total * f,
    })
}

pub const TABLE1_RADII: [f64; 5] = [1e-6, 1e-5, 1e-4, 1e-2, 1.0];
pub const TABLE1_TIMES: [f64; 3] = [10.0, 1e3, 1e5];

/// ΔQ (cm) for the sphere radii × times grid, rows by radius.
pub fn table1(csl: &CslParams) -> Result<[[f64; 3]; 5]> {
    let mut out = [[0.0; 3]; 5];
    for (i, &r) in TABLE1_RADII.iter().enumerate() {
        let f = f_sphere(r / csl.a)?.value;
        for (j, &t) in TABLE1_TIMES.iter().enumerate() {
            out[i][j] = csl_rms_translation(csl, f, t, 0.0)?;
        }
    }
    Ok(out)
}

/// (s_inf, τ_s) for each radius in [`TABLE1_RADII`].
pub fn table2(csl: &CslParams, density: f64) -> Result<[WavepacketEquilibrium; 5]> {
    let mut out = [WavepacketEquilibrium::new(1.0, 1.0)?; 5];
    for (i, &r) in TABLE1_RADII.iter().enumerate() {
        let body = Body::sphere(r, density)?;
        out[i] = equilibrium_width(csl, &body, f_sphere(r / csl.a)?.value)?;
    }
    Ok(out)
}
