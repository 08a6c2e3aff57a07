//! Classical Brownian motion: Fokker–Planck moments, drag coefficients in
//! the viscous, molecular and radiation realms, and gas-collision statistics.

use core::f64::consts::PI;

use num_traits::Float;

use crate::body::{Body, Shape};
use crate::constants::CGS;
use crate::environment::Environment;
use crate::error::{non_negative, positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realm {
    Viscous,
    SlipCorrected,
    Molecular,
    Radiation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Translation,
    Rotation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Sphere,
    /// Disc moving perpendicular to its face.
    DiscPerp,
    /// Disc moving along its face.
    DiscEdge,
    /// Disc turning about a diameter.
    DiscRot,
    /// Flat reflector moving perpendicular to itself.
    Mirror,
}

/// ξ in g/s for translation, g cm²/s for rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragCoefficient {
    pub xi: f64,
    pub realm: Realm,
    pub mode: Mode,
    pub orientation: Orientation,
}

impl DragCoefficient {
    fn translation(xi: f64, realm: Realm, orientation: Orientation) -> Self {
        DragCoefficient {
            xi,
            realm,
            mode: Mode::Translation,
            orientation,
        }
    }

    /// Damping time M/ξ (or I/ξ for rotation).
    pub fn damping_time(&self, body: &Body) -> f64 {
        match self.mode {
            Mode::Translation => body.mass() / self.xi,
            Mode::Rotation => body.moment_of_inertia() / self.xi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrownianMoments {
    pub t: f64,
    pub mean_v: f64,
    pub var_v: f64,
    pub var_x: f64,
    pub tau: f64,
    pub beta: f64,
}

/// Velocity and position moments of the Ornstein–Uhlenbeck process with
/// damping time τ and diffusion constant β, starting from x = 0, v = v0.
pub fn fp_moments(tau: f64, beta: f64, v0: f64, t: f64) -> Result<BrownianMoments> {
    positive("tau", tau)?;
    non_negative("beta", beta)?;
    non_negative("t", t)?;
    let u = t / tau;
    let e = -(-u).exp_m1();
    let bracket = if u < 1e-3 {
        u * u * u * (1.0 / 3.0 - u / 4.0 + 7.0 * u * u / 60.0)
    } else {
        u - e - 0.5 * e * e
    };
    Ok(BrownianMoments {
        t,
        mean_v: v0 * (-u).exp(),
        var_v: beta / tau * -(-2.0 * u).exp_m1(),
        var_x: 2.0 * beta * tau * bracket,
        tau,
        beta,
    })
}

/// β = kTτ/M, which makes the stationary velocity variance kT/M.
pub fn equipartition_beta(temperature: f64, tau: f64, mass: f64) -> f64 {
    CGS.k_boltzmann * temperature * tau / mass
}

/// 6πηR
pub fn xi_stokes(radius: f64, eta: f64) -> Result<DragCoefficient> {
    let xi = 6.0 * PI * positive("eta", eta)? * positive("R", radius)?;
    Ok(DragCoefficient::translation(
        xi,
        Realm::Viscous,
        Orientation::Sphere,
    ))
}

/// Coefficients of the Millikan slip correction
/// 1 + (l_m/R)[α + β_c e^{−γR/l_m}].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlipParams {
    pub alpha: f64,
    pub beta_c: f64,
    pub gamma: f64,
}

impl SlipParams {
    /// Measured values.
    pub const MEASURED: SlipParams = SlipParams {
        alpha: 1.0,
        beta_c: 0.6,
        gamma: 1.0,
    };
    /// Specular-reflection theory; γ is irrelevant when β_c = 0.
    pub const SPECULAR: SlipParams = SlipParams {
        alpha: 1.5,
        beta_c: 0.0,
        gamma: 1.0,
    };
}

impl Default for SlipParams {
    fn default() -> Self {
        Self::MEASURED
    }
}

pub fn xi_slip_corrected(
    radius: f64,
    eta: f64,
    mean_free_path: f64,
    slip: SlipParams,
) -> Result<DragCoefficient> {
    let stokes = xi_stokes(radius, eta)?.xi;
    let lm = non_negative("l_m", mean_free_path)?;
    non_negative("alpha", slip.alpha)?;
    non_negative("beta_c", slip.beta_c)?;
    non_negative("gamma", slip.gamma)?;
    let correction = if lm == 0.0 {
        1.0
    } else {
        1.0 + lm / radius * (slip.alpha + slip.beta_c * (-slip.gamma * radius / lm).exp())
    };
    Ok(DragCoefficient::translation(
        stokes / correction,
        Realm::SlipCorrected,
        Orientation::Sphere,
    ))
}

/// Free-molecular drag with specular reflection.
pub fn xi_molecular(
    body: &Body,
    env: &Environment,
    orientation: Orientation,
) -> Result<DragCoefficient> {
    let ns = env.number_density()? * env.thermal_momentum();
    let xi = match (body.shape, orientation) {
        (Shape::Sphere { radius }, Orientation::Sphere) => 8.0 / 3.0 * ns * radius * radius,
        (Shape::Disc { radius, .. }, Orientation::DiscPerp) => 4.0 * ns * radius * radius,
        (Shape::Disc { radius, thickness }, Orientation::DiscEdge) => 2.0 * ns * radius * thickness,
        _ => {
            return Err(Error::Unsupported(
                "molecular translation drag needs sphere/sphere or disc/disc-perp/disc-edge",
            ))
        }
    };
    Ok(DragCoefficient::translation(
        xi,
        Realm::Molecular,
        orientation,
    ))
}

/// Viscous drag on a thin disc (oblate-spheroid limit).
pub fn xi_viscous_disc(radius: f64, eta: f64, orientation: Orientation) -> Result<DragCoefficient> {
    let (l, eta) = (positive("L", radius)?, positive("eta", eta)?);
    let xi = match orientation {
        Orientation::DiscPerp => 16.0 * eta * l,
        Orientation::DiscEdge => 32.0 / 3.0 * eta * l,
        _ => {
            return Err(Error::Unsupported(
                "viscous disc drag needs disc-perp or disc-edge",
            ))
        }
    };
    Ok(DragCoefficient::translation(
        xi,
        Realm::Viscous,
        orientation,
    ))
}

/// Rotational drag: viscous torque on a sphere, or molecular torque on a
/// disc turning about a diameter.
pub fn xi_rotational(body: &Body, env: &Environment, realm: Realm) -> Result<DragCoefficient> {
    let (xi, orientation) = match (body.shape, realm) {
        (Shape::Sphere { radius }, Realm::Viscous) => (
            8.0 * PI * env.viscosity()? * radius.powi(3),
            Orientation::Sphere,
        ),
        (Shape::Disc { radius, .. }, Realm::Molecular) => {
            let ns = env.number_density()? * env.thermal_momentum();
            (4.0 / PI * ns * radius.powi(4), Orientation::DiscRot)
        }
        (Shape::Sphere { .. }, Realm::Molecular) => {
            return Err(Error::Unsupported(
                "specular molecular collisions exert no torque on a sphere",
            ))
        }
        _ => {
            return Err(Error::Unsupported(
                "rotational drag is available for sphere/viscous and disc/molecular",
            ))
        }
    };
    Ok(DragCoefficient {
        xi,
        realm,
        mode: Mode::Rotation,
        orientation,
    })
}

fn thermal_wavenumber(temperature: f64) -> f64 {
    CGS.k_boltzmann * temperature / (CGS.hbar * CGS.c)
}

/// Radiation drag on a perfectly polarizable (ε → ∞) sphere:
/// [4(2π)⁷/135] ħ R⁶ (kT/ħc)⁸.
pub fn xi_radiation(radius: f64, temperature: f64) -> Result<DragCoefficient> {
    let (r, t) = (positive("R", radius)?, positive("T", temperature)?);
    let xi =
        4.0 * (2.0 * PI).powi(7) / 135.0 * CGS.hbar * r.powi(6) * thermal_wavenumber(t).powi(8);
    Ok(DragCoefficient::translation(
        xi,
        Realm::Radiation,
        Orientation::Sphere,
    ))
}

/// Radiation drag on a perfect mirror of area A: (2π²/15) ħ (kT/ħc)⁴ A.
pub fn xi_mirror(area: f64, temperature: f64) -> Result<DragCoefficient> {
    let (a, t) = (positive("area", area)?, positive("T", temperature)?);
    let xi = 2.0 * PI * PI / 15.0 * CGS.hbar * thermal_wavenumber(t).powi(4) * a;
    Ok(DragCoefficient::translation(
        xi,
        Realm::Radiation,
        Orientation::Mirror,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralTarget {
    /// Per unit mirror area.
    MirrorPerArea,
    DielectricSphere {
        radius: f64,
    },
}

/// dξ/dν for a mirror (per unit area) or an ε → ∞ dielectric sphere.
pub fn spectral_xi(nu: f64, temperature: f64, target: SpectralTarget) -> Result<f64> {
    let (nu, t) = (positive("nu", nu)?, positive("T", temperature)?);
    let h = CGS.h();
    let x = h * nu / (CGS.k_boltzmann * t);
    let em1 = x.exp_m1();
    // e^x/(e^x − 1)², zero once e^x overflows
    let bose = if em1.is_finite() {
        (em1 + 1.0) / (em1 * em1)
    } else {
        0.0
    };
    let k = nu / CGS.c;
    Ok(match target {
        SpectralTarget::MirrorPerArea => 4.0 * PI * k.powi(3) * x * (h / CGS.c) * bose,
        SpectralTarget::DielectricSphere { radius } => {
            let r = positive("R", radius)?;
            (2.0 * PI).powi(4)
                * (8.0 * PI / 3.0).powi(2)
                * k.powi(7)
                * x
                * (h / CGS.c)
                * r.powi(6)
                * bose
        }
    })
}

/// Individual molecule impacts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionStats {
    /// Flux per unit area on one side, nū/4.
    pub flux: f64,
    /// Mean time between impacts.
    pub tau_c: f64,
    /// Speed kick m_g ū/M (sphere).
    pub delta_v: f64,
    /// Angular-velocity kick m_g ū L/I (disc); zero for a sphere.
    pub omega_kick: f64,
}

/// Impact statistics. Disc impacts count both faces and ignore the edge.
pub fn collision_stats(body: &Body, env: &Environment) -> Result<CollisionStats> {
    let flux = env.molecular_flux()?;
    let u = env.mean_speed();
    let mg = env.gas_molecular_mass;
    let stats = match body.shape {
        Shape::Sphere { radius } => CollisionStats {
            flux,
            tau_c: 1.0 / (flux * 4.0 * PI * radius * radius),
            delta_v: u * mg / body.mass(),
            omega_kick: 0.0,
        },
        Shape::Disc { radius, .. } => CollisionStats {
            flux,
            tau_c: 1.0 / (2.0 * flux * PI * radius * radius),
            delta_v: u * mg / body.mass(),
            omega_kick: mg * u * radius / body.moment_of_inertia(),
        },
    };
    Ok(stats)
}

/// Mean free path compared with the body size for a stated realm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealmCheck {
    pub mean_free_path: f64,
    pub body_size: f64,
    /// l_m < size/10 for viscous, l_m > 10·size for molecular.
    pub holds: bool,
}

pub fn realm_check(body: &Body, env: &Environment, realm: Realm) -> Result<RealmCheck> {
    let lm = env.mean_free_path()?;
    let size = match body.shape {
        Shape::Sphere { radius } => radius,
        Shape::Disc { radius, .. } => radius,
    };
    let holds = match realm {
        Realm::Viscous => lm < 0.1 * size,
        Realm::Molecular => lm > 10.0 * size,
        Realm::SlipCorrected | Realm::Radiation => true,
    };
    Ok(RealmCheck {
        mean_free_path: lm,
        body_size: size,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, Tolerance};
    use crate::units::{DYN_PER_TORR, TORR_PER_PT};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn moments_at_zero() {
        let m = fp_moments(2.0, 3.0, 5.0, 0.0).unwrap();
        assert_eq!((m.var_x, m.var_v, m.mean_v), (0.0, 0.0, 5.0));
    }

    #[test]
    fn moments_asymptotes() {
        let (tau, beta) = (2.0, 3.0);
        let long = fp_moments(tau, beta, 0.0, 100.0 * tau).unwrap();
        assert!(rel(long.var_x, 2.0 * beta * long.t) < 0.02);
        let t = 0.01 * tau;
        let short = fp_moments(tau, beta, 0.0, t).unwrap();
        assert!(rel(short.var_x, 2.0 * beta / (3.0 * tau * tau) * t.powi(3)) < 0.01);
        assert!(fp_moments(0.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn series_branch_is_continuous() {
        let a = fp_moments(1.0, 1.0, 0.0, 0.999_999e-3).unwrap().var_x;
        let b = fp_moments(1.0, 1.0, 0.0, 1.000_001e-3).unwrap().var_x;
        assert!(rel(a, b) < 1e-5);
    }

    #[test]
    fn equipartition() {
        let (t, m, tau) = (300.0, 1e-14, 5.0);
        let beta = equipartition_beta(t, tau, m);
        let v = fp_moments(tau, beta, 0.0, 1e3 * tau).unwrap().var_v;
        assert!(rel(v, CGS.k_boltzmann * t / m) < 1e-14);
    }

    #[test]
    fn stokes_values() {
        assert!(rel(xi_stokes(1e-5, 2e-4).unwrap().xi, 3.7699e-8) < 1e-4);
        assert!(xi_stokes(1e-5, 0.0).is_err());
        assert_eq!(
            xi_stokes(2e-5, 2e-4).unwrap().xi,
            2.0 * xi_stokes(1e-5, 2e-4).unwrap().xi
        );
    }

    #[test]
    fn slip_limits() {
        let st = xi_stokes(1e-5, 2e-4).unwrap().xi;
        assert_eq!(
            xi_slip_corrected(1e-5, 2e-4, 0.0, SlipParams::MEASURED)
                .unwrap()
                .xi,
            st
        );
        let x = xi_slip_corrected(1e-5, 2e-4, 0.6e-5, SlipParams::SPECULAR)
            .unwrap()
            .xi;
        assert!(rel(x / st, 1.0 / 1.9) < 1e-12);
        assert!((x / st - 0.53).abs() < 0.005);
    }

    #[test]
    fn slip_reaches_molecular_form() {
        // η = (1/3) n m_g ū l_m, l_m ≫ R
        let env = Environment::gas(293.15, 1e3).unwrap();
        let (n, mg, u) = (
            env.number_density().unwrap(),
            env.gas_molecular_mass,
            env.mean_speed(),
        );
        let (r, lm) = (1e-5, 1e3);
        let eta = n * mg * u * lm / 3.0;
        let x = xi_slip_corrected(r, eta, lm, SlipParams::SPECULAR)
            .unwrap()
            .xi;
        assert!(rel(x, 4.0 * PI / 3.0 * n * mg * u * r * r) < 1e-7);
    }

    #[test]
    fn molecular_sphere_identity() {
        let env = Environment::gas(293.0, 1.01325e6).unwrap();
        let b = Body::sphere(1e-5, 1.0).unwrap();
        let xi = xi_molecular(&b, &env, Orientation::Sphere).unwrap().xi;
        let alt = 4.0 * PI / 3.0
            * env.number_density().unwrap()
            * env.gas_molecular_mass
            * env.mean_speed()
            * 1e-10;
        assert!(rel(xi, alt) < 1e-3);
    }

    #[test]
    fn disc_edge_to_perp_ratio() {
        let env = Environment::gas(293.0, 1.0).unwrap();
        let d = Body::disc(2e-5, 0.5e-5, 1.0).unwrap();
        let e = xi_molecular(&d, &env, Orientation::DiscEdge).unwrap().xi;
        let p = xi_molecular(&d, &env, Orientation::DiscPerp).unwrap().xi;
        assert!(rel(e / p, 0.5e-5 / 4e-5) < 1e-14);
        assert!(xi_molecular(&d, &env, Orientation::Sphere).is_err());
        assert!(xi_molecular(&d, &env, Orientation::DiscRot).is_err());
    }

    #[test]
    fn sphere_damping_time_at_one_picotorr() {
        // Evaluates to 1.39e8 s; the quoted 2e9 s does not follow from the
        // drag formula.
        let env = Environment::gas(293.15, DYN_PER_TORR * TORR_PER_PT).unwrap();
        let b = Body::sphere(1e-5, 1.0).unwrap();
        let tau = xi_molecular(&b, &env, Orientation::Sphere)
            .unwrap()
            .damping_time(&b);
        assert!(rel(tau, 1.39e8) < 0.01);
    }

    #[test]
    fn viscous_disc() {
        let p = xi_viscous_disc(1e-5, 2e-4, Orientation::DiscPerp)
            .unwrap()
            .xi;
        let e = xi_viscous_disc(1e-5, 2e-4, Orientation::DiscEdge)
            .unwrap()
            .xi;
        assert!(rel(p, 3.2e-8) < 1e-12);
        assert!(rel(p / e, 1.5) < 1e-14);
        assert!(
            rel(
                xi_viscous_disc(2e-5, 2e-4, Orientation::DiscPerp)
                    .unwrap()
                    .xi,
                2.0 * p
            ) < 1e-14
        );
    }

    #[test]
    fn rotational_drag() {
        let air = Environment::gas(293.15, 1e6)
            .unwrap()
            .with_viscosity(2e-4)
            .unwrap();
        let s = Body::sphere(1e-5, 1.0).unwrap();
        assert!(
            rel(
                xi_rotational(&s, &air, Realm::Viscous).unwrap().xi,
                5.0265e-18
            ) < 1e-4
        );
        assert!(matches!(
            xi_rotational(&s, &air, Realm::Molecular),
            Err(Error::Unsupported(_))
        ));

        let vac = Environment::gas(293.15, DYN_PER_TORR * TORR_PER_PT).unwrap();
        let d = Body::disc(2e-5, 1e-5, 1.0).unwrap();
        let tau_rot = xi_rotational(&d, &vac, Realm::Molecular)
            .unwrap()
            .damping_time(&d);
        // 5.45e7 s for a thin disc, times 1 + b²/3L² from the disc's inertia
        assert!(rel(tau_rot, 5.45e7 * (1.0 + 1.0 / 12.0)) < 0.01);
    }

    #[test]
    fn radiation_drag_scaling_and_value() {
        let x = xi_radiation(1e-5, CGS.room_temperature).unwrap().xi;
        assert!(x / 4e-29 < 2.5 && 4e-29 / x < 2.5);
        let x2 = xi_radiation(1e-5, 2.0 * CGS.room_temperature).unwrap().xi;
        assert!(rel(x2 / x, 256.0) < 1e-12);
        let m = xi_mirror(1.0, 4.0).unwrap().xi;
        assert!(rel(xi_mirror(2.0, 4.0).unwrap().xi, 2.0 * m) < 1e-14);
        assert!(rel(xi_mirror(1.0, 8.0).unwrap().xi, 16.0 * m) < 1e-12);
    }

    fn integrate_spectrum(t: f64, target: SpectralTarget) -> f64 {
        let nu_t = CGS.k_boltzmann * t / CGS.h();
        integrate(
            |x| spectral_xi(x * nu_t, t, target).unwrap() * nu_t,
            1e-12,
            200.0,
            Tolerance::rel(1e-10),
        )
        .unwrap()
        .value
    }

    #[test]
    fn spectra_integrate_to_totals() {
        let t = 300.0;
        let sphere = integrate_spectrum(t, SpectralTarget::DielectricSphere { radius: 1e-5 });
        assert!(rel(sphere, xi_radiation(1e-5, t).unwrap().xi) < 1e-6);
        let mirror = integrate_spectrum(t, SpectralTarget::MirrorPerArea);
        assert!(rel(mirror, xi_mirror(1.0, t).unwrap().xi) < 1e-6);
    }

    #[test]
    fn spectrum_limits() {
        let s =
            |nu, r| spectral_xi(nu, 300.0, SpectralTarget::DielectricSphere { radius: r }).unwrap();
        assert!(s(1.0, 1e-5) < 1e-100);
        assert!(rel(s(1e13, 2e-5), 64.0 * s(1e13, 1e-5)) < 1e-12);
        assert_eq!(s(1e20, 1e-5), 0.0);
    }

    #[test]
    fn collisions_in_cold_vacuum() {
        let env = Environment::gas(4.2, 5e-17 * DYN_PER_TORR).unwrap();
        let d = Body::disc(2e-5, 0.5e-5, 1.0).unwrap();
        let c = collision_stats(&d, &env).unwrap();
        assert!(rel(c.tau_c / 60.0, 40.9) < 0.01);
        assert!(rel(c.flux, 1.5e5) < 0.1);
        assert!(rel(c.omega_kick, 8.17) < 0.01);
        let s = Body::sphere(1e-5, 1.0).unwrap();
        assert!(rel(collision_stats(&s, &env).unwrap().tau_c / 60.0, 81.9) < 0.01);
    }

    #[test]
    fn realm_checks() {
        let air = Environment::gas(293.15, 1.01325e6)
            .unwrap()
            .with_viscosity(1.8e-4)
            .unwrap();
        let big = Body::sphere(1e-3, 1.0).unwrap();
        assert!(realm_check(&big, &air, Realm::Viscous).unwrap().holds);
        assert!(!realm_check(&big, &air, Realm::Molecular).unwrap().holds);
    }

    proptest! {
        #[test]
        fn drag_linear_in_density(p in 1e-12f64..1e6, r in 1e-6f64..1e-2) {
            let b = Body::sphere(r, 1.0).unwrap();
            let e1 = Environment::gas(300.0, p).unwrap();
            let e2 = Environment::gas(300.0, 2.0 * p).unwrap();
            let x1 = xi_molecular(&b, &e1, Orientation::Sphere).unwrap().xi;
            let x2 = xi_molecular(&b, &e2, Orientation::Sphere).unwrap().xi;
            prop_assert!(x1 >= 0.0);
            prop_assert!((x2 / x1 - 2.0).abs() < 1e-12);
        }

        #[test]
        fn var_x_bounded_by_asymptotes(u in 1e-6f64..1e3) {
            let m = fp_moments(1.0, 1.0, 0.0, u).unwrap();
            prop_assert!(m.var_x >= 0.0);
            prop_assert!(m.var_x <= 2.0 * u * (1.0 + 1e-12));
            prop_assert!(m.var_x <= 2.0 / 3.0 * u.powi(3) * (1.0 + 1e-12));
        }
    }
}
