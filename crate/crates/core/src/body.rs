use core::f64::consts::PI;

use crate::constants::CGS;
use crate::error::{positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Sphere {
        radius: f64,
    },
    /// Radius `radius` (L) and thickness `thickness` (b).
    Disc {
        radius: f64,
        thickness: f64,
    },
}

/// A homogeneous sphere or disc. Density in g/cm³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Body {
    pub shape: Shape,
    pub density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyDerived {
    pub volume: f64,
    pub mass: f64,
    pub nucleons: f64,
    pub inertia: f64,
}

impl Body {
    pub fn sphere(radius: f64, density: f64) -> Result<Self> {
        let b = Body {
            shape: Shape::Sphere {
                radius: positive("R", radius)?,
            },
            density: positive("density", density)?,
        };
        b.check_nucleons()
    }

    pub fn disc(radius: f64, thickness: f64, density: f64) -> Result<Self> {
        positive("L", radius)?;
        positive("b", thickness)?;
        if thickness > 2.0 * radius {
            return Err(Error::InvalidParameter {
                name: "b",
                reason: "disc thickness must not exceed its diameter 2L",
            });
        }
        let b = Body {
            shape: Shape::Disc { radius, thickness },
            density: positive("density", density)?,
        };
        b.check_nucleons()
    }

    fn check_nucleons(self) -> Result<Self> {
        if self.nucleon_count() < 1.0 {
            return Err(Error::InvalidParameter {
                name: "body",
                reason: "contains fewer than one nucleon",
            });
        }
        Ok(self)
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.shape, Shape::Sphere { .. })
    }

    pub fn volume(&self) -> f64 {
        match self.shape {
            Shape::Sphere { radius } => 4.0 / 3.0 * PI * radius * radius * radius,
            Shape::Disc { radius, thickness } => PI * radius * radius * thickness,
        }
    }

    pub fn mass(&self) -> f64 {
        self.density * self.volume()
    }

    pub fn nucleon_count(&self) -> f64 {
        self.mass() / CGS.m_nucleon
    }

    /// Sphere: about any diameter. Disc: about a diameter lying in its face.
    pub fn moment_of_inertia(&self) -> f64 {
        let m = self.mass();
        match self.shape {
            Shape::Sphere { radius } => 0.4 * m * radius * radius,
            Shape::Disc { radius, thickness } => {
                m * radius * radius / 4.0 * (1.0 + thickness * thickness / (3.0 * radius * radius))
            }
        }
    }

    pub fn derived(&self) -> BodyDerived {
        body_derived(self)
    }
}

pub fn body_derived(body: &Body) -> BodyDerived {
    BodyDerived {
        volume: body.volume(),
        mass: body.mass(),
        nucleons: body.nucleon_count(),
        inertia: body.moment_of_inertia(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sphere_nucleons() {
        let n = Body::sphere(1e-5, 1.0).unwrap().nucleon_count();
        let expected = 4.0 / 3.0 * PI * 1e-15 / 1.6726e-24;
        assert!((n / expected - 1.0).abs() < 1e-14);
        assert!((n / 2.504e9 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn disc_mass() {
        let m = Body::disc(2e-5, 0.5e-5, 1.0).unwrap().mass();
        assert!((m / 6.2832e-15 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn disc_inertia_includes_thickness() {
        let d = Body::disc(2e-5, 0.5e-5, 1.0).unwrap();
        let thin = d.mass() * 4e-10 / 4.0;
        assert!((d.moment_of_inertia() / thin - (1.0 + 0.25 / 12.0)).abs() < 1e-12);
    }

    #[test]
    fn invalid_bodies_rejected() {
        assert!(Body::sphere(1e-5, 0.0).is_err());
        assert!(Body::sphere(-1e-5, 1.0).is_err());
        assert!(Body::disc(1e-5, 3e-5, 1.0).is_err());
        assert!(Body::sphere(1e-9, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn nucleons_linear_in_density_cubic_in_radius(r in 1e-6f64..1.0, d in 0.1f64..20.0) {
            let base = Body::sphere(r, d).unwrap().nucleon_count();
            let dd = Body::sphere(r, 2.0 * d).unwrap().nucleon_count();
            let rr = Body::sphere(2.0 * r, d).unwrap().nucleon_count();
            prop_assert!((dd / base - 2.0).abs() < 1e-12);
            prop_assert!((rr / base - 8.0).abs() < 1e-12);
        }

        #[test]
        fn derived_is_pure(r in 1e-6f64..1.0, d in 0.1f64..20.0) {
            let b = Body::sphere(r, d).unwrap();
            prop_assert_eq!(body_derived(&b), body_derived(&b));
        }
    }
}
