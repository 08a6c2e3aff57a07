//! Physical constants (CGS) and the CSL parameter pair.

use crate::error::{positive, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// erg s
    pub hbar: f64,
    /// erg/K
    pub k_boltzmann: f64,
    /// g; proton and neutron masses are taken equal
    pub m_nucleon: f64,
    /// cm³/(g s²)
    pub g_newton: f64,
    /// cm/s
    pub c: f64,
    /// K
    pub room_temperature: f64,
}

impl PhysicalConstants {
    pub const CGS: PhysicalConstants = PhysicalConstants {
        hbar: 1.0546e-27,
        k_boltzmann: 1.3807e-16,
        m_nucleon: 1.6726e-24,
        g_newton: 6.674e-8,
        c: 2.9979e10,
        room_temperature: 293.15,
    };

    pub fn h(&self) -> f64 {
        2.0 * core::f64::consts::PI * self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CGS
    }
}

pub const CGS: PhysicalConstants = PhysicalConstants::CGS;

/// Electron mass, g.
pub const M_ELECTRON: f64 = 9.109e-28;
/// Elementary charge, esu.
pub const E_CHARGE: f64 = 4.803e-10;
/// erg per eV.
pub const ERG_PER_EV: f64 = 1.602e-12;
/// Atomic mass unit, g.
pub const AMU: f64 = 1.6605e-24;
/// Molecular mass of N₂, g.
pub const M_N2: f64 = 28.0 * AMU;

/// Collapse rate λ (1/s) and localization length a (cm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CslParams {
    pub lambda: f64,
    pub a: f64,
}

impl CslParams {
    pub const GRW: CslParams = CslParams {
        lambda: 1e-16,
        a: 1e-5,
    };

    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        Ok(Self {
            lambda: positive("lambda", lambda)?,
            a: positive("a", a)?,
        })
    }

    /// Same `a`, collapse time λ⁻¹ in seconds.
    pub fn with_lambda_inv(self, lambda_inv: f64) -> Result<Self> {
        Self::new(1.0 / positive("lambda_inv", lambda_inv)?, self.a)
    }
}

impl Default for CslParams {
    fn default() -> Self {
        Self::GRW
    }
}
