use core::f64::consts::PI;

use num_traits::Float;

use crate::constants::{CGS, M_N2};
use crate::error::{positive, Error, Result};

/// Gas state and/or thermal radiation bath. Pressure in dyn/cm².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    pub temperature: f64,
    pub pressure: Option<f64>,
    pub gas_molecular_mass: f64,
    pub gas_viscosity: Option<f64>,
    pub radiation_temperature: Option<f64>,
}

impl Environment {
    /// Nitrogen at temperature `t` (K) and pressure `p` (dyn/cm²).
    pub fn gas(t: f64, p: f64) -> Result<Self> {
        Ok(Environment {
            temperature: positive("T", t)?,
            pressure: Some(positive("p", p)?),
            gas_molecular_mass: M_N2,
            gas_viscosity: None,
            radiation_temperature: None,
        })
    }

    /// Vacuum with a thermal radiation bath at `t`.
    pub fn radiation(t: f64) -> Result<Self> {
        Ok(Environment {
            temperature: positive("T", t)?,
            pressure: None,
            gas_molecular_mass: M_N2,
            gas_viscosity: None,
            radiation_temperature: Some(t),
        })
    }

    pub fn with_viscosity(mut self, eta: f64) -> Result<Self> {
        self.gas_viscosity = Some(positive("eta", eta)?);
        Ok(self)
    }

    pub fn with_gas_mass(mut self, m_g: f64) -> Result<Self> {
        self.gas_molecular_mass = positive("m_g", m_g)?;
        Ok(self)
    }

    pub fn with_radiation_temperature(mut self, t: f64) -> Result<Self> {
        self.radiation_temperature = Some(positive("T_rad", t)?);
        Ok(self)
    }

    pub fn pressure(&self) -> Result<f64> {
        self.pressure
            .ok_or(Error::Unsupported("environment has no gas pressure"))
    }

    pub fn viscosity(&self) -> Result<f64> {
        self.gas_viscosity
            .ok_or(Error::Unsupported("environment has no gas viscosity"))
    }

    /// n = p/kT
    pub fn number_density(&self) -> Result<f64> {
        Ok(self.pressure()? / (CGS.k_boltzmann * self.temperature))
    }

    /// ū = (8kT/π m_g)^{1/2}
    pub fn mean_speed(&self) -> f64 {
        (8.0 * CGS.k_boltzmann * self.temperature / (PI * self.gas_molecular_mass)).sqrt()
    }

    /// (2π m_g kT)^{1/2}, the momentum scale of molecular drag.
    pub fn thermal_momentum(&self) -> f64 {
        (2.0 * PI * self.gas_molecular_mass * CGS.k_boltzmann * self.temperature).sqrt()
    }

    /// Flux onto one side of a surface, J = nū/4.
    pub fn molecular_flux(&self) -> Result<f64> {
        Ok(self.number_density()? * self.mean_speed() / 4.0)
    }

    /// l_m = 3η/(n m_g ū)
    pub fn mean_free_path(&self) -> Result<f64> {
        Ok(3.0 * self.viscosity()?
            / (self.number_density()? * self.gas_molecular_mass * self.mean_speed()))
    }
}
