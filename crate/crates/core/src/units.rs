//! The handful of convenience units the paper mixes with CGS.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

pub const DYN_PER_TORR: f64 = 1333.22;
pub const TORR_PER_PT: f64 = 1e-12;
pub const SECONDS_PER_DAY: f64 = 86400.0;
pub const CM_PER_DMU: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Pressure,
    Time,
    Length,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    DynPerCm2,
    Torr,
    PicoTorr,
    Second,
    Minute,
    Hour,
    Day,
    Centimeter,
    /// 10⁻⁵ cm
    Dmu,
    Kelvin,
}

impl Unit {
    pub const ALL: [Unit; 10] = [
        Unit::DynPerCm2,
        Unit::Torr,
        Unit::PicoTorr,
        Unit::Second,
        Unit::Minute,
        Unit::Hour,
        Unit::Day,
        Unit::Centimeter,
        Unit::Dmu,
        Unit::Kelvin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Unit::DynPerCm2 => "dyn/cm2",
            Unit::Torr => "Torr",
            Unit::PicoTorr => "pT",
            Unit::Second => "s",
            Unit::Minute => "min",
            Unit::Hour => "h",
            Unit::Day => "day",
            Unit::Centimeter => "cm",
            Unit::Dmu => "dμ",
            Unit::Kelvin => "K",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            Unit::DynPerCm2 | Unit::Torr | Unit::PicoTorr => Dimension::Pressure,
            Unit::Second | Unit::Minute | Unit::Hour | Unit::Day => Dimension::Time,
            Unit::Centimeter | Unit::Dmu => Dimension::Length,
            Unit::Kelvin => Dimension::Temperature,
        }
    }

    /// Size of one unit in the CGS base unit of its dimension.
    pub fn to_cgs(self) -> f64 {
        match self {
            Unit::DynPerCm2 | Unit::Second | Unit::Centimeter | Unit::Kelvin => 1.0,
            Unit::Torr => DYN_PER_TORR,
            Unit::PicoTorr => TORR_PER_PT * DYN_PER_TORR,
            Unit::Minute => 60.0,
            Unit::Hour => 3600.0,
            Unit::Day => SECONDS_PER_DAY,
            Unit::Dmu => CM_PER_DMU,
        }
    }

    pub fn cgs(dim: Dimension) -> Unit {
        match dim {
            Dimension::Pressure => Unit::DynPerCm2,
            Dimension::Time => Unit::Second,
            Dimension::Length => Unit::Centimeter,
            Dimension::Temperature => Unit::Kelvin,
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let u = match s {
            "dyn/cm2" | "dyn/cm^2" | "dyn/cm²" | "dyn" => Unit::DynPerCm2,
            "Torr" | "torr" => Unit::Torr,
            "pT" | "pTorr" => Unit::PicoTorr,
            "s" | "sec" => Unit::Second,
            "min" => Unit::Minute,
            "h" | "hr" => Unit::Hour,
            "day" | "days" | "d" => Unit::Day,
            "cm" => Unit::Centimeter,
            "dμ" | "dmu" | "dµ" => Unit::Dmu,
            "K" => Unit::Kelvin,
            _ => {
                return Err(Error::InvalidParameter {
                    name: "unit",
                    reason: "unrecognised unit (known: dyn/cm2 Torr pT s min h day cm dμ K)",
                })
            }
        };
        Ok(u)
    }
}

/// Linear conversion between two units of the same dimension.
pub fn convert_unit(value: f64, from: Unit, to: Unit) -> Result<f64> {
    if from.dimension() != to.dimension() {
        return Err(Error::UnsupportedConversion {
            from: from.name(),
            to: to.name(),
        });
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * from.to_cgs() / to.to_cgs())
}

/// Parses `"5e-17Torr"`, `"2dμ"`, `"4.2K"` or a bare number (taken as CGS)
/// and returns the value in the CGS unit of `dim`.
pub fn parse_quantity(s: &str, dim: Dimension) -> Result<f64> {
    let s = s.trim();
    let split = s
        .char_indices()
        .find(|&(i, c)| c.is_alphabetic() && !((c == 'e' || c == 'E') && is_exponent(s, i)))
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    let (num, unit) = s.split_at(split);
    let value: f64 = num.trim().parse().map_err(|_| Error::InvalidParameter {
        name: "quantity",
        reason: "expected a number optionally followed by a unit",
    })?;
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok(value);
    }
    convert_unit(value, unit.parse()?, Unit::cgs(dim))
}

fn is_exponent(s: &str, i: usize) -> bool {
    let next = s[i + 1..].chars().next();
    i > 0 && matches!(next, Some(c) if c.is_ascii_digit() || c == '-' || c == '+')
}
