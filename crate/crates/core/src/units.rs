//! Natural-unit bookkeeping.
//!
//! All arithmetic runs with a settable `hbar` (default 1) and one declared
//! length unit. Momenta are then measured in `hbar / length_unit`. Labels are
//! metadata; conversion only happens at input/output boundaries.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LengthUnit {
    Nanometer,
    Micrometer,
    Millimeter,
    Centimeter,
    Meter,
}

impl LengthUnit {
    /// Size of one unit in meters.
    pub fn in_meters(self) -> f64 {
        match self {
            LengthUnit::Nanometer => 1e-9,
            LengthUnit::Micrometer => 1e-6,
            LengthUnit::Millimeter => 1e-3,
            LengthUnit::Centimeter => 1e-2,
            LengthUnit::Meter => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            LengthUnit::Nanometer => "nm",
            LengthUnit::Micrometer => "um",
            LengthUnit::Millimeter => "mm",
            LengthUnit::Centimeter => "cm",
            LengthUnit::Meter => "m",
        }
    }

    /// Converts `value` expressed in `self` into `target`.
    pub fn convert(self, value: f64, target: LengthUnit) -> f64 {
        if self == target {
            return value;
        }
        value * self.in_meters() / target.in_meters()
    }
}

impl fmt::Display for LengthUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for LengthUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nm" => Ok(LengthUnit::Nanometer),
            "um" | "µm" | "micron" => Ok(LengthUnit::Micrometer),
            "mm" => Ok(LengthUnit::Millimeter),
            "cm" => Ok(LengthUnit::Centimeter),
            "m" => Ok(LengthUnit::Meter),
            other => Err(Error::Parse(format!("unknown length unit `{other}`"))),
        }
    }
}

/// Unit context shared by every bound evaluation in one computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    hbar: f64,
    length_unit: LengthUnit,
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem {
            hbar: 1.0,
            length_unit: LengthUnit::Millimeter,
        }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64, length_unit: LengthUnit) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(invalid("hbar", format!("must be positive and finite, got {hbar}")));
        }
        Ok(UnitSystem { hbar, length_unit })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn length_unit(&self) -> LengthUnit {
        self.length_unit
    }

    pub fn momentum_unit(&self) -> String {
        format!("hbar/{}", self.length_unit)
    }
}

pub(crate) fn check_hbar(hbar: f64) -> Result<()> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(())
    } else {
        Err(invalid("hbar", format!("must be positive and finite, got {hbar}")))
    }
}
