//! Dispersion relations for De Broglie, electromagnetic and Klein-Gordon
//! waves: the longitudinal `ω₀(k₀)`, the transverse `ω(k_x)` that drives the
//! packet's time evolution, and the group velocity at the carrier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub m: f64,
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            m: 1.0,
            c: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, m: f64, c: f64) -> Result<Self> {
        let consts = Self { hbar, m, c };
        consts.validate()?;
        Ok(consts)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("hbar", self.hbar), ("m", self.m), ("c", self.c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(
                    name,
                    format!("{v} must be finite and positive"),
                ));
            }
        }
        Ok(())
    }

    /// Squared Compton wavenumber `(mc/ħ)²`.
    pub fn mass_term(&self) -> f64 {
        let mu = self.m * self.c / self.hbar;
        mu * mu
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    DeBroglie,
    ElectromagneticParaxial,
    ElectromagneticExact,
    KleinGordonParaxial,
    KleinGordonExact,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::DeBroglie,
        Family::ElectromagneticParaxial,
        Family::ElectromagneticExact,
        Family::KleinGordonParaxial,
        Family::KleinGordonExact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::DeBroglie => "de_broglie",
            Family::ElectromagneticParaxial => "electromagnetic_paraxial",
            Family::ElectromagneticExact => "electromagnetic_exact",
            Family::KleinGordonParaxial => "klein_gordon_paraxial",
            Family::KleinGordonExact => "klein_gordon_exact",
        }
    }

    /// The quadratic-in-`k_x` member of the same physical family.
    pub fn paraxial(self) -> Family {
        match self {
            Family::ElectromagneticExact => Family::ElectromagneticParaxial,
            Family::KleinGordonExact => Family::KleinGordonParaxial,
            other => other,
        }
    }

    fn needs_carrier(self) -> bool {
        !matches!(self, Family::DeBroglie)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::param(
                    "family",
                    format!(
                        "unknown dispersion family `{s}` (expected one of {})",
                        Family::ALL.map(Family::name).join(", ")
                    ),
                )
            })
    }
}

/// A dispersion family together with its constants and carrier wavenumber.
///
/// The carrier `k0` is optional only for [`Family::DeBroglie`], whose
/// transverse law does not involve it; the group velocity still needs it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DispersionSpec {
    family: Family,
    constants: PhysicalConstants,
    k0: Option<f64>,
}

impl DispersionSpec {
    pub fn new(family: Family, constants: PhysicalConstants, k0: Option<f64>) -> Result<Self> {
        constants.validate()?;
        match k0 {
            Some(k) if !(k.is_finite() && k > 0.0) => {
                return Err(Error::param(
                    "k0",
                    format!("{k} must be finite and positive"),
                ))
            }
            None if family.needs_carrier() => return Err(Error::MissingCarrier(family.name())),
            _ => {}
        }
        Ok(Self {
            family,
            constants,
            k0,
        })
    }

    pub fn de_broglie(constants: PhysicalConstants, k0: f64) -> Result<Self> {
        Self::new(Family::DeBroglie, constants, Some(k0))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn k0(&self) -> Option<f64> {
        self.k0
    }

    fn carrier(&self) -> Result<f64> {
        self.k0.ok_or(Error::MissingCarrier(self.family.name()))
    }

    /// Same constants and carrier, quadratic transverse law.
    pub fn paraxial(&self) -> Self {
        Self {
            family: self.family.paraxial(),
            ..*self
        }
    }

    /// Transverse dispersion `ω(k_x)` at fixed `k_z = k0`.
    pub fn omega_transverse(&self, kx: f64) -> f64 {
        let PhysicalConstants { hbar, m, c } = self.constants;
        // Constructor guarantees k0 for every family that reads it.
        let k0 = self.k0.unwrap_or(0.0);
        let kx2 = kx * kx;
        match self.family {
            Family::DeBroglie => hbar * kx2 / (2.0 * m),
            Family::ElectromagneticParaxial => c * k0 + c * kx2 / (2.0 * k0),
            Family::ElectromagneticExact => c * (k0 * k0 + kx2).sqrt(),
            Family::KleinGordonParaxial => {
                let kt = (k0 * k0 + self.constants.mass_term()).sqrt();
                c * kt + c * kx2 / (2.0 * kt)
            }
            Family::KleinGordonExact => c * (k0 * k0 + kx2 + self.constants.mass_term()).sqrt(),
        }
    }

    /// `d²ω/dk_x²` of the paraxial law: `ħ/m`, `c/k0` or `c/k_t`. Plays the
    /// role of `ħ/m` in the free-particle patterns for every family.
    pub fn curvature(&self) -> f64 {
        let PhysicalConstants { hbar, m, c } = self.constants;
        let k0 = self.k0.unwrap_or(0.0);
        match self.family {
            Family::DeBroglie => hbar / m,
            Family::ElectromagneticParaxial | Family::ElectromagneticExact => c / k0,
            Family::KleinGordonParaxial | Family::KleinGordonExact => {
                c / (k0 * k0 + self.constants.mass_term()).sqrt()
            }
        }
    }

    /// Longitudinal relation `ω₀(k₀)` of a monochromatic wave of this family.
    pub fn omega_longitudinal(&self, k0: f64) -> f64 {
        let PhysicalConstants { hbar, m, c } = self.constants;
        match self.family {
            Family::DeBroglie => hbar * k0 * k0 / (2.0 * m),
            Family::ElectromagneticParaxial | Family::ElectromagneticExact => c * k0,
            Family::KleinGordonParaxial | Family::KleinGordonExact => {
                c * (k0 * k0 + self.constants.mass_term()).sqrt()
            }
        }
    }

    /// `dω₀/dk₀` at the carrier.
    pub fn group_velocity(&self) -> Result<f64> {
        let k0 = self.carrier()?;
        let PhysicalConstants { hbar, m, c } = self.constants;
        Ok(match self.family {
            Family::DeBroglie => hbar * k0 / m,
            Family::ElectromagneticParaxial | Family::ElectromagneticExact => c,
            Family::KleinGordonParaxial | Family::KleinGordonExact => {
                c * k0 / (k0 * k0 + self.constants.mass_term()).sqrt()
            }
        })
    }

    /// Time for the envelope to cross a distance `z`.
    pub fn transit_time(&self, z: f64) -> Result<f64> {
        if !(z.is_finite() && z >= 0.0) {
            return Err(Error::param(
                "z",
                format!("{z} must be finite and non-negative"),
            ));
        }
        Ok(z / self.group_velocity()?)
    }
}
