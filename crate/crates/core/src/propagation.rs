//! Propagation of a monochromatic field from the plane `z = 0` to a later
//! plane `z`, by the angular spectrum method.
//!
//! Returned fields keep the overall carrier phase `e^{ik₀z}`; it cancels in
//! every density.

use num_complex::Complex64;
use serde::Serialize;

use crate::apertures::{check_margin, measured_support};
use crate::error::{Error, Result};
use crate::lattice::Field;

pub use crate::evolution::FRAUNHOFER_PHASE_LIMIT;

/// Density floor (relative to peak) used to measure an aperture's support.
pub const SUPPORT_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagatorMode {
    Exact,
    Fresnel,
}

impl PropagatorMode {
    pub fn name(self) -> &'static str {
        match self {
            PropagatorMode::Exact => "exact",
            PropagatorMode::Fresnel => "fresnel",
        }
    }
}

impl std::str::FromStr for PropagatorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PropagatorMode::Exact),
            "fresnel" => Ok(PropagatorMode::Fresnel),
            other => Err(Error::param(
                "mode",
                format!("unknown propagator `{other}` (expected exact or fresnel)"),
            )),
        }
    }
}

fn check_args(k0: f64, z: f64, allow_zero: bool) -> Result<()> {
    if !(k0.is_finite() && k0 > 0.0) {
        return Err(Error::param(
            "k0",
            format!("{k0} must be finite and positive"),
        ));
    }
    let ok = z.is_finite() && if allow_zero { z >= 0.0 } else { z > 0.0 };
    if !ok {
        return Err(Error::param(
            "z",
            format!("{z} is not a valid forward distance"),
        ));
    }
    Ok(())
}

/// Transfer function of free space for one angular-spectrum component.
/// Components with `|k_x| > k₀` take the branch that decays with `z`.
pub fn exact_transfer(kx: f64, k0: f64, z: f64) -> Complex64 {
    let kz2 = k0 * k0 - kx * kx;
    if kz2 >= 0.0 {
        Complex64::from_polar(1.0, kz2.sqrt() * z)
    } else {
        Complex64::new((-(-kz2).sqrt() * z).exp(), 0.0)
    }
}

/// Fresnel (second-order) transfer function `exp(i (k₀ - k_x²/2k₀) z)`.
pub fn fresnel_transfer(kx: f64, k0: f64, z: f64) -> Complex64 {
    Complex64::from_polar(1.0, (k0 - kx * kx / (2.0 * k0)) * z)
}

pub fn propagate_exact(field0: &Field, k0: f64, z: f64) -> Result<Field> {
    check_args(k0, z, true)?;
    if z == 0.0 {
        return Ok(field0.clone());
    }
    Ok(field0
        .forward()
        .apply(|kx| exact_transfer(kx, k0, z))
        .inverse())
}

pub fn propagate_fresnel(field0: &Field, k0: f64, z: f64) -> Result<Field> {
    check_args(k0, z, true)?;
    if z == 0.0 {
        return Ok(field0.clone());
    }
    Ok(field0
        .forward()
        .apply(|kx| fresnel_transfer(kx, k0, z))
        .inverse())
}

pub fn propagate(field0: &Field, k0: f64, z: f64, mode: PropagatorMode) -> Result<Field> {
    match mode {
        PropagatorMode::Exact => propagate_exact(field0, k0, z),
        PropagatorMode::Fresnel => propagate_fresnel(field0, k0, z),
    }
}

/// Fraction of the field's spectral power carried by evanescent components.
pub fn evanescent_fraction(field0: &Field, k0: f64) -> f64 {
    field0.forward().power_fraction_beyond(k0)
}

/// Peak-normalized far-field pattern together with its validity check.
#[derive(Clone, Debug)]
pub struct FraunhoferPattern {
    pub density: Vec<f64>,
    /// Measured aperture width used for the validity check.
    pub aperture_width: f64,
    /// `k₀ a² / (2z)`.
    pub aperture_phase: f64,
    /// False when `aperture_phase` exceeds [`FRAUNHOFER_PHASE_LIMIT`].
    pub valid: bool,
}

/// Fraunhofer pattern `|∫ exp(-i (k₀x/z) x') φ(x', 0) dx'|²` on the lattice
/// positions, via spectrum resampling at `k_x = k₀ x / z`.
pub fn propagate_fraunhofer(field0: &Field, k0: f64, z: f64) -> Result<FraunhoferPattern> {
    check_args(k0, z, false)?;
    let (lo, hi) = measured_support(field0, SUPPORT_FLOOR)
        .ok_or_else(|| Error::Degenerate("far-field pattern of a zero field".into()))?;
    check_margin(lo, hi, field0.lattice())?;
    let width = hi - lo;

    let spectrum = field0.forward();
    let k_per_x = k0 / z;
    let mut density: Vec<f64> = field0
        .lattice()
        .x()
        .iter()
        .map(|&x| spectrum.interpolate(k_per_x * x).norm_sqr())
        .collect();
    let peak = density.iter().cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        density.iter_mut().for_each(|d| *d /= peak);
    }
    let aperture_phase = k0 * width * width / (2.0 * z);
    Ok(FraunhoferPattern {
        density,
        aperture_width: width,
        aperture_phase,
        valid: aperture_phase <= FRAUNHOFER_PHASE_LIMIT,
    })
}
