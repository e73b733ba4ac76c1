//! Time evolution of the transverse packet.
//!
//! [`evolve_spectral`] is the production path: one phase multiply per bin.
//! [`evolve_propagator`] evaluates the free-particle kernel in real space by
//! direct quadrature; it is O(n²) and exists to cross-check the spectral path.
//! [`far_field_density`] drops the quadratic phase over the initial packet,
//! which turns the evolved density into a rescaled power spectrum.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::dispersion::{DispersionSpec, PhysicalConstants};
use crate::error::{Error, Result};
use crate::lattice::Field;

/// Largest neglected quadratic phase over the aperture, `m a²/(2ħt)` in time
/// or `k₀ a²/(2z)` in space, for which the far-field form counts as valid.
pub const FRAUNHOFER_PHASE_LIMIT: f64 = 0.05;

fn check_time(t: f64, allow_zero: bool) -> Result<()> {
    let ok = t.is_finite() && if allow_zero { t >= 0.0 } else { t > 0.0 };
    if ok {
        Ok(())
    } else {
        let need = if allow_zero {
            "non-negative"
        } else {
            "positive"
        };
        Err(Error::param("t", format!("{t} must be finite and {need}")))
    }
}

/// Multiplies each spectral bin by `exp(-i ω(k) t)` and transforms back.
pub fn evolve_spectral(field0: &Field, spec: &DispersionSpec, t: f64) -> Result<Field> {
    check_time(t, true)?;
    if t == 0.0 {
        return Ok(field0.clone());
    }
    let spectrum = field0
        .forward()
        .apply(|k| Complex64::from_polar(1.0, -spec.omega_transverse(k) * t));
    Ok(spectrum.inverse())
}

/// Phase advance of the free-particle kernel between adjacent samples at the
/// far edge of the domain, `m dx L / (2ħt)`. Above π the quadrature aliases.
pub fn propagator_edge_phase_step(field0: &Field, constants: &PhysicalConstants, t: f64) -> f64 {
    let lat = field0.lattice();
    constants.m * lat.dx() * lat.extent() / (2.0 * constants.hbar * t)
}

/// Riemann-sum quadrature of the free Schrödinger propagator
///
/// ```text
/// ψ(x, t) = √(m / 2πiħt) ∫ exp(i m (x - x')² / 2ħt) ψ(x', 0) dx'
/// ```
///
/// over the lattice (no periodic images). Logs a warning when the kernel is
/// undersampled at the domain edge.
pub fn evolve_propagator(field0: &Field, constants: &PhysicalConstants, t: f64) -> Result<Field> {
    check_time(t, false)?;
    constants.validate()?;
    let step = propagator_edge_phase_step(field0, constants, t);
    if step > PI {
        warn!("propagator kernel undersampled: edge phase step {step:.3} rad > π");
    }
    let lat = field0.lattice();
    let dx = lat.dx();
    let x = lat.x();
    let alpha = constants.m / (2.0 * constants.hbar * t);
    // √(m/(2πiħt)) = √(m/(2πħt)) · e^{-iπ/4}
    let prefactor = Complex64::from_polar(
        (constants.m / (2.0 * PI * constants.hbar * t)).sqrt() * dx,
        -PI / 4.0,
    );
    let source: Vec<(f64, Complex64)> = x
        .iter()
        .zip(field0.values())
        .filter(|(_, v)| v.norm_sqr() > 0.0)
        .map(|(x, v)| (*x, *v))
        .collect();
    Ok(field0.map_values(|i, _| {
        let xi = x[i];
        let sum: Complex64 = source
            .iter()
            .map(|(xs, v)| {
                let u = xi - xs;
                v * Complex64::from_polar(1.0, alpha * u * u)
            })
            .sum();
        prefactor * sum
    }))
}

/// Neglected quadratic phase `m w²/(2ħt)` for an initial packet of width `w`.
pub fn fraunhofer_phase(constants: &PhysicalConstants, width: f64, t: f64) -> f64 {
    constants.m * width * width / (2.0 * constants.hbar * t)
}

/// Far-field approximation of the evolved density,
///
/// ```text
/// |ψ(x, t)|² ≈ (m / 2πħt) |∫ exp(-i (m x / ħt) x') ψ(x', 0) dx'|²
/// ```
///
/// evaluated at every lattice position by resampling the spectrum at
/// `k = m x / ħt` (linear interpolation between bins).
pub fn far_field_density(
    field0: &Field,
    constants: &PhysicalConstants,
    t: f64,
) -> Result<Vec<f64>> {
    check_time(t, false)?;
    constants.validate()?;
    let lat = field0.lattice();
    let spectrum = field0.forward();
    // ∫ e^{-ikx'} ψ dx' ≈ dx √n F(k)
    let scale =
        constants.m / (2.0 * PI * constants.hbar * t) * lat.dx() * lat.dx() * lat.n() as f64;
    let k_per_x = constants.m / (constants.hbar * t);
    Ok(lat
        .x()
        .iter()
        .map(|&x| scale * spectrum.interpolate(k_per_x * x).norm_sqr())
        .collect())
}
