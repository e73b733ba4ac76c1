//! Checks that the transverse packet evolved for `t = z / v_g` has the same
//! density as the monochromatic field propagated to the plane `z`.
//!
//! With the Fresnel propagator both routes multiply the same spectrum by
//! phases that agree up to a bin-independent constant, so the densities match
//! to rounding. With the exact propagator the residual is the Fresnel
//! approximation error. Densities are compared after peak normalization: the
//! claim is about pattern shape, and Fraunhofer-style outputs carry no
//! absolute scale.

use serde::Serialize;

use crate::apertures::{self, ApertureSpec};
use crate::dispersion::DispersionSpec;
use crate::error::{Error, Result};
use crate::evolution::evolve_spectral;
use crate::lattice::{Field, Lattice};
use crate::propagation::{evanescent_fraction, propagate, PropagatorMode};

pub const DEFAULT_FRESNEL_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_EXACT_TOLERANCE: f64 = 5e-3;
/// Largest edge-to-peak density ratio accepted before the periodic domain is
/// considered contaminated by wraparound.
pub const DEFAULT_EDGE_GUARD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Result of one `t = z / v_g` equivalence check.
///
/// JSON keys: `z`, `k0`, `v_g`, `t`, `l2_rel`, `linf_peak`,
/// `evanescent_fraction`, `verdict` (`"pass"`/`"fail"`), `mode`
/// (`"exact"`/`"fresnel"`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchReport {
    pub z: f64,
    pub k0: f64,
    pub v_g: f64,
    pub t: f64,
    pub l2_rel: f64,
    pub linf_peak: f64,
    pub evanescent_fraction: f64,
    pub verdict: Verdict,
    pub mode: PropagatorMode,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMetrics {
    pub l2_rel: f64,
    pub linf_peak: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchOptions {
    pub mode: PropagatorMode,
    pub tolerance: f64,
    /// Evolution time as a multiple of `z / v_g`. Anything other than 1 is a
    /// deliberate mismatch, used as a negative control.
    pub time_scale: f64,
    /// Edge-to-peak density limit; `None` disables the wraparound guard.
    pub edge_guard: Option<f64>,
}

impl MatchOptions {
    pub fn new(mode: PropagatorMode) -> Self {
        let tolerance = match mode {
            PropagatorMode::Fresnel => DEFAULT_FRESNEL_TOLERANCE,
            PropagatorMode::Exact => DEFAULT_EXACT_TOLERANCE,
        };
        Self {
            mode,
            tolerance,
            time_scale: 1.0,
            edge_guard: Some(DEFAULT_EDGE_GUARD),
        }
    }

    pub fn fresnel() -> Self {
        Self::new(PropagatorMode::Fresnel)
    }

    pub fn exact() -> Self {
        Self::new(PropagatorMode::Exact)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_time_scale(mut self, time_scale: f64) -> Self {
        self.time_scale = time_scale;
        self
    }

    pub fn with_edge_guard(mut self, edge_guard: Option<f64>) -> Self {
        self.edge_guard = edge_guard;
        self
    }
}

/// A report together with the two fields it was computed from.
#[derive(Clone, Debug)]
pub struct MatchRun {
    pub report: MatchReport,
    pub initial: Field,
    pub evolved: Field,
    pub propagated: Field,
}

fn peak_normalized(d: &[f64], which: &str) -> Result<Vec<f64>> {
    if let Some(i) = d.iter().position(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::param(
            "density",
            format!("{which} sample {i} is negative or non-finite"),
        ));
    }
    let peak = d.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::Degenerate(format!("{which} density is all zero")));
    }
    Ok(d.iter().map(|v| v / peak).collect())
}

/// Peak-normalizes both densities, then returns `‖d1 - d2‖₂ / ‖d1‖₂` and
/// `max |d1 - d2|`.
pub fn compare_densities(d1: &[f64], d2: &[f64]) -> Result<DensityMetrics> {
    if d1.len() != d2.len() {
        return Err(Error::LengthMismatch {
            expected: d1.len(),
            actual: d2.len(),
        });
    }
    let a = peak_normalized(d1, "first")?;
    let b = peak_normalized(d2, "second")?;
    let (mut diff2, mut norm2, mut linf) = (0.0, 0.0, 0.0f64);
    for (x, y) in a.iter().zip(&b) {
        let d = x - y;
        diff2 += d * d;
        norm2 += x * x;
        linf = linf.max(d.abs());
    }
    Ok(DensityMetrics {
        l2_rel: (diff2 / norm2).sqrt(),
        linf_peak: linf,
    })
}

/// Largest of the two outermost samples relative to the peak.
pub fn edge_ratio(density: &[f64]) -> f64 {
    let peak = density.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 || density.is_empty() {
        return 0.0;
    }
    density[0].max(density[density.len() - 1]) / peak
}

/// Fails with [`Error::Wraparound`] when the edge density exceeds `limit`
/// times the peak. `None` disables the check.
pub fn wraparound_guard(density: &[f64], limit: Option<f64>) -> Result<()> {
    if let Some(limit) = limit {
        let ratio = edge_ratio(density);
        if ratio > limit {
            return Err(Error::Wraparound { ratio, limit });
        }
    }
    Ok(())
}

/// Runs the check starting from an already-built initial field.
pub fn match_field(
    field0: &Field,
    spec: &DispersionSpec,
    z: f64,
    options: &MatchOptions,
) -> Result<MatchRun> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::param(
            "z",
            format!("{z} must be finite and positive"),
        ));
    }
    if !(options.time_scale.is_finite() && options.time_scale > 0.0) {
        return Err(Error::param("time_scale", "must be finite and positive"));
    }
    let k0 = spec
        .k0()
        .ok_or(Error::MissingCarrier(spec.family().name()))?;
    let v_g = spec.group_velocity()?;
    let t = options.time_scale * spec.transit_time(z)?;

    let evolved = evolve_spectral(field0, &spec.paraxial(), t)?;
    let propagated = propagate(field0, k0, z, options.mode)?;
    let evanescent = evanescent_fraction(field0, k0);

    let initial_norm = field0.norm_squared();
    if propagated.norm_squared() <= 1e-24 * initial_norm {
        return Err(Error::TotalEvanescence {
            evanescent_fraction: evanescent,
        });
    }

    let evolved_density = evolved.density();
    let propagated_density = propagated.density();
    wraparound_guard(&evolved_density, options.edge_guard)?;
    wraparound_guard(&propagated_density, options.edge_guard)?;

    let metrics = compare_densities(&evolved_density, &propagated_density)?;
    let verdict = if metrics.linf_peak <= options.tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(MatchRun {
        report: MatchReport {
            z,
            k0,
            v_g,
            t,
            l2_rel: metrics.l2_rel,
            linf_peak: metrics.linf_peak,
            evanescent_fraction: evanescent,
            verdict,
            mode: options.mode,
        },
        initial: field0.clone(),
        evolved,
        propagated,
    })
}

/// Builds the aperture on `lattice`, evolves it for `t = z / v_g` under the
/// paraxial form of `spec`, propagates it to `z`, and compares densities.
pub fn run_match(
    aperture: &ApertureSpec,
    spec: &DispersionSpec,
    lattice: &Lattice,
    z: f64,
    options: &MatchOptions,
) -> Result<MatchReport> {
    let field0 = apertures::build(aperture, lattice)?;
    Ok(match_field(&field0, spec, z, options)?.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{Family, PhysicalConstants};
    use crate::patterns::extract_features;

    fn fixture() -> (Lattice, f64) {
        // Extent 100, carrier wavelength 0.5.
        let lat = Lattice::new(4096, 100.0).unwrap();
        (lat, 4.0 * std::f64::consts::PI)
    }

    #[test]
    fn identical_and_scaled_densities() {
        let d: Vec<f64> = (0..50)
            .map(|j| ((j as f64) * 0.3).sin().powi(2) + 0.1)
            .collect();
        let m = compare_densities(&d, &d).unwrap();
        assert_eq!((m.l2_rel, m.linf_peak), (0.0, 0.0));
        let d2: Vec<f64> = d.iter().map(|v| 2.0 * v).collect();
        let m = compare_densities(&d, &d2).unwrap();
        assert_eq!((m.l2_rel, m.linf_peak), (0.0, 0.0));
    }

    #[test]
    fn shifted_gaussian_gap_is_slope_times_step() {
        let lat = Lattice::new(1024, 10.24).unwrap();
        let s = 0.2;
        let d: Vec<f64> = lat
            .x()
            .iter()
            .map(|x| (-x * x / (2.0 * s * s)).exp())
            .collect();
        let mut shifted = d.clone();
        shifted.rotate_right(1);
        let m = compare_densities(&d, &shifted).unwrap();
        // Oracle: the largest one-cell difference, evaluated directly.
        let direct = d
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max);
        assert!((m.linf_peak - direct).abs() < 1e-15);
        // ... which is close to dx · max|d'| = dx · e^{-1/2} / s.
        let slope = lat.dx() * (-0.5f64).exp() / s;
        assert!((m.linf_peak / slope - 1.0).abs() < 0.01);
    }

    #[test]
    fn compare_errors() {
        assert!(matches!(
            compare_densities(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            compare_densities(&[0.0, 0.0], &[1.0, 2.0]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn fresnel_match_is_exact_for_every_paraxial_family() {
        let (lat, k0) = fixture();
        let consts = PhysicalConstants::new(1.0, 1.0, 1.0).unwrap();
        let z = 60.0;
        for family in [
            Family::DeBroglie,
            Family::ElectromagneticParaxial,
            Family::KleinGordonParaxial,
            Family::ElectromagneticExact,
            Family::KleinGordonExact,
        ] {
            let spec = DispersionSpec::new(family, consts, Some(k0)).unwrap();
            for aperture in [
                ApertureSpec::rect(5.0),
                ApertureSpec::double_slit(4.0),
                ApertureSpec::gaussian(1.0),
            ] {
                let r = run_match(
                    &aperture,
                    &spec,
                    &lat,
                    z,
                    &MatchOptions::fresnel().with_edge_guard(None),
                )
                .unwrap();
                assert!(
                    r.linf_peak <= 1e-10,
                    "{family:?} {aperture:?}: {}",
                    r.linf_peak
                );
                assert_eq!(r.verdict, Verdict::Pass);
                assert!((r.t * r.v_g / z - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn perturbed_time_fails() {
        let (lat, k0) = fixture();
        let spec = DispersionSpec::de_broglie(PhysicalConstants::default(), k0).unwrap();
        let r = run_match(
            &ApertureSpec::double_slit(4.0),
            &spec,
            &lat,
            60.0,
            &MatchOptions::fresnel()
                .with_time_scale(0.9)
                .with_edge_guard(None),
        )
        .unwrap();
        assert!(r.linf_peak > 1e-3);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn exact_mode_sees_wide_angle_content() {
        let lat = Lattice::new(4096, 40.96).unwrap();
        let k0 = 20.0;
        let spec = DispersionSpec::de_broglie(PhysicalConstants::default(), k0).unwrap();
        // σ chosen so that about 1% of the power lies beyond 0.1 k0.
        let sigma = 0.644;
        let f0 = apertures::build(&ApertureSpec::gaussian(sigma), &lat).unwrap();
        let beyond = f0.forward().power_fraction_beyond(0.1 * k0);
        assert!((0.005..0.02).contains(&beyond), "{beyond}");
        let run = match_field(&f0, &spec, 3.0, &MatchOptions::exact()).unwrap();
        assert!(run.report.linf_peak > 1e-6, "{}", run.report.linf_peak);
        let fres = match_field(&f0, &spec, 3.0, &MatchOptions::fresnel()).unwrap();
        assert!(fres.report.linf_peak < 1e-10);
    }

    #[test]
    fn exact_gap_shrinks_as_aperture_widens() {
        // Smooth apertures: the paraxial error tracks spectral width alone.
        let lat = Lattice::new(8192, 400.0).unwrap();
        let k0 = 2.0 * std::f64::consts::PI;
        let z = 40.0;
        let spec = DispersionSpec::de_broglie(PhysicalConstants::default(), k0).unwrap();
        let mut last = f64::INFINITY;
        for sigma in [0.25, 0.5, 1.0, 2.0] {
            let r = run_match(
                &ApertureSpec::gaussian(sigma),
                &spec,
                &lat,
                z,
                &MatchOptions::exact().with_edge_guard(None),
            )
            .unwrap();
            assert!(
                r.linf_peak < last,
                "sigma={sigma}: {} !< {last}",
                r.linf_peak
            );
            last = r.linf_peak;
        }
    }

    #[test]
    fn doubling_distance_doubles_fringe_spacing() {
        // Nyquist components travel k z / k0 and stop just short of the boundary.
        let lat = Lattice::new(8192, 204.8).unwrap();
        let (k0, d) = (10.0, 2.0);
        let spec = DispersionSpec::de_broglie(PhysicalConstants::default(), k0).unwrap();
        let f0 = apertures::build(&ApertureSpec::double_slit(d), &lat).unwrap();
        let spacing = |z: f64| {
            let run = match_field(&f0, &spec, z, &MatchOptions::fresnel()).unwrap();
            assert_eq!(run.report.verdict, Verdict::Pass);
            extract_features(&run.evolved.density(), &lat)
                .unwrap()
                .central_fringe_spacing(3)
                .unwrap()
        };
        let z = 1.25 * k0 * d / (2.0 * std::f64::consts::PI);
        let (s1, s2) = (spacing(z), spacing(2.0 * z));
        assert!((s2 / s1 - 2.0).abs() <= 2e-3, "{s1} {s2}");
    }

    #[test]
    fn guards() {
        let (lat, k0) = fixture();
        let spec = DispersionSpec::de_broglie(PhysicalConstants::default(), k0).unwrap();
        let err = run_match(
            &ApertureSpec::rect(5.0),
            &spec,
            &lat,
            400.0,
            &MatchOptions::fresnel(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Wraparound { .. }), "{err}");
        assert!(err.is_numerical_guard());

        // Every component evanescent: the propagated field decays away.
        let lat = Lattice::new(64, 6.4).unwrap();
        let kx = lat.k()[20];
        let f = Field::from_fn(&lat, |x| num_complex::Complex64::from_polar(1.0, kx * x)).unwrap();
        let spec = DispersionSpec::de_broglie(PhysicalConstants::default(), 0.5 * kx).unwrap();
        let err =
            match_field(&f, &spec, 1e3, &MatchOptions::exact().with_edge_guard(None)).unwrap_err();
        assert!(matches!(err, Error::TotalEvanescence { .. }), "{err}");

        assert!(run_match(
            &ApertureSpec::rect(5.0),
            &spec,
            &Lattice::new(4096, 100.0).unwrap(),
            0.0,
            &MatchOptions::fresnel()
        )
        .is_err());
    }

    #[test]
    fn report_json_keys() {
        let (lat, k0) = fixture();
        let spec = DispersionSpec::de_broglie(PhysicalConstants::default(), k0).unwrap();
        let r = run_match(
            &ApertureSpec::gaussian(1.0),
            &spec,
            &lat,
            5.0,
            &MatchOptions::fresnel(),
        )
        .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            [
                "z",
                "k0",
                "v_g",
                "t",
                "l2_rel",
                "linf_peak",
                "evanescent_fraction",
                "verdict",
                "mode"
            ]
        );
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["mode"], "fresnel");
    }
}
