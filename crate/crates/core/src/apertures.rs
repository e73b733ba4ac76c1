//! Initial wave functions: the field just past the screen at `z = 0`, which is
//! also the packet at `t = 0`.
//!
//! Windows are box-filtered onto the grid: each sample carries the fraction of
//! its cell `[x - dx/2, x + dx/2]` covered by the opening. Interior samples are
//! exactly 1 and an edge falling on a sample gives it 1/2, so a window centered
//! at the origin samples to an even sequence.

use std::path::PathBuf;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io;
use crate::lattice::{Field, Lattice};

/// Number of standard deviations counted as a Gaussian's support.
pub const GAUSSIAN_SUPPORT_SIGMAS: f64 = 4.0;

/// Fraction of the extent that must stay empty on each side of the aperture.
pub const MARGIN_FRACTION: f64 = 0.25;

#[derive(Clone, Debug, PartialEq)]
pub enum ApertureSpec {
    /// Single slit of width `a` centered on the axis.
    Rect {
        a: f64,
    },
    /// Two slits of width `w` whose centers are `d` apart.
    DoubleSlit {
        d: f64,
        w: f64,
    },
    Gaussian {
        sigma: f64,
        x_center: f64,
    },
    FromFile {
        path: PathBuf,
    },
}

impl ApertureSpec {
    pub fn rect(a: f64) -> Self {
        ApertureSpec::Rect { a }
    }

    /// Double slit with the default slit width `d/20`.
    pub fn double_slit(d: f64) -> Self {
        ApertureSpec::DoubleSlit { d, w: d / 20.0 }
    }

    pub fn gaussian(sigma: f64) -> Self {
        ApertureSpec::Gaussian {
            sigma,
            x_center: 0.0,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ApertureSpec::Rect { .. } => "rect",
            ApertureSpec::DoubleSlit { .. } => "double_slit",
            ApertureSpec::Gaussian { .. } => "gaussian",
            ApertureSpec::FromFile { .. } => "from_file",
        }
    }

    fn check_params(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(
                    name,
                    format!("{v} must be finite and positive"),
                ))
            }
        };
        match *self {
            ApertureSpec::Rect { a } => positive("a", a),
            ApertureSpec::DoubleSlit { d, w } => {
                positive("w", w)?;
                positive("d", d)?;
                if d <= w {
                    return Err(Error::param(
                        "d",
                        format!("slit separation {d} must exceed slit width {w}"),
                    ));
                }
                Ok(())
            }
            ApertureSpec::Gaussian { sigma, x_center } => {
                positive("sigma", sigma)?;
                if !x_center.is_finite() {
                    return Err(Error::param("x_center", "must be finite"));
                }
                Ok(())
            }
            ApertureSpec::FromFile { .. } => Ok(()),
        }
    }

    /// Interval outside of which the aperture is (effectively) zero.
    /// `None` for file-loaded fields, whose support is measured after loading.
    pub fn support(&self) -> Option<(f64, f64)> {
        match *self {
            ApertureSpec::Rect { a } => Some((-a / 2.0, a / 2.0)),
            ApertureSpec::DoubleSlit { d, w } => Some((-(d + w) / 2.0, (d + w) / 2.0)),
            ApertureSpec::Gaussian { sigma, x_center } => {
                let r = GAUSSIAN_SUPPORT_SIGMAS * sigma;
                Some((x_center - r, x_center + r))
            }
            ApertureSpec::FromFile { .. } => None,
        }
    }

    /// Width of the region the aperture occupies.
    pub fn width(&self) -> Option<f64> {
        self.support().map(|(lo, hi)| hi - lo)
    }
}

/// Rejects supports that come closer than a quarter of the extent to either
/// edge of the periodic domain.
pub fn check_margin(lo: f64, hi: f64, lattice: &Lattice) -> Result<()> {
    let extent = lattice.extent();
    let limit = extent * (0.5 - MARGIN_FRACTION);
    // One ulp-scale slack so that a support of exactly L/2 is accepted.
    let slack = 1e-12 * extent;
    if lo < -limit - slack || hi > limit + slack {
        return Err(Error::ApertureMargin { lo, hi, extent });
    }
    Ok(())
}

/// Support of an arbitrary field: the span of samples whose density exceeds
/// `rel_floor` of the peak. `None` for an all-zero field.
pub fn measured_support(field: &Field, rel_floor: f64) -> Option<(f64, f64)> {
    let density = field.density();
    let peak = density.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return None;
    }
    let x = field.lattice().x();
    let above = |d: &f64| *d > rel_floor * peak;
    let first = density.iter().position(above)?;
    let last = density.iter().rposition(above)?;
    Some((x[first], x[last]))
}

/// Cell-averaged indicator of `[lo, hi]` at each sample.
fn window(lattice: &Lattice, lo: f64, hi: f64) -> impl Iterator<Item = f64> + '_ {
    let dx = lattice.dx();
    lattice.x().iter().map(move |&x| {
        let overlap = (x + dx / 2.0).min(hi) - (x - dx / 2.0).max(lo);
        (overlap / dx).clamp(0.0, 1.0)
    })
}

/// Builds the normalized initial field for `spec` on `lattice`.
pub fn build(spec: &ApertureSpec, lattice: &Lattice) -> Result<Field> {
    spec.check_params()?;
    if let Some((lo, hi)) = spec.support() {
        check_margin(lo, hi, lattice)?;
    }
    let real = |v: Vec<f64>| v.into_iter().map(|r| Complex64::new(r, 0.0)).collect();
    let field = match *spec {
        ApertureSpec::Rect { a } => {
            Field::new(lattice, real(window(lattice, -a / 2.0, a / 2.0).collect()))?
        }
        ApertureSpec::DoubleSlit { d, w } => {
            if w < 2.0 * lattice.dx() {
                return Err(Error::UnresolvedSlit {
                    width: w,
                    dx: lattice.dx(),
                });
            }
            let left = window(lattice, -d / 2.0 - w / 2.0, -d / 2.0 + w / 2.0);
            let right = window(lattice, d / 2.0 - w / 2.0, d / 2.0 + w / 2.0);
            Field::new(lattice, real(left.zip(right).map(|(l, r)| l + r).collect()))?
        }
        ApertureSpec::Gaussian { sigma, x_center } => Field::from_fn(lattice, |x| {
            let u = x - x_center;
            Complex64::new((-u * u / (4.0 * sigma * sigma)).exp(), 0.0)
        })?,
        ApertureSpec::FromFile { ref path } => {
            let field = io::load_field(path, lattice)?;
            if let Some((lo, hi)) = measured_support(&field, 1e-12) {
                check_margin(lo, hi, lattice)?;
            }
            field
        }
    };
    field.normalized()
}
