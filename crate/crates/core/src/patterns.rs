//! Closed-form far-field patterns and the geometric features (extrema,
//! fringe spacing, central-lobe width) used to compare densities with them.

use crate::dispersion::PhysicalConstants;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Extrema whose prominence (height difference to the neighbouring extremum
/// of opposite kind) is below this fraction of the peak are treated as noise.
pub const MIN_PROMINENCE: f64 = 1e-6;

fn scale(constants: &PhysicalConstants, t: f64) -> f64 {
    constants.m / (2.0 * constants.hbar * t)
}

/// `sin²(u)/u²` with `u = (m a / 2ħt) x`, equal to 1 at `x = 0`.
pub fn sinc2_pattern(lattice: &Lattice, a: f64, constants: &PhysicalConstants, t: f64) -> Vec<f64> {
    let s = scale(constants, t) * a;
    lattice
        .x()
        .iter()
        .map(|&x| {
            let u = s * x;
            if u == 0.0 {
                1.0
            } else {
                let r = u.sin() / u;
                r * r
            }
        })
        .collect()
}

/// `cos²((m d / 2ħt) x)`.
pub fn cos2_pattern(lattice: &Lattice, d: f64, constants: &PhysicalConstants, t: f64) -> Vec<f64> {
    let s = scale(constants, t) * d;
    lattice.x().iter().map(|&x| (s * x).cos().powi(2)).collect()
}

/// Geometry of a sampled density.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PatternFeatures {
    /// All interior extrema, ascending.
    pub extrema_positions: Vec<f64>,
    pub maxima: Vec<f64>,
    pub minima: Vec<f64>,
    /// Mean distance between adjacent maxima; `None` with fewer than two.
    pub fringe_spacing: Option<f64>,
    /// Distance between the two minima bracketing the global maximum.
    pub central_peak_width: Option<f64>,
}

impl PatternFeatures {
    /// Mean spacing of the `2·half + 1` maxima closest to the origin.
    pub fn central_fringe_spacing(&self, half: usize) -> Option<f64> {
        let centre = self
            .maxima
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))?
            .0;
        let lo = centre.checked_sub(half)?;
        let hi = centre + half;
        if half == 0 || hi >= self.maxima.len() {
            return None;
        }
        Some((self.maxima[hi] - self.maxima[lo]) / (2 * half) as f64)
    }

    /// The minimum closest to `x`.
    pub fn nearest_minimum(&self, x: f64) -> Option<f64> {
        self.minima
            .iter()
            .cloned()
            .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
    }
}

/// Vertex offset (in samples) of the parabola through three equally spaced
/// values.
fn parabolic_offset(l: f64, c: f64, r: f64) -> f64 {
    let denom = l - 2.0 * c + r;
    if denom == 0.0 {
        0.0
    } else {
        (0.5 * (l - r) / denom).clamp(-0.5, 0.5)
    }
}

#[derive(Clone, Copy)]
struct Extremum {
    pos: f64,
    value: f64,
    is_max: bool,
}

/// Drops adjacent max/min pairs whose height difference is below `threshold`,
/// keeping the more extreme of the neighbours that become adjacent.
fn prune(candidates: Vec<Extremum>, threshold: f64) -> Vec<Extremum> {
    let mut kept: Vec<Extremum> = Vec::with_capacity(candidates.len());
    for e in candidates {
        match kept.last() {
            Some(top) if top.is_max != e.is_max && (top.value - e.value).abs() < threshold => {
                kept.pop();
                match kept.last_mut() {
                    Some(prev) => {
                        let more_extreme = if e.is_max {
                            e.value > prev.value
                        } else {
                            e.value < prev.value
                        };
                        if more_extreme {
                            *prev = e;
                        }
                    }
                    None => kept.push(e),
                }
            }
            Some(top) if top.is_max == e.is_max => {
                // Only reachable after a pop; keep the more extreme one.
                let more_extreme = if e.is_max {
                    e.value > top.value
                } else {
                    e.value < top.value
                };
                if more_extreme {
                    *kept.last_mut().unwrap() = e;
                }
            }
            _ => kept.push(e),
        }
    }
    kept
}

/// Finds local extrema from sign changes of the discrete derivative and
/// refines each with a three-point parabola. Wiggles with prominence below
/// [`MIN_PROMINENCE`] of the peak are ignored.
pub fn extract_features(density: &[f64], lattice: &Lattice) -> Result<PatternFeatures> {
    extract_features_with(density, lattice, MIN_PROMINENCE)
}

/// [`extract_features`] with an explicit relative prominence threshold.
pub fn extract_features_with(
    density: &[f64],
    lattice: &Lattice,
    min_prominence: f64,
) -> Result<PatternFeatures> {
    if density.len() != lattice.n() {
        return Err(Error::LengthMismatch {
            expected: lattice.n(),
            actual: density.len(),
        });
    }
    if let Some(index) = density.iter().position(|d| !d.is_finite() || *d < 0.0) {
        return Err(Error::param(
            "density",
            format!("sample {index} is negative or non-finite"),
        ));
    }
    let peak = density.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::Degenerate("all-zero density".into()));
    }

    let x = lattice.x();
    let dx = lattice.dx();
    let mut candidates = Vec::new();

    // Plateaus are walked over so that a flat run counts once, at its middle.
    let n = density.len();
    let mut i = 1;
    while i + 1 < n {
        let mut j = i;
        while j + 1 < n && density[j + 1] == density[i] {
            j += 1;
        }
        if j + 1 >= n {
            break;
        }
        let (before, here, after) = (density[i - 1], density[i], density[j + 1]);
        let is_max = here > before && here > after;
        let is_min = here < before && here < after;
        if is_max || is_min {
            let pos = if i == j {
                x[i] + parabolic_offset(before, here, after) * dx
            } else {
                0.5 * (x[i] + x[j])
            };
            candidates.push(Extremum {
                pos,
                value: here,
                is_max,
            });
        }
        i = j + 1;
    }

    let kept = prune(candidates, min_prominence * peak);
    let maxima: Vec<f64> = kept.iter().filter(|e| e.is_max).map(|e| e.pos).collect();
    let minima: Vec<f64> = kept.iter().filter(|e| !e.is_max).map(|e| e.pos).collect();
    let extrema_positions: Vec<f64> = kept.iter().map(|e| e.pos).collect();

    let fringe_spacing = (maxima.len() >= 2)
        .then(|| (maxima[maxima.len() - 1] - maxima[0]) / (maxima.len() - 1) as f64);

    // Minima on either side of the tallest maximum.
    let central_peak_width = kept
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_max)
        .max_by(|(_, a), (_, b)| a.value.total_cmp(&b.value))
        .and_then(|(idx, _)| {
            let left = kept[..idx].iter().rev().find(|e| !e.is_max)?;
            let right = kept[idx + 1..].iter().find(|e| !e.is_max)?;
            Some(right.pos - left.pos)
        });

    Ok(PatternFeatures {
        extrema_positions,
        maxima,
        minima,
        fringe_spacing,
        central_peak_width,
    })
}
