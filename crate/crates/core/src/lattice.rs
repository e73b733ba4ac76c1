//! Uniform 1-D sampling grid, its conjugate wavenumber grid, and the unitary
//! discrete Fourier pair used by every propagator in the crate.
//!
//! Positions are centered on the origin, `x_j = (j - n/2) dx`, so the grid
//! has a sample at `-L/2` but none at `+L/2`. Wavenumbers are stored in the
//! usual FFT wrap order: `k_j = 2π m_j / L` with `m_j = j` for `j < n/2` and
//! `m_j = j - n` otherwise, so the bin at `j = n/2` is the Nyquist alias `-π/dx`.
//!
//! The forward transform is
//!
//! ```text
//! F_m = n^{-1/2} Σ_j f_j exp(-i k_m x_j)
//! ```
//!
//! i.e. the `e^{-ikx}` sign convention with the physical (centered) positions
//! in the exponent. For even `n` the centering only contributes a factor
//! `(-1)^j` per bin, and real fields that are even in `x` have real spectra.
//!
//! Relation to the continuum transform `ψ̂(k) = (2π)^{-1/2} ∫ ψ(x) e^{-ikx} dx`:
//! a Riemann sum gives `ψ̂(k_m) ≈ dx √n / √(2π) · F_m`. Densities are normalized
//! as `Σ |ψ_j|² dx = 1`, the discrete counterpart of `∫ |ψ|² dx = 1`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

struct LatticeInner {
    n: usize,
    dx: f64,
    x: Vec<f64>,
    k: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

/// Uniform grid of `n` samples (a power of two) spanning `extent`.
///
/// Cloning is cheap; the sample tables and FFT plans are shared.
#[derive(Clone)]
pub struct Lattice {
    inner: Arc<LatticeInner>,
}

impl Lattice {
    pub fn new(n: usize, extent: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidLattice(format!(
                "sample count {n} is not a power of two >= 2"
            )));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "extent {extent} must be finite and positive"
            )));
        }
        let dx = extent / n as f64;
        let half = (n / 2) as isize;
        let x = (0..n).map(|j| (j as isize - half) as f64 * dx).collect();
        let dk = 2.0 * PI / extent;
        let k = (0..n)
            .map(|j| {
                let m = if (j as isize) < half {
                    j as isize
                } else {
                    j as isize - n as isize
                };
                m as f64 * dk
            })
            .collect();

        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);

        Ok(Self {
            inner: Arc::new(LatticeInner {
                n,
                dx,
                x,
                k,
                fft,
                ifft,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn dx(&self) -> f64 {
        self.inner.dx
    }

    pub fn extent(&self) -> f64 {
        self.inner.n as f64 * self.inner.dx
    }

    /// Spectral bin width `2π/L`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.extent()
    }

    /// `π/dx`, the magnitude of the aliased bin.
    pub fn nyquist(&self) -> f64 {
        PI / self.inner.dx
    }

    /// Sample positions in ascending order.
    pub fn x(&self) -> &[f64] {
        &self.inner.x
    }

    /// Wavenumbers in FFT wrap order.
    pub fn k(&self) -> &[f64] {
        &self.inner.k
    }

    /// Two lattices are compatible when they sample the same grid.
    pub fn same_grid(&self, other: &Lattice) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n && self.inner.dx == other.inner.dx)
    }

    fn transform(&self, values: &[Complex64], forward: bool) -> Vec<Complex64> {
        let n = self.inner.n;
        let scale = 1.0 / (n as f64).sqrt();
        let mut buf: Vec<Complex64> = if forward {
            values.to_vec()
        } else {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| if j % 2 == 0 { *v } else { -*v })
                .collect()
        };
        if forward {
            self.inner.fft.process(&mut buf);
        } else {
            self.inner.ifft.process(&mut buf);
        }
        for (j, v) in buf.iter_mut().enumerate() {
            // Centering phase exp(iπ m_j) on the spectral side of the pair.
            let s = if forward && j % 2 == 1 { -scale } else { scale };
            *v *= s;
        }
        buf
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("n", &self.inner.n)
            .field("dx", &self.inner.dx)
            .finish()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.same_grid(other)
    }
}

fn check_samples(lattice: &Lattice, values: &[Complex64]) -> Result<()> {
    if values.len() != lattice.n() {
        return Err(Error::LengthMismatch {
            expected: lattice.n(),
            actual: values.len(),
        });
    }
    if let Some(index) = values
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

/// Complex transverse wave function sampled on a [`Lattice`].
#[derive(Clone, Debug)]
pub struct Field {
    lattice: Lattice,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(lattice: &Lattice, values: Vec<Complex64>) -> Result<Self> {
        check_samples(lattice, &values)?;
        Ok(Self {
            lattice: lattice.clone(),
            values,
        })
    }

    pub fn zeros(lattice: &Lattice) -> Self {
        Self {
            lattice: lattice.clone(),
            values: vec![Complex64::new(0.0, 0.0); lattice.n()],
        }
    }

    pub fn from_fn(lattice: &Lattice, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(lattice, lattice.x().iter().map(|&x| f(x)).collect())
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `|ψ_j|²` per sample.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `Σ |ψ_j|² dx`.
    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.lattice.dx()
    }

    /// Rescales to unit `norm_squared`. A zero field is a degenerate input.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_squared();
        if norm <= 0.0 {
            return Err(Error::Degenerate(
                "cannot normalize a field with zero norm".into(),
            ));
        }
        let s = 1.0 / norm.sqrt();
        Ok(Self {
            lattice: self.lattice.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        })
    }

    pub fn forward(&self) -> Spectrum {
        Spectrum {
            lattice: self.lattice.clone(),
            values: self.lattice.transform(&self.values, true),
        }
    }

    pub(crate) fn map_values(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        Self {
            lattice: self.lattice.clone(),
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(j, v)| f(j, *v))
                .collect(),
        }
    }
}

/// Wavenumber-space amplitudes, indexed like [`Lattice::k`].
#[derive(Clone, Debug)]
pub struct Spectrum {
    lattice: Lattice,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(lattice: &Lattice, values: Vec<Complex64>) -> Result<Self> {
        check_samples(lattice, &values)?;
        Ok(Self {
            lattice: lattice.clone(),
            values,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn inverse(&self) -> Field {
        Field {
            lattice: self.lattice.clone(),
            values: self.lattice.transform(&self.values, false),
        }
    }

    /// Multiplies every bin by `phase(k)`.
    pub fn apply(&self, phase: impl Fn(f64) -> Complex64) -> Self {
        Self {
            lattice: self.lattice.clone(),
            values: self
                .values
                .iter()
                .zip(self.lattice.k())
                .map(|(v, &k)| v * phase(k))
                .collect(),
        }
    }

    /// Total spectral power `Σ |F_m|²`.
    pub fn power(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Fraction of spectral power in bins with `|k| > cutoff`.
    pub fn power_fraction_beyond(&self, cutoff: f64) -> f64 {
        let total = self.power();
        if total == 0.0 {
            return 0.0;
        }
        let outside: f64 = self
            .values
            .iter()
            .zip(self.lattice.k())
            .filter(|(_, k)| k.abs() > cutoff)
            .map(|(v, _)| v.norm_sqr())
            .sum();
        outside / total
    }

    /// Linear interpolation between neighbouring bins at an arbitrary `k`.
    /// Returns zero beyond the Nyquist magnitude.
    pub fn interpolate(&self, k: f64) -> Complex64 {
        let n = self.lattice.n();
        if !k.is_finite() || k.abs() > self.lattice.nyquist() {
            return Complex64::new(0.0, 0.0);
        }
        let pos = k / self.lattice.dk();
        let lo = pos.floor();
        let frac = pos - lo;
        let wrap = |m: isize| m.rem_euclid(n as isize) as usize;
        let a = self.values[wrap(lo as isize)];
        let b = self.values[wrap(lo as isize + 1)];
        a * (1.0 - frac) + b * frac
    }
}
