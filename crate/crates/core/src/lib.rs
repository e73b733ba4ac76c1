//! One-dimensional spectral wave propagation.
//!
//! A transverse wave packet evolved in time under a quadratic dispersion law
//! and a monochromatic field propagated in space with the Fresnel
//! angular-spectrum kernel produce the same density once `t = z / v_g`, for
//! De Broglie, electromagnetic and Klein-Gordon waves alike. This crate
//! implements both routes on a shared periodic [`Lattice`], the exact and
//! far-field variants of each, closed-form diffraction patterns to compare
//! against, and [`matching::run_match`], which performs the comparison.
//!
//! ```
//! use wavematch::{ApertureSpec, DispersionSpec, Lattice, MatchOptions, PhysicalConstants};
//!
//! let lattice = Lattice::new(1024, 50.0)?;
//! let spec = DispersionSpec::de_broglie(PhysicalConstants::default(), 8.0)?;
//! let report = wavematch::run_match(
//!     &ApertureSpec::gaussian(1.0),
//!     &spec,
//!     &lattice,
//!     10.0,
//!     &MatchOptions::fresnel(),
//! )?;
//! assert!(report.linf_peak < 1e-10);
//! # Ok::<(), wavematch::Error>(())
//! ```

pub mod apertures;
pub mod cli;
pub mod dispersion;
pub mod error;
pub mod evolution;
pub mod io;
pub mod lattice;
pub mod matching;
pub mod patterns;
pub mod propagation;

pub use apertures::ApertureSpec;
pub use dispersion::{DispersionSpec, Family, PhysicalConstants};
pub use error::{Error, Result};
pub use lattice::{Field, Lattice, Spectrum};
pub use matching::{compare_densities, run_match, MatchOptions, MatchReport, Verdict};
pub use patterns::{extract_features, PatternFeatures};
pub use propagation::PropagatorMode;
