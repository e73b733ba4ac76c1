// A free Gaussian packet spreads as σ(t) = σ₀ √(1 + (ħt / 2mσ₀²)²). The
// spectral evolution reproduces that, and the real-space kernel agrees with
// the spectral result.

use wavematch::apertures::build;
use wavematch::evolution::{evolve_propagator, evolve_spectral};
use wavematch::{ApertureSpec, DispersionSpec, Field, Lattice, PhysicalConstants};

fn rms_width(f: &Field) -> f64 {
    let d = f.density();
    let x = f.lattice().x();
    let total: f64 = d.iter().sum();
    let mean: f64 = d.iter().zip(x).map(|(p, x)| p * x).sum::<f64>() / total;
    (d.iter()
        .zip(x)
        .map(|(p, x)| p * (x - mean).powi(2))
        .sum::<f64>()
        / total)
        .sqrt()
}

pub fn run_example() -> wavematch::Result<()> {
    let consts = PhysicalConstants::new(1.0, 2.0, 1.0)?;
    let spec = DispersionSpec::de_broglie(consts, 4.0)?;
    let lattice = Lattice::new(2048, 80.0)?;
    let sigma0 = 0.5;
    let f0 = build(&ApertureSpec::gaussian(sigma0), &lattice)?;

    println!(
        "{:>6} {:>10} {:>10} {:>9}",
        "t", "sigma", "expected", "norm-1"
    );
    for t in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let f = evolve_spectral(&f0, &spec, t)?;
        let s = consts.hbar * t / (2.0 * consts.m * sigma0 * sigma0);
        let expected = sigma0 * (1.0 + s * s).sqrt();
        let width = rms_width(&f);
        println!(
            "{t:>6} {width:>10.6} {expected:>10.6} {:>9.1e}",
            f.norm_squared() - 1.0
        );
        assert!((width - expected).abs() < 1e-6 * expected);
    }

    // The quadrature is O(n²), so it runs on a smaller grid.
    let small = Lattice::new(1024, 30.0)?;
    let g0 = build(&ApertureSpec::gaussian(sigma0), &small)?;
    let t = 1.0;
    let quad = evolve_propagator(&g0, &consts, t)?;
    let fft = evolve_spectral(&g0, &spec, t)?;
    let num: f64 = quad
        .values()
        .iter()
        .zip(fft.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = fft.values().iter().map(|v| v.norm_sqr()).sum();
    let rel = (num / den).sqrt();
    println!("kernel quadrature vs spectral at t = {t}: relative L2 {rel:.2e}");
    assert!(rel < 1e-3);
    Ok(())
}

#[allow(dead_code)]
fn main() -> wavematch::Result<()> {
    run_example()
}
