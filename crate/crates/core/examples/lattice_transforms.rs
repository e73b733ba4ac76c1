// The unitary centered transform: plane waves land in one bin, real even
// fields have real spectra, and the norm survives the round trip.

use num_complex::Complex64;
use wavematch::{Field, Lattice};

pub fn run_example() -> wavematch::Result<()> {
    let lattice = Lattice::new(1024, 64.0)?;
    println!(
        "n = {}, dx = {}, dk = {}, nyquist = {:.4}",
        lattice.n(),
        lattice.dx(),
        lattice.dk(),
        lattice.nyquist()
    );

    let bin = 37;
    let k = lattice.k()[bin];
    let wave = Field::from_fn(&lattice, |x| Complex64::from_polar(1.0, k * x))?;
    let spectrum = wave.forward();
    let peak = spectrum
        .values()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, _)| i)
        .unwrap();
    let leak: f64 = spectrum
        .values()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != bin)
        .map(|(_, v)| v.norm())
        .sum();
    println!("plane wave k = {k:.4}: peak bin {peak}, leakage {leak:.1e}");
    assert_eq!(peak, bin);
    assert!(leak < 1e-9);

    let bump =
        Field::from_fn(&lattice, |x| Complex64::new((-x * x / 2.0).exp(), 0.0))?.normalized()?;
    let spectrum = bump.forward();
    let max_im = spectrum
        .values()
        .iter()
        .map(|v| v.im.abs())
        .fold(0.0, f64::max);
    let parseval = (spectrum.power() * lattice.dx() - bump.norm_squared()).abs();
    let back = spectrum.inverse();
    let round_trip = bump
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("gaussian: max |Im F| = {max_im:.1e}, parseval gap {parseval:.1e}, round trip {round_trip:.1e}");
    assert!(max_im < 1e-12 && parseval < 1e-13 && round_trip < 1e-13);
    Ok(())
}

#[allow(dead_code)]
fn main() -> wavematch::Result<()> {
    run_example()
}
