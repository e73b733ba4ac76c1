// A slit of width a, released at t = 0, develops the sinc² pattern with
// zeros at x_n = n·2πħt/(ma). The grid is sized so that the fastest
// resolvable component, ħ·k_max·t/m, stays inside the domain.

use wavematch::apertures::build;
use wavematch::evolution::{evolve_spectral, fraunhofer_phase};
use wavematch::patterns::sinc2_pattern;
use wavematch::{extract_features, ApertureSpec, DispersionSpec, Lattice, PhysicalConstants};

pub fn run_example() -> wavematch::Result<()> {
    let consts = PhysicalConstants::default();
    let spec = DispersionSpec::de_broglie(consts, 1.0)?;
    let lattice = Lattice::new(32768, 1638.4)?;
    let (a, t) = (1.0, 10.0);
    println!(
        "a = {a}, t = {t}, far-field phase {:.4}, k_max reach {:.0} of {:.0}",
        fraunhofer_phase(&consts, a, t),
        lattice.nyquist() * consts.hbar * t / consts.m,
        lattice.extent() / 2.0
    );

    let f0 = build(&ApertureSpec::rect(a), &lattice)?;
    let density = evolve_spectral(&f0, &spec, t)?.density();
    let feats = extract_features(&density, &lattice)?;
    let oracle = extract_features(&sinc2_pattern(&lattice, a, &consts, t), &lattice)?;
    let spacing = 2.0 * std::f64::consts::PI * consts.hbar * t / (consts.m * a);
    for n in 1..=5 {
        let want = n as f64 * spacing;
        let got = feats.nearest_minimum(want).unwrap();
        let closed = oracle.nearest_minimum(want).unwrap();
        println!("zero {n}: evolved {got:9.4}  closed form {closed:9.4}  expected {want:9.4}");
        assert!((got - want).abs() <= lattice.dx());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> wavematch::Result<()> {
    run_example()
}
