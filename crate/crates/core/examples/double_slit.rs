// Two slits a distance d apart give cos² fringes spaced 2πħt/(md). Finite
// slit width w adds a sinc envelope that drags the maxima inwards, so the
// measured spacing approaches the point-slit value as w shrinks.

use std::f64::consts::PI;

use wavematch::apertures::build;
use wavematch::evolution::evolve_spectral;
use wavematch::{extract_features, ApertureSpec, DispersionSpec, Lattice, PhysicalConstants};

pub fn run_example() -> wavematch::Result<()> {
    let consts = PhysicalConstants::default();
    let k0 = 10.0;
    let spec = DispersionSpec::de_broglie(consts, k0)?;
    let lattice = Lattice::new(8192, 204.8)?;
    let d = 2.0;
    // Chosen so that the Nyquist component reaches x = 100 < L/2.
    let t = 2.5 * consts.m * d / (2.0 * PI * consts.hbar);
    let expected = 2.0 * PI * consts.hbar * t / (consts.m * d);

    println!("d = {d}, t = {t:.4}, expected spacing {expected:.5}");
    let mut last = f64::INFINITY;
    for w in [d / 10.0, d / 20.0, d / 40.0] {
        let f0 = build(&ApertureSpec::DoubleSlit { d, w }, &lattice)?;
        let density = evolve_spectral(&f0, &spec, t)?.density();
        let spacing = extract_features(&density, &lattice)?
            .central_fringe_spacing(3)
            .unwrap();
        let err = (spacing - expected).abs() / expected;
        println!("w = {w:<5}: spacing {spacing:.5}, relative error {err:.2e}");
        assert!(err < last);
        last = err;
    }
    assert!(last < 1e-2);
    Ok(())
}

#[allow(dead_code)]
fn main() -> wavematch::Result<()> {
    run_example()
}
