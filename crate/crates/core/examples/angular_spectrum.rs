// Propagating a monochromatic field with the exact angular-spectrum kernel
// and with its Fresnel approximation. Narrow spectra barely notice the
// difference; wide ones do. The far-field limit is read straight off the
// spectrum.

use wavematch::apertures::build;
use wavematch::matching::compare_densities;
use wavematch::propagation::{
    evanescent_fraction, propagate_exact, propagate_fraunhofer, propagate_fresnel,
};
use wavematch::{extract_features, ApertureSpec, Lattice};

pub fn run_example() -> wavematch::Result<()> {
    let lattice = Lattice::new(8192, 400.0)?;
    let k0 = 2.0 * std::f64::consts::PI;
    let z = 40.0;

    println!("{:>6} {:>12} {:>12}", "sigma", "linf gap", "evanescent");
    let mut gaps = Vec::new();
    for sigma in [0.25, 0.5, 1.0, 2.0] {
        let f0 = build(&ApertureSpec::gaussian(sigma), &lattice)?;
        let exact = propagate_exact(&f0, k0, z)?.density();
        let fresnel = propagate_fresnel(&f0, k0, z)?.density();
        let gap = compare_densities(&exact, &fresnel)?.linf_peak;
        println!(
            "{sigma:>6} {gap:>12.3e} {:>12.3e}",
            evanescent_fraction(&f0, k0)
        );
        gaps.push(gap);
    }
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));

    // Slit of width 1 at k0 = 10: far-field phase k0 a² / 2z = 0.025.
    let fine = Lattice::new(16384, 819.2)?;
    let (k0, z, a) = (10.0, 200.0, 1.0);
    let pattern = propagate_fraunhofer(&build(&ApertureSpec::rect(a), &fine)?, k0, z)?;
    let zero = extract_features(&pattern.density, &fine)?
        .nearest_minimum(2.0 * std::f64::consts::PI * z / (k0 * a))
        .unwrap();
    println!(
        "fraunhofer: first zero at {zero:.4} (valid = {}, phase {:.4})",
        pattern.valid, pattern.aperture_phase
    );
    assert!(pattern.valid);
    Ok(())
}

#[allow(dead_code)]
fn main() -> wavematch::Result<()> {
    run_example()
}
