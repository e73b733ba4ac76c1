// The central check: evolving a packet for t = z / v_g under the paraxial
// law gives the same density as propagating the field to z, for De Broglie,
// electromagnetic and Klein-Gordon waves. Evolving for the wrong time does
// not.

use wavematch::{
    run_match, ApertureSpec, DispersionSpec, Family, Lattice, MatchOptions, PhysicalConstants,
    Verdict,
};

pub fn run_example() -> wavematch::Result<()> {
    let lattice = Lattice::new(4096, 200.0)?;
    let aperture = ApertureSpec::rect(20.0 * 2.0 * std::f64::consts::PI / 6.0);
    let consts = PhysicalConstants::new(1.0, 1.0, 1.0)?;
    let z = 30.0;
    let loose = MatchOptions::fresnel().with_edge_guard(None);

    for family in [
        Family::DeBroglie,
        Family::ElectromagneticExact,
        Family::KleinGordonExact,
    ] {
        let spec = DispersionSpec::new(family, consts, Some(6.0))?;
        let r = run_match(&aperture, &spec, &lattice, z, &loose)?;
        println!(
            "{:<22} v_g = {:.6}  t = {:8.4}  linf = {:.1e}  {:?}",
            family.name(),
            r.v_g,
            r.t,
            r.linf_peak,
            r.verdict
        );
        assert_eq!(r.verdict, Verdict::Pass);
    }

    let spec = DispersionSpec::de_broglie(consts, 6.0)?;
    let off = run_match(&aperture, &spec, &lattice, z, &loose.with_time_scale(0.9))?;
    println!(
        "t = 0.9 z/v_g: linf = {:.3e} {:?}",
        off.linf_peak, off.verdict
    );
    assert_eq!(off.verdict, Verdict::Fail);

    let exact = run_match(
        &aperture,
        &spec,
        &lattice,
        z,
        &MatchOptions::exact().with_edge_guard(None),
    )?;
    println!(
        "exact propagator: linf = {:.3e} {:?}",
        exact.linf_peak, exact.verdict
    );
    println!("{}", serde_json::to_string_pretty(&exact).unwrap());
    Ok(())
}

#[allow(dead_code)]
fn main() -> wavematch::Result<()> {
    run_example()
}
