// Sweeping one parameter from code, the same way `wavematch sweep` does:
// here the double-slit width, with the fringe spacing of each run set
// against the point-slit value.

use std::path::PathBuf;

use wavematch::cli::{sweep_rows, RawConfig};

const CONFIG: &str = r#"{
  "lattice": { "n": 8192, "extent": 204.8 },
  "dispersion": { "family": "de_broglie", "k0": 10.0 },
  "aperture": { "kind": "double_slit", "d": 2.0 },
  "run": { "z": 7.957747154594767, "mode": "fresnel" }
}"#;

pub fn run_example() -> wavematch::Result<()> {
    let raw = RawConfig::parse(CONFIG, "inline", PathBuf::new())?;
    let values = [0.2, 0.1, 0.05];
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>9}",
        "w", "linf", "spacing", "expected", "rel err"
    );
    let mut errs = Vec::new();
    for row in sweep_rows(&raw, "w", &values) {
        let row = row?;
        let (got, want) = (
            row.fringe_spacing.unwrap(),
            row.fringe_spacing_expected.unwrap(),
        );
        let err = (got - want).abs() / want;
        println!(
            "{:>6} {:>10.1e} {got:>10.5} {want:>10.5} {err:>9.2e}",
            row.value, row.report.linf_peak
        );
        errs.push(err);
    }
    assert!(errs.windows(2).all(|w| w[1] < w[0]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> wavematch::Result<()> {
    run_example()
}
