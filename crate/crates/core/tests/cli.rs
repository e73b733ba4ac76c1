use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use wavematch::{extract_features, Lattice};

const RECT: &str = r#"{
  "lattice.n": 4096,
  "lattice.extent": 200.0,
  "dispersion.family": "de_broglie",
  "dispersion.k0": 6.283185307179586,
  "aperture.kind": "rect",
  "aperture.a": 20.0,
  "run.z": 500.0,
  "run.edge_guard": null
}"#;

// Fringe spacing 2.5 at z = 2.5 k0 d / 2π.
const DOUBLE: &str = r#"{
  "lattice": { "n": 8192, "extent": 204.8 },
  "dispersion": { "family": "de_broglie", "k0": 10.0 },
  "aperture": { "kind": "double_slit", "d": 2.0 },
  "run": { "z": 7.957747154594767 }
}"#;

// Far field of a unit slit at k0 = 10: zeros every 2πz/(k0 a) = 62.83.
const FAR: &str = r#"{
  "lattice.n": 32768,
  "lattice.extent": 1638.4,
  "dispersion.k0": 1.0,
  "aperture.kind": "rect",
  "aperture.a": 1.0,
  "run.t": 10.0,
  "run.z": 10.0
}"#;

struct Run {
    dir: TempDir,
    out: Output,
}

impl Run {
    fn code(&self) -> i32 {
        self.out.status.code().unwrap()
    }
    fn stdout(&self) -> String {
        String::from_utf8_lossy(&self.out.stdout).into_owned()
    }
    fn stderr(&self) -> String {
        String::from_utf8_lossy(&self.out.stderr).into_owned()
    }
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join("out").join(name)
    }
    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.path(name)).unwrap()
    }
}

fn wavematch(config: &str, args: &[&str]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wavematch"))
        .args(&args[..1])
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .args(&args[1..])
        .output()
        .unwrap();
    Run { dir, out }
}

/// `x` and `density` columns of a CSV written by the CLI.
fn density_column(path: &Path) -> Vec<f64> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .unwrap();
    let headers = rdr.headers().unwrap().clone();
    let col = headers.iter().position(|h| h == "density").unwrap();
    rdr.records()
        .map(|r| r.unwrap()[col].parse().unwrap())
        .collect()
}

fn sweep_column(text: &str, name: &str) -> Vec<String> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let col = rdr
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == name)
        .unwrap();
    rdr.records().map(|r| r.unwrap()[col].to_string()).collect()
}

#[test]
fn match_passes_and_writes_report() {
    let run = wavematch(RECT, &["match"]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let report: Value = serde_json::from_str(&run.read("report.json")).unwrap();
    let keys: Vec<_> = report.as_object().unwrap().keys().cloned().collect();
    assert_eq!(
        keys,
        [
            "z",
            "k0",
            "v_g",
            "t",
            "l2_rel",
            "linf_peak",
            "evanescent_fraction",
            "verdict",
            "mode"
        ]
    );
    assert_eq!(report["verdict"], "pass");
    assert!(report["linf_peak"].as_f64().unwrap() <= 1e-9);
    let resolved: Value = serde_json::from_str(&run.read("resolved_config.json")).unwrap();
    assert_eq!(resolved["run.tolerance"], 1e-9);
    assert!(run.stdout().contains("\"verdict\": \"pass\""));
}

#[test]
fn match_every_family() {
    for (family, extra) in [
        ("electromagnetic_paraxial", r#""constants.c": 3.0,"#),
        ("electromagnetic_exact", ""),
        ("klein_gordon_exact", r#""constants.m": 0.5,"#),
    ] {
        let cfg = RECT.replace(
            r#""dispersion.family": "de_broglie","#,
            &format!(r#""dispersion.family": "{family}", {extra}"#),
        );
        let run = wavematch(&cfg, &["match"]);
        assert_eq!(run.code(), 0, "{family}: {}", run.stderr());
    }
}

#[test]
fn wrong_time_fails_with_exit_1() {
    let run = wavematch(DOUBLE, &["match", "--override", "run.time_scale=0.9"]);
    assert_eq!(run.code(), 1, "{}", run.stderr());
    let report: Value = serde_json::from_str(&run.read("report.json")).unwrap();
    assert_eq!(report["verdict"], "fail");
    assert!(report["linf_peak"].as_f64().unwrap() >= 1e-3);
}

#[test]
fn tolerance_flag_is_applied() {
    let run = wavematch(
        DOUBLE,
        &[
            "match",
            "--override",
            "run.time_scale=0.9",
            "--tolerance",
            "10",
        ],
    );
    assert_eq!(run.code(), 0, "{}", run.stderr());
}

#[test]
fn config_errors_exit_2_and_name_the_key() {
    let run = wavematch(&RECT.replace("\"run.z\"", "\"run.zed\""), &["match"]);
    assert_eq!(run.code(), 2);
    assert!(
        run.stderr().contains("`run.zed`") && run.stderr().contains("line 8"),
        "{}",
        run.stderr()
    );

    let run = wavematch(RECT, &["match", "--override", "lattice.n=4000"]);
    assert_eq!(run.code(), 2);
    assert!(
        run.stderr().contains("`lattice.n` (--override)"),
        "{}",
        run.stderr()
    );

    let run = wavematch("{ \"lattice.n\": 4096,\n  oops }", &["match"]);
    assert_eq!(run.code(), 2);
    assert!(run.stderr().contains("line 2"), "{}", run.stderr());

    let run = wavematch(
        &DOUBLE.replace("\"d\": 2.0", "\"d\": 2.0, \"w\": 0.01"),
        &["match"],
    );
    assert_eq!(run.code(), 2);
    assert!(run.stderr().contains("`aperture.w`"), "{}", run.stderr());
}

#[test]
fn wraparound_guard_exits_3() {
    let cfg = RECT
        .replace("\n  \"run.edge_guard\": null", "")
        .replace("\"run.z\": 500.0,", "\"run.z\": 500.0");
    let run = wavematch(&cfg, &["match"]);
    assert_eq!(run.code(), 3, "{}", run.stderr());
    assert!(run.stderr().contains("wraparound"), "{}", run.stderr());
    let run = wavematch(&cfg, &["evolve"]);
    assert_eq!(run.code(), 3, "{}", run.stderr());
}

#[test]
fn evolve_at_zero_time_returns_the_aperture() {
    let run = wavematch(RECT, &["evolve", "--override", "run.t=0"]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    assert!(run.stdout().contains("norm drift"));
    let field = run.read("field.csv");
    assert!(
        field.starts_with("# config: {\"lattice.n\":4096"),
        "{}",
        &field[..80]
    );
    let d = density_column(&run.path("density.csv"));
    let lat = Lattice::new(4096, 200.0).unwrap();
    let inside = d[lat.n() / 2];
    let overlap = |x: f64| {
        ((x + lat.dx() / 2.0).min(10.0) - (x - lat.dx() / 2.0).max(-10.0)).max(0.0) / lat.dx()
    };
    let energy: f64 = lat.x().iter().map(|&x| overlap(x).powi(2)).sum::<f64>() * lat.dx();
    assert!(
        (inside - 1.0 / energy).abs() < 1e-14,
        "{inside} vs {}",
        1.0 / energy
    );
    // Cells straddling an edge carry their overlap fraction.
    for (x, d) in lat.x().iter().zip(&d) {
        if x.abs() < 10.0 - lat.dx() / 2.0 {
            assert_eq!(*d, inside, "x = {x}");
        } else if x.abs() > 10.0 + lat.dx() / 2.0 {
            assert_eq!(*d, 0.0, "x = {x}");
        } else {
            assert!(*d > 0.0 && *d < inside, "x = {x}");
        }
    }
    let norm: f64 = d.iter().sum::<f64>() * lat.dx();
    assert!((norm - 1.0).abs() < 1e-14);
}

#[test]
fn propagate_at_zero_distance_is_identity() {
    let a = wavematch(RECT, &["propagate", "--override", "run.z=0"]);
    let b = wavematch(RECT, &["evolve", "--override", "run.t=0"]);
    assert_eq!(a.code(), 0, "{}", a.stderr());
    let strip = |s: String| {
        s.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(a.read("field.csv")), strip(b.read("field.csv")));
}

#[test]
fn exact_and_fresnel_propagation_differ_for_wide_angles() {
    let cfg = r#"{"lattice.n": 8192, "lattice.extent": 400.0, "dispersion.k0": 6.283185307179586,
        "aperture.kind": "gaussian", "aperture.sigma": 0.25, "run.z": 40.0,
        "run.edge_guard": null}"#;
    let e = wavematch(cfg, &["propagate", "--override", "run.mode=exact"]);
    let f = wavematch(cfg, &["propagate"]);
    assert_eq!((e.code(), f.code()), (0, 0), "{}{}", e.stderr(), f.stderr());
    let m = wavematch::compare_densities(
        &density_column(&e.path("density.csv")),
        &density_column(&f.path("density.csv")),
    )
    .unwrap();
    assert!(m.l2_rel >= 1e-2, "{}", m.l2_rel);
}

#[test]
fn evolved_slit_matches_closed_form_pattern() {
    let evolved = wavematch(FAR, &["evolve"]);
    let pattern = wavematch(FAR, &["pattern"]);
    assert_eq!(
        (evolved.code(), pattern.code()),
        (0, 0),
        "{}{}",
        evolved.stderr(),
        pattern.stderr()
    );
    assert!(pattern.read("pattern.csv").lines().nth(1).unwrap() == "x,density");
    let lat = Lattice::new(32768, 1638.4).unwrap();
    let got = extract_features(&density_column(&evolved.path("density.csv")), &lat).unwrap();
    let want = extract_features(&density_column(&pattern.path("pattern.csv")), &lat).unwrap();
    for n in 1..=5 {
        let x = n as f64 * 2.0 * PI;
        let a = got.nearest_minimum(x * 10.0).unwrap();
        let b = want.nearest_minimum(x * 10.0).unwrap();
        assert!((a - b).abs() <= lat.dx(), "zero {n}: {a} vs {b}");
    }
}

#[test]
fn evolved_double_slit_shows_fringes() {
    let run = wavematch(DOUBLE, &["evolve"]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let lat = Lattice::new(8192, 204.8).unwrap();
    let spacing = extract_features(&density_column(&run.path("density.csv")), &lat)
        .unwrap()
        .central_fringe_spacing(3)
        .unwrap();
    assert!((spacing - 2.5).abs() / 2.5 < 1e-2, "{spacing}");
}

#[test]
fn pattern_needs_a_closed_form() {
    let cfg = FAR.replace(
        "\"aperture.kind\": \"rect\",\n  \"aperture.a\": 1.0",
        "\"aperture.kind\": \"gaussian\", \"aperture.sigma\": 1.0",
    );
    let run = wavematch(&cfg, &["pattern"]);
    assert_eq!(run.code(), 2, "{}", run.stderr());
}

#[test]
fn outputs_are_deterministic() {
    for cmd in [
        &["match"][..],
        &["evolve"],
        &["sweep", "--param", "w", "--values", "0.2,0.1"],
    ] {
        let a = wavematch(DOUBLE, cmd);
        let b = wavematch(DOUBLE, cmd);
        assert_eq!(a.code(), b.code());
        for name in ["report.json", "field.csv", "density.csv", "sweep.csv"] {
            if a.path(name).exists() {
                assert_eq!(
                    fs::read(a.path(name)).unwrap(),
                    fs::read(b.path(name)).unwrap(),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn sweep_width_converges_to_point_slits() {
    let run = wavematch(
        DOUBLE,
        &["sweep", "--param", "w", "--values", "0.2, 0.1, 0.05"],
    );
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let table = run.read("sweep.csv");
    assert!(table.starts_with("# config: "));
    assert_eq!(
        sweep_column(&table, "value"),
        [
            "2.0000000000000001e-1",
            "1.0000000000000001e-1",
            "5.0000000000000003e-2"
        ]
    );
    let got: Vec<f64> = sweep_column(&table, "fringe_spacing")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let want: Vec<f64> = sweep_column(&table, "fringe_spacing_expected")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let errs: Vec<f64> = got
        .iter()
        .zip(&want)
        .map(|(g, w)| (g - w).abs() / w)
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn sweep_distance_doubling_doubles_spacing() {
    let z = 2.5 * 10.0 * 2.0 / (2.0 * PI) / 2.0;
    let values = format!("{},{}", 2.0 * z, z);
    let run = wavematch(DOUBLE, &["sweep", "--param", "z", "--values", &values]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let s: Vec<f64> = sweep_column(&run.read("sweep.csv"), "fringe_spacing")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert!((s[0] / s[1] - 2.0).abs() <= 2e-3, "{s:?}");
}

#[test]
fn sweep_rejects_bad_input() {
    for args in [
        &["sweep", "--param", "w", "--values", ""][..],
        &["sweep", "--param", "w", "--values", "0.1,abc"],
        &["sweep", "--param", "colour", "--values", "1"],
    ] {
        let run = wavematch(DOUBLE, args);
        assert_eq!(run.code(), 2, "{args:?}: {}", run.stderr());
    }
}

#[test]
fn sweep_stops_at_first_bad_value() {
    let run = wavematch(
        DOUBLE,
        &["sweep", "--param", "w", "--values", "0.2,0.001,0.1"],
    );
    assert_eq!(run.code(), 2, "{}", run.stderr());
    let table = run.read("sweep.csv");
    assert_eq!(sweep_column(&table, "value").len(), 1);
    assert!(table.contains("# aborted at w = 0.001"), "{table}");
}
