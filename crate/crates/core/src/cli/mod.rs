//! The `wavematch` command line.
//!
//! Every subcommand reads a [`config`] file, applies `--override key=value`
//! pairs in order, resolves, runs, and writes into `--out`. Exit codes:
//! 0 success or pass, 1 verdict fail, 2 bad config or input, 3 numerical
//! guard tripped.

pub mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::Value;

pub use config::{ExperimentConfig, RawConfig};

use crate::apertures::{self, ApertureSpec};
use crate::dispersion::PhysicalConstants;
use crate::error::{Error, Result};
use crate::evolution::evolve_spectral;
use crate::io::{self, fmt_f64};
use crate::matching::{self, match_field, MatchReport, Verdict};
use crate::patterns::{self, extract_features};
use crate::propagation::{evanescent_fraction, propagate};

/// Sweepable parameters and the config keys they set.
pub const SWEEP_PARAMS: &[(&str, &str)] = &[
    ("a", "aperture.a"),
    ("d", "aperture.d"),
    ("w", "aperture.w"),
    ("z", "run.z"),
    ("k0", "dispersion.k0"),
    ("sigma", "aperture.sigma"),
];

/// Maxima on each side of the centre used for the sweep's fringe spacing.
const FRINGE_HALF_WINDOW: usize = 3;

#[derive(Debug, Parser)]
#[command(
    name = "wavematch",
    version,
    about = "Spectral wave-packet evolution vs paraxial propagation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the aperture in time; writes field and density CSVs.
    Evolve(Common),
    /// Propagate the aperture to `run.z`; writes field and density CSVs.
    Propagate(Common),
    /// Compare evolution at t = z/v_g with propagation to z; writes a JSON report.
    Match(Common),
    /// Closed-form far-field pattern of a rect or double-slit aperture.
    Pattern(Common),
    /// One match per value of a parameter; writes a CSV table.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Shorthand for `--override run.tolerance=<float>`.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// One of a, d, w, z, k0, sigma.
    #[arg(long)]
    pub param: String,
    /// Comma-separated values, run and reported in this order.
    #[arg(long, allow_hyphen_values = true)]
    pub values: String,
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerdictFail,
}

pub fn exit_code(result: &Result<Outcome>) -> u8 {
    match result {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::VerdictFail) => 1,
        Err(e)
            if e.is_numerical_guard()
                || matches!(e, Error::Degenerate(_) | Error::NonFinite { .. }) =>
        {
            3
        }
        Err(_) => 2,
    }
}

/// Parses `std::env::args`, runs, reports errors on stderr.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&result))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Evolve(c) => cmd_evolve(&load(c)?, &prepare_out(&c.out)?),
        Command::Propagate(c) => cmd_propagate(&load(c)?, &prepare_out(&c.out)?),
        Command::Match(c) => cmd_match(&load(c)?, &prepare_out(&c.out)?),
        Command::Pattern(c) => cmd_pattern(&load(c)?, &prepare_out(&c.out)?),
        Command::Sweep(s) => {
            let raw = load_raw(&s.common)?;
            let values = parse_values(&s.values)?;
            cmd_sweep(&raw, &s.param, &values, &prepare_out(&s.common.out)?)
        }
    }
}

fn load_raw(c: &Common) -> Result<RawConfig> {
    let mut raw = RawConfig::from_file(&c.config)?;
    for o in &c.overrides {
        raw.apply_override(o)?;
    }
    if let Some(tol) = c.tolerance {
        raw.set("run.tolerance", tol.into(), "--tolerance");
    }
    Ok(raw)
}

fn load(c: &Common) -> Result<ExperimentConfig> {
    load_raw(c)?.resolve()
}

fn prepare_out(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::Config(format!("--out {}: {e}", dir.display())))?;
    Ok(dir.to_path_buf())
}

fn header(cfg: &ExperimentConfig) -> String {
    format!("config: {}", cfg.resolved_json())
}

pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Config(format!("--values: `{s}` is not a finite number")))
        })
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(Error::Config("--values: empty value list".into()));
    }
    Ok(values)
}

pub fn cmd_evolve(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let t = cfg.time()?;
    let field0 = apertures::build(&cfg.aperture, &cfg.lattice)?;
    let evolved = evolve_spectral(&field0, &cfg.dispersion, t)?;
    let density = evolved.density();
    matching::wraparound_guard(&density, cfg.match_options.edge_guard)?;
    let drift = (evolved.norm_squared() - field0.norm_squared()).abs();
    write_field_outputs(cfg, out, &evolved, &density)?;
    println!("t = {t}");
    println!("norm drift = {drift:e}");
    Ok(Outcome::Success)
}

pub fn cmd_propagate(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let z = cfg.require_z()?;
    let k0 = cfg.k0()?;
    let field0 = apertures::build(&cfg.aperture, &cfg.lattice)?;
    let mode = cfg.match_options.mode;
    let propagated = propagate(&field0, k0, z, mode)?;
    let density = propagated.density();
    if density.iter().all(|d| *d == 0.0) {
        return Err(Error::TotalEvanescence {
            evanescent_fraction: evanescent_fraction(&field0, k0),
        });
    }
    matching::wraparound_guard(&density, cfg.match_options.edge_guard)?;
    write_field_outputs(cfg, out, &propagated, &density)?;
    println!("z = {z} ({})", mode.name());
    println!(
        "evanescent fraction = {:e}",
        evanescent_fraction(&field0, k0)
    );
    Ok(Outcome::Success)
}

fn write_field_outputs(
    cfg: &ExperimentConfig,
    out: &Path,
    field: &crate::Field,
    density: &[f64],
) -> Result<()> {
    let h = header(cfg);
    io::write_field_file(&out.join(&cfg.output.field), field, Some(&h))?;
    io::write_density_file(
        &out.join(&cfg.output.density),
        &cfg.lattice,
        density,
        Some(&h),
    )?;
    Ok(())
}

/// The report file carries exactly the report fields, so the resolved config
/// goes next to it as `resolved_config.json`.
pub fn cmd_match(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let z = cfg.require_z()?;
    let field0 = apertures::build(&cfg.aperture, &cfg.lattice)?;
    let run = match_field(&field0, &cfg.dispersion, z, &cfg.match_options)?;
    let report = serde_json::to_string_pretty(&run.report)?;
    fs::write(out.join(&cfg.output.report), format!("{report}\n"))?;
    let resolved = serde_json::to_string_pretty(&Value::Object(cfg.resolved().clone()))?;
    fs::write(out.join("resolved_config.json"), format!("{resolved}\n"))?;
    println!("{report}");
    Ok(verdict_outcome(run.report.verdict))
}

fn verdict_outcome(v: Verdict) -> Outcome {
    match v {
        Verdict::Pass => Outcome::Success,
        Verdict::Fail => Outcome::VerdictFail,
    }
}

/// sinc² for a rect, cos² (point-slit limit) for a double slit, at the
/// configured time. The paraxial curvature stands in for ħ/m so every
/// family works.
pub fn cmd_pattern(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let t = cfg.time()?;
    if t == 0.0 {
        return Err(Error::Config(
            "`run.t`: the far-field pattern needs a positive time".into(),
        ));
    }
    let c = cfg.dispersion.constants().c;
    let effective = PhysicalConstants::new(cfg.dispersion.curvature(), 1.0, c)?;
    let density = match cfg.aperture {
        ApertureSpec::Rect { a } => patterns::sinc2_pattern(&cfg.lattice, a, &effective, t),
        ApertureSpec::DoubleSlit { d, .. } => {
            patterns::cos2_pattern(&cfg.lattice, d, &effective, t)
        }
        ref other => {
            return Err(Error::Config(format!(
                "`aperture.kind`: no closed-form pattern for `{}` (use rect or double_slit)",
                other.kind()
            )))
        }
    };
    io::write_density_file(
        &out.join(&cfg.output.pattern),
        &cfg.lattice,
        &density,
        Some(&header(cfg)),
    )?;
    Ok(Outcome::Success)
}

/// One row of a sweep table.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub value: f64,
    pub report: MatchReport,
    /// Mean spacing of the maxima around the centre of the evolved density.
    pub fringe_spacing: Option<f64>,
    /// `2πz/(k0 d)` for double slits.
    pub fringe_spacing_expected: Option<f64>,
}

pub fn sweep_rows(raw: &RawConfig, param: &str, values: &[f64]) -> Vec<Result<SweepRow>> {
    let Some(&(_, key)) = SWEEP_PARAMS.iter().find(|(p, _)| *p == param) else {
        let names: Vec<_> = SWEEP_PARAMS.iter().map(|(p, _)| *p).collect();
        let e = || {
            Error::Config(format!(
                "--param `{param}`: expected one of {}",
                names.join(", ")
            ))
        };
        return values.iter().map(|_| Err(e())).collect();
    };
    values
        .par_iter()
        .map(|&value| {
            let mut raw = raw.clone();
            raw.set(key, value.into(), "--values");
            let cfg = raw.resolve()?;
            let z = cfg.require_z()?;
            let field0 = apertures::build(&cfg.aperture, &cfg.lattice)?;
            let run = match_field(&field0, &cfg.dispersion, z, &cfg.match_options)?;
            let fringe_spacing = extract_features(&run.evolved.density(), &cfg.lattice)
                .ok()
                .and_then(|f| f.central_fringe_spacing(FRINGE_HALF_WINDOW));
            let fringe_spacing_expected = match cfg.aperture {
                ApertureSpec::DoubleSlit { d, .. } => {
                    Some(2.0 * std::f64::consts::PI * z / (run.report.k0 * d))
                }
                _ => None,
            };
            Ok(SweepRow {
                value,
                report: run.report,
                fringe_spacing,
                fringe_spacing_expected,
            })
        })
        .collect()
}

/// Rows are written in input order. A failing run stops the table there
/// with a comment naming the value and the error.
pub fn cmd_sweep(raw: &RawConfig, param: &str, values: &[f64], out: &Path) -> Result<Outcome> {
    if values.is_empty() {
        return Err(Error::Config("--values: empty value list".into()));
    }
    let base = raw.resolve()?;
    let rows = sweep_rows(raw, param, values);

    let path = out.join(&base.output.table);
    let mut w = std::io::BufWriter::new(fs::File::create(&path)?);
    let list: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    writeln!(w, "# {}", header(&base))?;
    writeln!(w, "# sweep: {param} = [{}]", list.join(", "))?;
    writeln!(
        w,
        "param,value,z,k0,v_g,t,l2_rel,linf_peak,evanescent_fraction,verdict,mode,fringe_spacing,fringe_spacing_expected"
    )?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut outcome = Outcome::Success;
    for (row, value) in rows.into_iter().zip(values) {
        match row {
            Ok(r) => {
                let m = &r.report;
                writeln!(
                    w,
                    "{param},{},{},{},{},{},{},{},{},{},{},{},{}",
                    fmt_f64(r.value),
                    fmt_f64(m.z),
                    fmt_f64(m.k0),
                    fmt_f64(m.v_g),
                    fmt_f64(m.t),
                    fmt_f64(m.l2_rel),
                    fmt_f64(m.linf_peak),
                    fmt_f64(m.evanescent_fraction),
                    if m.verdict == Verdict::Pass {
                        "pass"
                    } else {
                        "fail"
                    },
                    m.mode.name(),
                    opt(r.fringe_spacing),
                    opt(r.fringe_spacing_expected),
                )?;
                if m.verdict == Verdict::Fail {
                    outcome = Outcome::VerdictFail;
                }
            }
            Err(e) => {
                writeln!(w, "# aborted at {param} = {value}: {e}")?;
                w.flush()?;
                eprintln!("partial table written to {}", path.display());
                return Err(e);
            }
        }
    }
    w.flush()?;
    Ok(outcome)
}
