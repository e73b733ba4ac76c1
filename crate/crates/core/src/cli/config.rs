//! Experiment configuration: a JSON object whose keys are dotted
//! `section.name` paths. Nested objects are accepted and flattened.
//!
//! ```json
//! {
//!   "lattice.n": 4096, "lattice.extent": 200.0,
//!   "dispersion.family": "de_broglie", "dispersion.k0": 6.283185307179586,
//!   "aperture.kind": "rect", "aperture.a": 20.0,
//!   "run.z": 100.0
//! }
//! ```
//!
//! Everything is checked while resolving, so a config that resolves can be
//! run. Errors name the offending key and where it came from.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::apertures::{self, ApertureSpec};
use crate::dispersion::{DispersionSpec, Family, PhysicalConstants};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matching::{MatchOptions, DEFAULT_EDGE_GUARD};
use crate::propagation::PropagatorMode;

/// Every key the resolver understands, in the order they are reported.
pub const KNOWN_KEYS: &[&str] = &[
    "lattice.n",
    "lattice.extent",
    "constants.hbar",
    "constants.m",
    "constants.c",
    "dispersion.family",
    "dispersion.k0",
    "aperture.kind",
    "aperture.a",
    "aperture.d",
    "aperture.w",
    "aperture.sigma",
    "aperture.x_center",
    "aperture.path",
    "run.z",
    "run.t",
    "run.mode",
    "run.tolerance",
    "run.time_scale",
    "run.edge_guard",
    "output.field",
    "output.density",
    "output.report",
    "output.pattern",
    "output.table",
];

/// Keys as written, before any checking, plus where each one came from.
#[derive(Clone, Debug)]
pub struct RawConfig {
    entries: Map<String, Value>,
    origin: HashMap<String, String>,
    base_dir: PathBuf,
}

impl RawConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &path.display().to_string(), base)
    }

    /// `base_dir` anchors relative `aperture.path` values.
    pub fn parse(text: &str, name: &str, base_dir: PathBuf) -> Result<Self> {
        let root: Value =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("{name}: {e}")))?;
        let Value::Object(root) = root else {
            return Err(Error::Config(format!(
                "{name}: top level must be a JSON object"
            )));
        };
        let mut entries = Map::new();
        flatten("", root, &mut entries);
        let origin = entries
            .keys()
            .map(|k| (k.clone(), locate(text, name, k)))
            .collect();
        Ok(Self {
            entries,
            origin,
            base_dir,
        })
    }

    /// Applies `key=value`. The value is read as JSON when it parses as
    /// such and taken as a bare string otherwise.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--override `{spec}`: expected key=value")))?;
        let key = key.trim();
        let value = serde_json::from_str(value.trim())
            .unwrap_or_else(|_| Value::String(value.trim().into()));
        self.set(key, value, "--override");
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: Value, origin: &str) {
        self.entries.insert(key.to_string(), value);
        self.origin.insert(key.to_string(), origin.to_string());
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.entries
            .get(key)
            .filter(|v| !v.is_null() || key == "run.edge_guard")
    }

    fn loc(&self, key: &str) -> String {
        self.origin
            .get(key)
            .cloned()
            .unwrap_or_else(|| "default".into())
    }

    fn bad(&self, key: &str, reason: impl std::fmt::Display) -> Error {
        Error::Config(format!("`{key}` ({}): {reason}", self.loc(key)))
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| self.bad(key, format!("expected a finite number, got {v}"))),
        }
    }

    fn required_f64(&self, key: &str) -> Result<f64> {
        self.f64(key)?.ok_or_else(|| self.bad(key, "missing"))
    }

    fn str(&self, key: &str) -> Result<Option<&str>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(v) => Err(self.bad(key, format!("expected a string, got {v}"))),
        }
    }

    /// Rewrites a library error about parameter `name` so it points at the
    /// config key that supplied it.
    fn blame(&self, keys: &[&str], err: Error) -> Error {
        if let Error::Config(_) = err {
            return err;
        }
        let key = match &err {
            Error::InvalidParameter { name, .. } => keys
                .iter()
                .find(|k| k.rsplit('.').next() == Some(name))
                .copied()
                .unwrap_or(keys[0]),
            _ => keys[0],
        };
        self.bad(key, err)
    }

    pub fn resolve(&self) -> Result<ExperimentConfig> {
        for key in self.entries.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(self.bad(
                    key,
                    format!("unknown key (known keys: {})", KNOWN_KEYS.join(", ")),
                ));
            }
        }
        let mut resolved = Map::new();

        let n = match self.get("lattice.n") {
            None => return Err(self.bad("lattice.n", "missing")),
            Some(v) => v.as_u64().ok_or_else(|| {
                self.bad("lattice.n", format!("expected a positive integer, got {v}"))
            })?,
        };
        let extent = self.required_f64("lattice.extent")?;
        let lattice = Lattice::new(n as usize, extent)
            .map_err(|e| self.blame(&["lattice.n", "lattice.extent"], e))?;
        resolved.insert("lattice.n".into(), n.into());
        resolved.insert("lattice.extent".into(), extent.into());

        let hbar = self.f64("constants.hbar")?.unwrap_or(1.0);
        let m = self.f64("constants.m")?.unwrap_or(1.0);
        let c = self.f64("constants.c")?.unwrap_or(1.0);
        let ckeys = ["constants.hbar", "constants.m", "constants.c"];
        let constants = PhysicalConstants::new(hbar, m, c).map_err(|e| self.blame(&ckeys, e))?;
        for (key, v) in ckeys.iter().zip([hbar, m, c]) {
            resolved.insert(key.to_string(), v.into());
        }

        let family: Family = self
            .str("dispersion.family")?
            .unwrap_or("de_broglie")
            .parse()
            .map_err(|e| self.blame(&["dispersion.family"], e))?;
        let k0 = self.f64("dispersion.k0")?;
        let dispersion = DispersionSpec::new(family, constants, k0)
            .map_err(|e| self.blame(&["dispersion.k0", "dispersion.family"], e))?;
        resolved.insert("dispersion.family".into(), family.name().into());
        resolved.insert("dispersion.k0".into(), k0.into());

        let aperture = self.aperture(&mut resolved)?;
        apertures::build(&aperture, &lattice).map_err(|e| {
            let keys: &[&str] = match (&aperture, &e) {
                (ApertureSpec::DoubleSlit { .. }, Error::UnresolvedSlit { .. }) => &["aperture.w"],
                (ApertureSpec::Rect { .. }, _) => &["aperture.a"],
                (ApertureSpec::DoubleSlit { .. }, _) => &["aperture.d", "aperture.w"],
                (ApertureSpec::Gaussian { .. }, _) => &["aperture.sigma", "aperture.x_center"],
                (ApertureSpec::FromFile { .. }, _) => &["aperture.path"],
            };
            self.blame(keys, e)
        })?;

        let z = self.f64("run.z")?;
        let t = self.f64("run.t")?;
        if let Some(z) = z {
            if z < 0.0 {
                return Err(self.bad("run.z", format!("{z} must be non-negative")));
            }
        }
        if let Some(t) = t {
            if t < 0.0 {
                return Err(self.bad("run.t", format!("{t} must be non-negative")));
            }
        }
        let mode: PropagatorMode = self
            .str("run.mode")?
            .unwrap_or("fresnel")
            .parse()
            .map_err(|e| self.blame(&["run.mode"], e))?;
        let mut match_options = MatchOptions::new(mode);
        if let Some(tol) = self.f64("run.tolerance")? {
            if tol <= 0.0 {
                return Err(self.bad("run.tolerance", format!("{tol} must be positive")));
            }
            match_options.tolerance = tol;
        }
        if let Some(scale) = self.f64("run.time_scale")? {
            if scale <= 0.0 {
                return Err(self.bad("run.time_scale", format!("{scale} must be positive")));
            }
            match_options.time_scale = scale;
        }
        match_options.edge_guard = match self.get("run.edge_guard") {
            None => Some(DEFAULT_EDGE_GUARD),
            Some(Value::Null) => None,
            Some(_) => {
                let g = self.required_f64("run.edge_guard")?;
                if g <= 0.0 {
                    return Err(self.bad(
                        "run.edge_guard",
                        format!("{g} must be positive, or null to disable"),
                    ));
                }
                Some(g)
            }
        };
        if let Some(z) = z {
            resolved.insert("run.z".into(), z.into());
        }
        if let Some(t) = t {
            resolved.insert("run.t".into(), t.into());
        }
        resolved.insert("run.mode".into(), mode.name().into());
        resolved.insert("run.tolerance".into(), match_options.tolerance.into());
        resolved.insert("run.time_scale".into(), match_options.time_scale.into());
        resolved.insert("run.edge_guard".into(), match_options.edge_guard.into());

        let output = OutputNames {
            field: self.file_name("output.field", "field.csv")?,
            density: self.file_name("output.density", "density.csv")?,
            report: self.file_name("output.report", "report.json")?,
            pattern: self.file_name("output.pattern", "pattern.csv")?,
            table: self.file_name("output.table", "sweep.csv")?,
        };
        for (key, v) in [
            ("output.field", &output.field),
            ("output.density", &output.density),
            ("output.report", &output.report),
            ("output.pattern", &output.pattern),
            ("output.table", &output.table),
        ] {
            resolved.insert(key.into(), v.as_str().into());
        }

        Ok(ExperimentConfig {
            lattice,
            dispersion,
            aperture,
            z,
            t,
            match_options,
            output,
            resolved,
        })
    }

    fn aperture(&self, resolved: &mut Map<String, Value>) -> Result<ApertureSpec> {
        let kind = self
            .str("aperture.kind")?
            .ok_or_else(|| self.bad("aperture.kind", "missing"))?;
        let used: &[&str] = match kind {
            "rect" => &["aperture.a"],
            "double_slit" => &["aperture.d", "aperture.w"],
            "gaussian" => &["aperture.sigma", "aperture.x_center"],
            "from_file" => &["aperture.path"],
            other => {
                return Err(self.bad(
                    "aperture.kind",
                    format!("unknown aperture `{other}` (expected rect, double_slit, gaussian or from_file)"),
                ))
            }
        };
        for key in self.entries.keys().filter(|k| k.starts_with("aperture.")) {
            if key != "aperture.kind"
                && !used.contains(&key.as_str())
                && !self.entries[key].is_null()
            {
                return Err(self.bad(key, format!("not used by aperture kind `{kind}`")));
            }
        }
        resolved.insert("aperture.kind".into(), kind.into());
        let spec = match kind {
            "rect" => ApertureSpec::Rect {
                a: self.required_f64("aperture.a")?,
            },
            "double_slit" => {
                let d = self.required_f64("aperture.d")?;
                let w = self.f64("aperture.w")?.unwrap_or(d / 20.0);
                ApertureSpec::DoubleSlit { d, w }
            }
            "gaussian" => ApertureSpec::Gaussian {
                sigma: self.required_f64("aperture.sigma")?,
                x_center: self.f64("aperture.x_center")?.unwrap_or(0.0),
            },
            _ => {
                let p = self
                    .str("aperture.path")?
                    .ok_or_else(|| self.bad("aperture.path", "missing"))?;
                let p = Path::new(p);
                ApertureSpec::FromFile {
                    path: if p.is_absolute() {
                        p.to_path_buf()
                    } else {
                        self.base_dir.join(p)
                    },
                }
            }
        };
        match &spec {
            ApertureSpec::Rect { a } => {
                resolved.insert("aperture.a".into(), (*a).into());
            }
            ApertureSpec::DoubleSlit { d, w } => {
                resolved.insert("aperture.d".into(), (*d).into());
                resolved.insert("aperture.w".into(), (*w).into());
            }
            ApertureSpec::Gaussian { sigma, x_center } => {
                resolved.insert("aperture.sigma".into(), (*sigma).into());
                resolved.insert("aperture.x_center".into(), (*x_center).into());
            }
            ApertureSpec::FromFile { path } => {
                resolved.insert("aperture.path".into(), path.display().to_string().into());
            }
        }
        Ok(spec)
    }

    fn file_name(&self, key: &str, default: &str) -> Result<String> {
        let name = self.str(key)?.unwrap_or(default);
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(self.bad(
                key,
                format!("`{name}` must be a plain file name (use --out for the directory)"),
            ));
        }
        Ok(name.to_string())
    }
}

fn flatten(prefix: &str, obj: Map<String, Value>, out: &mut Map<String, Value>) {
    for (k, v) in obj {
        let key = if prefix.is_empty() {
            k
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Object(inner) => flatten(&key, inner, out),
            other => {
                out.insert(key, other);
            }
        }
    }
}

/// `name line N` for the first line mentioning the key's last segment.
fn locate(text: &str, name: &str, key: &str) -> String {
    let full = format!("\"{key}\"");
    let last = format!("\"{}\"", key.rsplit('.').next().unwrap_or(key));
    let line = text
        .lines()
        .position(|l| l.contains(&full))
        .or_else(|| text.lines().position(|l| l.contains(&last)));
    match line {
        Some(i) => format!("{name} line {}", i + 1),
        None => name.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputNames {
    pub field: String,
    pub density: String,
    pub report: String,
    pub pattern: String,
    pub table: String,
}

/// A fully checked experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub lattice: Lattice,
    pub dispersion: DispersionSpec,
    pub aperture: ApertureSpec,
    pub z: Option<f64>,
    pub t: Option<f64>,
    pub match_options: MatchOptions,
    pub output: OutputNames,
    resolved: Map<String, Value>,
}

impl ExperimentConfig {
    /// Every effective setting, defaults included, as one line of JSON.
    pub fn resolved_json(&self) -> String {
        Value::Object(self.resolved.clone()).to_string()
    }

    pub fn resolved(&self) -> &Map<String, Value> {
        &self.resolved
    }

    pub fn require_z(&self) -> Result<f64> {
        self.z.ok_or_else(|| {
            Error::Config("`run.z` (default): missing, this command needs a distance".into())
        })
    }

    /// `run.t` when given, else `time_scale · z / v_g`.
    pub fn time(&self) -> Result<f64> {
        if let Some(t) = self.t {
            return Ok(t);
        }
        let z = self.z.ok_or_else(|| {
            Error::Config("`run.t` (default): missing, and no `run.z` to derive it from".into())
        })?;
        let t = self
            .dispersion
            .transit_time(z)
            .map_err(|e| Error::Config(format!("`run.z`: cannot convert to a time: {e}")))?;
        Ok(self.match_options.time_scale * t)
    }

    pub fn k0(&self) -> Result<f64> {
        self.dispersion.k0().ok_or_else(|| {
            Error::Config("`dispersion.k0` (default): missing, this command needs a carrier".into())
        })
    }
}
