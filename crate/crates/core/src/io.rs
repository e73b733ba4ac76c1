//! CSV readers and writers for fields and densities.
//!
//! Files may start with `#` comment lines (the CLI puts the resolved config
//! there). Numbers are written with 17 significant digits so that `re`/`im`
//! columns round-trip bit-identically.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Field, Lattice};

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_comment<W: Write>(out: &mut W, comment: Option<&str>) -> Result<()> {
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    Ok(())
}

/// Writes `x,re,im,density`, one row per sample.
pub fn write_field<W: Write>(out: &mut W, field: &Field, comment: Option<&str>) -> Result<()> {
    write_comment(out, comment)?;
    writeln!(out, "x,re,im,density")?;
    for (x, v) in field.lattice().x().iter().zip(field.values()) {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(*x),
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(v.norm_sqr())
        )?;
    }
    Ok(())
}

/// Writes `x,density`.
pub fn write_density<W: Write>(
    out: &mut W,
    lattice: &Lattice,
    density: &[f64],
    comment: Option<&str>,
) -> Result<()> {
    if density.len() != lattice.n() {
        return Err(Error::LengthMismatch {
            expected: lattice.n(),
            actual: density.len(),
        });
    }
    write_comment(out, comment)?;
    writeln!(out, "x,density")?;
    for (x, d) in lattice.x().iter().zip(density) {
        writeln!(out, "{},{}", fmt_f64(*x), fmt_f64(*d))?;
    }
    Ok(())
}

pub fn write_field_file(path: &Path, field: &Field, comment: Option<&str>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_field(&mut out, field, comment)?;
    out.flush()?;
    Ok(())
}

pub fn write_density_file(
    path: &Path,
    lattice: &Lattice,
    density: &[f64],
    comment: Option<&str>,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_density(&mut out, lattice, density, comment)?;
    out.flush()?;
    Ok(())
}

/// Reads a field from CSV with at least the columns `x,re,im` (extra columns
/// such as `density` are ignored). The row count must equal the lattice size.
/// Samples are taken as-is; nothing is normalized.
pub fn read_field<R: Read>(input: R, lattice: &Lattice) -> Result<Field> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::FieldFile {
                line: 1,
                reason: format!("missing column `{name}` (header must contain x,re,im)"),
            })
    };
    let (re_col, im_col) = (column("re")?, column("im")?);
    column("x")?;

    let mut values = Vec::with_capacity(lattice.n());
    for record in reader.records() {
        let record = record.map_err(|e| Error::FieldFile {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let parse = |col: usize, name: &str| -> Result<f64> {
            let text = record.get(col).unwrap_or("");
            let v: f64 = text.parse().map_err(|_| Error::FieldFile {
                line,
                reason: format!("cannot parse {name} value `{text}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::FieldFile {
                    line,
                    reason: format!("non-finite {name} value `{text}`"),
                });
            }
            Ok(v)
        };
        values.push(Complex64::new(parse(re_col, "re")?, parse(im_col, "im")?));
    }
    if values.len() != lattice.n() {
        return Err(Error::FieldFile {
            line: 0,
            reason: format!("expected {} rows, found {}", lattice.n(), values.len()),
        });
    }
    Field::new(lattice, values)
}

/// File-path form of [`read_field`].
pub fn load_field(path: &Path, lattice: &Lattice) -> Result<Field> {
    read_field(File::open(path)?, lattice)
}
