//! Field and profile persistence: CSV tables and raw little-endian dumps
//! with a JSON header.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pde::{Field, SpaceTimeGrid};
use crate::scalar::Scalar;
use crate::trajectory::SampledProfile;

pub const FIELD_FORMAT: &str = "returnctrl-field";
pub const FIELD_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    /// `f64`
    Real,
    /// interleaved `(re, im)` pairs of `f64`
    Complex,
}

impl ScalarKind {
    pub fn of<S: Scalar>() -> Self {
        if S::COMPLEX {
            ScalarKind::Complex
        } else {
            ScalarKind::Real
        }
    }
}

/// Sidecar describing a binary field dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub format: String,
    pub version: u32,
    pub name: String,
    pub scalar: ScalarKind,
    pub endianness: String,
    /// `data[n * nx + j]` is level `n`, node `j`
    pub layout: String,
    pub levels: usize,
    pub nx: usize,
    pub grid: SpaceTimeGrid,
    pub dx: f64,
    pub dt: f64,
    /// file name of the raw data, relative to the header
    pub data_file: String,
    pub bytes: usize,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Serialization(e.to_string()))?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `<dir>/<name>.bin` and `<dir>/<name>.json`; returns the header path.
pub fn write_field_binary<S: Scalar>(dir: &Path, name: &str, field: &Field<S>) -> Result<PathBuf> {
    let data_file = format!("{name}.bin");
    let bin = dir.join(&data_file);
    let mut w = create(&bin)?;
    let mut bytes = 0;
    for v in &field.data {
        w.write_all(&v.re().to_le_bytes()).map_err(|e| Error::io(&bin, e))?;
        bytes += 8;
        if S::COMPLEX {
            w.write_all(&v.im().to_le_bytes()).map_err(|e| Error::io(&bin, e))?;
            bytes += 8;
        }
    }
    w.flush().map_err(|e| Error::io(&bin, e))?;
    let g = field.grid;
    let header = FieldHeader {
        format: FIELD_FORMAT.into(),
        version: FIELD_VERSION,
        name: name.into(),
        scalar: ScalarKind::of::<S>(),
        endianness: "little".into(),
        layout: "row-major (level, node)".into(),
        levels: g.levels(),
        nx: g.nx,
        grid: g,
        dx: g.dx(),
        dt: g.dt(),
        data_file,
        bytes,
    };
    let path = dir.join(format!("{name}.json"));
    write_json(&path, &header)?;
    Ok(path)
}

pub fn read_field_header(path: &Path) -> Result<FieldHeader> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    let h: FieldHeader =
        serde_json::from_reader(BufReader::new(f)).map_err(|e| Error::Serialization(format!("{}: {e}", path.display())))?;
    if h.format != FIELD_FORMAT || h.version != FIELD_VERSION {
        return Err(Error::Serialization(format!(
            "{}: unsupported format {} v{}",
            path.display(),
            h.format,
            h.version
        )));
    }
    if h.endianness != "little" {
        return Err(Error::Serialization(format!("{}: unsupported endianness {}", path.display(), h.endianness)));
    }
    Ok(h)
}

/// Loads a dump through its header. The scalar kind must match `S`.
pub fn read_field_binary<S: Scalar>(header_path: &Path) -> Result<Field<S>> {
    let h = read_field_header(header_path)?;
    if h.scalar != ScalarKind::of::<S>() {
        return Err(Error::Serialization(format!(
            "{}: stored {:?} scalars, requested {:?}",
            header_path.display(),
            h.scalar,
            ScalarKind::of::<S>()
        )));
    }
    h.grid.validate()?;
    if h.levels != h.grid.levels() || h.nx != h.grid.nx {
        return Err(Error::Serialization(format!("{}: shape disagrees with grid", header_path.display())));
    }
    let bin = header_path.parent().unwrap_or(Path::new(".")).join(&h.data_file);
    let mut raw = Vec::new();
    File::open(&bin)
        .map_err(|e| Error::io(&bin, e))?
        .read_to_end(&mut raw)
        .map_err(|e| Error::io(&bin, e))?;
    let per = if S::COMPLEX { 16 } else { 8 };
    let n = h.levels * h.nx;
    if raw.len() != n * per || raw.len() != h.bytes {
        return Err(Error::Serialization(format!(
            "{}: {} bytes, expected {}",
            bin.display(),
            raw.len(),
            n * per
        )));
    }
    let word = |k: usize| f64::from_le_bytes(raw[8 * k..8 * k + 8].try_into().expect("8-byte chunk"));
    let data = (0..n)
        .map(|i| {
            if S::COMPLEX {
                S::from_parts(word(2 * i), word(2 * i + 1))
            } else {
                S::from_f64(word(i))
            }
        })
        .collect();
    Field::from_data(&h.grid, data)
}

fn value_columns<S: Scalar>(name: &str) -> Vec<String> {
    if S::COMPLEX {
        vec![format!("{name}_re"), format!("{name}_im")]
    } else {
        vec![name.to_string()]
    }
}

fn push_value<S: Scalar>(row: &mut Vec<String>, v: S) {
    row.push(v.re().to_string());
    if S::COMPLEX {
        row.push(v.im().to_string());
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Serialization(format!("{}: {e}", path.display()))
}

/// `t,x,value` (or `t,x,value_re,value_im`), one row per node. Values use
/// the shortest representation that parses back to the same `f64`.
pub fn write_field_csv<S: Scalar>(path: &Path, field: &Field<S>) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut head = vec!["t".to_string(), "x".to_string()];
    head.extend(value_columns::<S>("value"));
    w.write_record(&head).map_err(|e| csv_err(path, e))?;
    let g = field.grid;
    for n in 0..g.levels() {
        for j in 0..g.nx {
            let mut row = vec![g.t(n).to_string(), g.x(j).to_string()];
            push_value(&mut row, field.at(n, j));
            w.write_record(&row).map_err(|e| csv_err(path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a CSV written by [`write_field_csv`] back onto `grid`.
pub fn read_field_csv<S: Scalar>(path: &Path, grid: &SpaceTimeGrid) -> Result<Field<S>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let want = if S::COMPLEX { 4 } else { 3 };
    let mut data = Vec::with_capacity(grid.levels() * grid.nx);
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        if rec.len() != want {
            return Err(Error::Serialization(format!("{}: expected {want} columns", path.display())));
        }
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .parse()
                .map_err(|_| Error::Serialization(format!("{}: bad number {:?}", path.display(), &rec[k])))
        };
        data.push(if S::COMPLEX {
            S::from_parts(num(2)?, num(3)?)
        } else {
            S::from_f64(num(2)?)
        });
    }
    Field::from_data(grid, data)
}

/// `coordinate,value,d1,d2` with a real/imaginary split for complex profiles.
pub fn write_profile_csv<S: Scalar>(path: &Path, p: &SampledProfile<S>) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut head = vec!["coordinate".to_string()];
    for c in ["value", "d1", "d2"] {
        head.extend(value_columns::<S>(c));
    }
    w.write_record(&head).map_err(|e| csv_err(path, e))?;
    for k in 0..p.len() {
        let mut row = vec![p.node(k).to_string()];
        push_value(&mut row, p.values[k]);
        push_value(&mut row, p.d1[k]);
        push_value(&mut row, p.d2[k]);
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Plain numeric table.
pub fn write_table_csv(path: &Path, headers: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(headers).map_err(|e| csv_err(path, e))?;
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Whitespace-separated `x y z` blocks for gnuplot, one blank line between
/// rows of `y`.
pub fn write_grid_dat(path: &Path, xs: &[f64], ys: &[f64], z: impl Fn(usize, usize) -> f64) -> Result<()> {
    let mut w = create(path)?;
    for (i, x) in xs.iter().enumerate() {
        for (k, y) in ys.iter().enumerate() {
            writeln!(w, "{x} {y} {}", z(i, k)).map_err(|e| Error::io(path, e))?;
        }
        writeln!(w).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
