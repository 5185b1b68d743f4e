//! Plain CSV formats for matrices, labels and sketch indices.
//!
//! Matrices are written one matrix row per line, no header, LF endings.
//! Every value is printed with the shortest decimal that round-trips, so a
//! save/load cycle is bitwise exact. Lines starting with `#` are comments
//! and are skipped by every loader.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{ClusterLabels, DataMatrix, SketchResult};

/// Formats a float with the shortest round-trip representation.
pub fn format_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-6..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn write_comment<W: Write>(w: &mut W, comment: Option<&str>) -> std::io::Result<()> {
    if let Some(text) = comment {
        for line in text.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    Ok(())
}

pub fn write_matrix<W: Write>(w: &mut W, data: &DataMatrix, comment: Option<&str>) -> Result<()> {
    write_comment(w, comment)?;
    let m = data.as_matrix();
    let mut line = String::new();
    for i in 0..m.nrows() {
        line.clear();
        for j in 0..m.ncols() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format_f64(m[(i, j)]));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn read_matrix<R: Read>(r: R) -> Result<DataMatrix> {
    let mut values = Vec::new();
    let mut cols: Option<usize> = None;
    let mut rows = 0;
    for (idx, line) in BufReader::new(r).lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let start = values.len();
        for field in trimmed.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid number {:?}", field.trim()),
            })?;
            values.push(v);
        }
        let width = values.len() - start;
        match cols {
            None => cols = Some(width),
            Some(c) if c != width => {
                return Err(Error::Shape(format!(
                    "line {line_no}: expected {c} fields, found {width}"
                )))
            }
            _ => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| Error::Parse {
        line: 0,
        message: "no data rows".into(),
    })?;
    DataMatrix::new(DMatrix::from_row_slice(rows, cols, &values))
}

fn read_integers<R: Read>(r: R) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let v: usize = trimmed.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("invalid non-negative integer {trimmed:?}"),
        })?;
        out.push(v);
    }
    Ok(out)
}

/// Reads labels; with `num_clusters` given, any value `>= num_clusters` is
/// a parse error, otherwise the count is inferred as `max + 1`.
pub fn read_labels<R: Read>(r: R, num_clusters: Option<usize>) -> Result<ClusterLabels> {
    let mut labels = Vec::new();
    for (idx, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let line_no = idx + 1;
        let v: usize = trimmed.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid cluster id {trimmed:?}"),
        })?;
        if let Some(s) = num_clusters {
            if v >= s {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("cluster id {v} out of range for {s} clusters"),
                });
            }
        }
        labels.push(v);
    }
    if labels.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no labels".into(),
        });
    }
    match num_clusters {
        Some(s) => ClusterLabels::new(labels, s),
        None => ClusterLabels::from_labels(labels),
    }
}

pub fn write_labels<W: Write>(w: &mut W, labels: &ClusterLabels, comment: Option<&str>) -> Result<()> {
    write_comment(w, comment)?;
    for &l in labels.as_slice() {
        writeln!(w, "{l}")?;
    }
    Ok(())
}

pub fn write_indices<W: Write>(w: &mut W, indices: &[usize], comment: Option<&str>) -> Result<()> {
    write_comment(w, comment)?;
    for &i in indices {
        writeln!(w, "{i}")?;
    }
    Ok(())
}

pub fn read_indices<R: Read>(r: R) -> Result<Vec<usize>> {
    read_integers(r)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<DataMatrix> {
    read_matrix(File::open(path)?)
}

pub fn save_csv(data: &DataMatrix, path: impl AsRef<Path>) -> Result<()> {
    save_csv_with_comment(data, path, None)
}

pub fn save_csv_with_comment(
    data: &DataMatrix,
    path: impl AsRef<Path>,
    comment: Option<&str>,
) -> Result<()> {
    let mut w = create(path.as_ref())?;
    write_matrix(&mut w, data, comment)?;
    w.flush()?;
    Ok(())
}

pub fn load_labels(path: impl AsRef<Path>, num_clusters: Option<usize>) -> Result<ClusterLabels> {
    read_labels(File::open(path)?, num_clusters)
}

pub fn save_labels(
    labels: &ClusterLabels,
    path: impl AsRef<Path>,
    comment: Option<&str>,
) -> Result<()> {
    let mut w = create(path.as_ref())?;
    write_labels(&mut w, labels, comment)?;
    w.flush()?;
    Ok(())
}

pub fn save_indices(
    sketch: &SketchResult,
    path: impl AsRef<Path>,
    comment: Option<&str>,
) -> Result<()> {
    let mut w = create(path.as_ref())?;
    write_indices(&mut w, &sketch.indices, comment)?;
    w.flush()?;
    Ok(())
}

pub fn load_indices(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    read_indices(File::open(path)?)
}
