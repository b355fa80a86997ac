//! JSON and CSV interchange for matrices, Kraus channels, and result tables.
//!
//! Matrices travel as separate real/imaginary grids so files stay readable
//! and language-neutral. Floats are written with `Display`, which in Rust
//! round-trips `f64` exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::{self, CMat};
use crate::power::ScanPoint;
use crate::statistics::HistogramBin;

/// A complex matrix as parallel real/imaginary row-major grids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d_rows: usize,
    pub d_cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    /// Encode a matrix.
    pub fn from_matrix(m: &CMat) -> Self {
        let grid = |pick: fn(&num_complex::Complex<f64>) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| pick(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            d_rows: m.nrows(),
            d_cols: m.ncols(),
            re: grid(|z| z.re),
            im: grid(|z| z.im),
        }
    }

    /// Decode, validating shape and finiteness.
    pub fn to_matrix(&self) -> Result<CMat> {
        if self.d_rows == 0 || self.d_cols == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimensions must be positive".into(),
            ));
        }
        for (name, grid) in [("re", &self.re), ("im", &self.im)] {
            if grid.len() != self.d_rows {
                return Err(Error::InvalidArgument(format!(
                    "field \"{name}\" has {} rows, expected {}",
                    grid.len(),
                    self.d_rows
                )));
            }
            for (r, row) in grid.iter().enumerate() {
                if row.len() != self.d_cols {
                    return Err(Error::InvalidArgument(format!(
                        "field \"{name}\" row {r} has {} entries, expected {}",
                        row.len(),
                        self.d_cols
                    )));
                }
                if row.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "field \"{name}\" row {r} contains a non-finite value"
                    )));
                }
            }
        }
        Ok(CMat::from_fn(self.d_rows, self.d_cols, |r, c| {
            matrix::c(self.re[r][c], self.im[r][c])
        }))
    }
}

/// A Kraus channel as a dimension plus a list of `d x d` matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrausJson {
    pub d: usize,
    pub kraus: Vec<MatrixJson>,
}

/// Read one matrix from a JSON file.
pub fn load_matrix(path: &Path) -> Result<CMat> {
    let text = fs::read_to_string(path)?;
    let parsed: MatrixJson = serde_json::from_str(&text)?;
    parsed.to_matrix()
}

/// Write one matrix to a JSON file (pretty-printed).
pub fn save_matrix(path: &Path, m: &CMat) -> Result<()> {
    fs::write(path, matrix_to_json_string(m)?)?;
    Ok(())
}

/// Pretty-printed JSON encoding of a matrix.
pub fn matrix_to_json_string(m: &CMat) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&MatrixJson::from_matrix(m))?;
    s.push('\n');
    Ok(s)
}

/// Read a Kraus channel from JSON, checking every matrix is `d x d`, then
/// validating trace preservation and unitality.
pub fn load_kraus(path: &Path) -> Result<KrausChannel> {
    let text = fs::read_to_string(path)?;
    let parsed: KrausJson = serde_json::from_str(&text)?;
    let mut ops = Vec::with_capacity(parsed.kraus.len());
    for (k, mj) in parsed.kraus.iter().enumerate() {
        if mj.d_rows != parsed.d || mj.d_cols != parsed.d {
            return Err(Error::InvalidArgument(format!(
                "kraus operator {k} is {}x{}, expected {}x{}",
                mj.d_rows, mj.d_cols, parsed.d, parsed.d
            )));
        }
        ops.push(mj.to_matrix()?);
    }
    KrausChannel::new(ops)
}

/// Read a JSON array of matrices (e.g. the three vertices of a mixture scan).
pub fn load_unitary_list(path: &Path) -> Result<Vec<CMat>> {
    let text = fs::read_to_string(path)?;
    let parsed: Vec<MatrixJson> = serde_json::from_str(&text)?;
    parsed.iter().map(MatrixJson::to_matrix).collect()
}

/// Write histogram bins as CSV with header `bin_left,bin_right,density`.
pub fn write_histogram_rows<W: std::io::Write>(mut w: W, bins: &[HistogramBin]) -> Result<()> {
    writeln!(w, "bin_left,bin_right,density")?;
    for b in bins {
        writeln!(w, "{},{},{}", b.bin_left, b.bin_right, b.density)?;
    }
    Ok(())
}

/// [`write_histogram_rows`] into a file.
pub fn write_histogram_csv(path: &Path, bins: &[HistogramBin]) -> Result<()> {
    write_histogram_rows(fs::File::create(path)?, bins)
}

/// Write raw samples as CSV with header `sample_index,value`.
pub fn write_samples_rows<W: std::io::Write>(mut w: W, samples: &[f64]) -> Result<()> {
    writeln!(w, "sample_index,value")?;
    for (i, v) in samples.iter().enumerate() {
        writeln!(w, "{i},{v}")?;
    }
    Ok(())
}

/// [`write_samples_rows`] into a file.
pub fn write_samples_csv(path: &Path, samples: &[f64]) -> Result<()> {
    write_samples_rows(fs::File::create(path)?, samples)
}

/// Write mixture-scan rows as CSV with header `p1,p2,p3,normalized_cgp`.
pub fn write_scan_rows<W: std::io::Write>(mut w: W, points: &[ScanPoint]) -> Result<()> {
    writeln!(w, "p1,p2,p3,normalized_cgp")?;
    for p in points {
        writeln!(w, "{},{},{},{}", p.p1, p.p2, p.p3, p.normalized)?;
    }
    Ok(())
}

/// [`write_scan_rows`] into a file.
pub fn write_scan_csv(path: &Path, points: &[ScanPoint]) -> Result<()> {
    write_scan_rows(fs::File::create(path)?, points)
}
