//! Closed-form coherence generating power (CGP).
//!
//! For a unitary `U` the CGP relative to the computational basis is
//!
//! ```text
//! C_B(U) = (1/(d+1)) * (1 - (1/d) * sum_ij |u_ij|^4)
//! ```
//!
//! and for a unital Kraus channel `E = {A_k}`
//!
//! ```text
//! C_B(E) = (1/(d(d+1))) * sum_i sum_{l != m} |sum_k (A_k)_{li} conj((A_k)_{mi})|^2 ,
//! ```
//!
//! both O(poly(d)) functions of the matrix entries — no superoperators are
//! ever formed here. The independent two-copy and Monte Carlo routes live in
//! [`crate::protocol`].
//!
//! The maximum over unitaries is `C_d = (1 - 1/d)/(d + 1)`, attained exactly
//! when every `|u_ij|^2 = 1/d`, i.e. when `U` maps the computational basis to
//! a mutually unbiased one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::{self, CMat};

/// A CGP value together with its dimension and the unitary maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgpResult {
    /// The CGP value itself.
    pub raw: f64,
    /// `raw / bound`, in `[0, 1]` (defined as 0 when `d = 1`).
    pub normalized: f64,
    /// Hilbert-space dimension.
    pub dim: usize,
    /// The unitary maximum `C_d = (1 - 1/d)/(d + 1)`.
    pub bound: f64,
}

impl CgpResult {
    fn from_raw(raw: f64, dim: usize) -> Self {
        // Incoherent inputs can land a hair below zero in floating point;
        // snap those to the exact boundary.
        let raw = raw.max(0.0);
        let bound = max_cgp(dim);
        let normalized = if dim >= 2 { raw / bound } else { 0.0 };
        CgpResult {
            raw,
            normalized,
            dim,
            bound,
        }
    }
}

/// Maximal CGP over unitaries: `(1 - 1/d)/(d + 1)`; zero when `d = 1`.
pub fn max_cgp(d: usize) -> f64 {
    assert!(d >= 1, "dimension must be at least 1");
    let df = d as f64;
    (1.0 - 1.0 / df) / (df + 1.0)
}

fn sum_fourth_moduli(u: &CMat) -> f64 {
    u.iter().map(|z| {
        let m = z.norm_sqr();
        m * m
    })
    .sum()
}

/// CGP of a unitary from its matrix entries.
///
/// Errors if `u` is not unitary within [`matrix::STRUCT_TOL`].
pub fn cgp_unitary(u: &CMat) -> Result<CgpResult> {
    matrix::require_unitary(u, matrix::STRUCT_TOL)?;
    let d = u.nrows();
    let df = d as f64;
    let raw = (1.0 - sum_fourth_moduli(u) / df) / (df + 1.0);
    Ok(CgpResult::from_raw(raw, d))
}

/// CGP of a unital Kraus channel from its Kraus-operator entries.
pub fn cgp_channel(e: &KrausChannel) -> CgpResult {
    let d = e.dim();
    let df = d as f64;
    let mut sum = 0.0;
    for i in 0..d {
        for l in 0..d {
            for m in 0..d {
                if l == m {
                    continue;
                }
                let v: num_complex::Complex64 = e
                    .kraus()
                    .iter()
                    .map(|a| a[(l, i)] * a[(m, i)].conj())
                    .sum();
                sum += v.norm_sqr();
            }
        }
    }
    CgpResult::from_raw(sum / (df * (df + 1.0)), d)
}

/// CGP of `u` relative to the basis obtained by the right action of `v`:
/// `cgp_unitary(v^dag u v)`.
///
/// Errors if either matrix is non-unitary or the dimensions differ.
pub fn cgp_basis_changed(u: &CMat, v: &CMat) -> Result<CgpResult> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{} but basis change is {}x{}",
            u.nrows(),
            u.ncols(),
            v.nrows(),
            v.ncols()
        )));
    }
    matrix::require_unitary(u, matrix::STRUCT_TOL)?;
    matrix::require_unitary(v, matrix::STRUCT_TOL)?;
    cgp_unitary(&(v.adjoint() * u * v))
}

/// Whether `u` maps the computational basis to a mutually unbiased one:
/// every `|u_ij|^2` equals `1/d` within `tol`. Equivalent to normalized CGP
/// equal to 1. Assumes `u` is unitary.
pub fn is_mub_pair(u: &CMat, tol: f64) -> bool {
    let d = u.nrows() as f64;
    u.iter().all(|z| (z.norm_sqr() - 1.0 / d).abs() <= tol)
}

/// Convex mixture of unitary conjugations as a Kraus channel
/// (`{sqrt(p_k) U_k}`); forwards to [`KrausChannel::mixture`].
pub fn mixture_channel(us: &[CMat], ps: &[f64]) -> Result<KrausChannel> {
    KrausChannel::mixture(us, ps)
}

/// One grid point of a three-unitary mixture scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// Normalized CGP of the mixture `p1 U1 + p2 U2 + p3 U3`.
    pub normalized: f64,
}

/// Normalized CGP of `p1 U1 + p2 U2 + p3 U3` over the barycentric grid with
/// step `1/grid_steps`, boundary included, ordered lexicographically in
/// `(p1, p2)`.
///
/// Errors unless exactly three same-dimension unitaries are given and
/// `grid_steps >= 1`.
pub fn mixture_scan(us: &[CMat], grid_steps: usize) -> Result<Vec<ScanPoint>> {
    if us.len() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "mixture scan needs exactly 3 unitaries, got {}",
            us.len()
        )));
    }
    if us[1].shape() != us[0].shape() || us[2].shape() != us[0].shape() {
        return Err(Error::DimensionMismatch(
            "mixture scan unitaries must share one dimension".into(),
        ));
    }
    if grid_steps < 1 {
        return Err(Error::InvalidArgument(
            "grid_steps must be at least 1".into(),
        ));
    }
    for u in us {
        matrix::require_unitary(u, matrix::STRUCT_TOL)?;
    }
    let steps = grid_steps as f64;
    let mut grid = Vec::new();
    for a in 0..=grid_steps {
        for b in 0..=(grid_steps - a) {
            grid.push((a, b));
        }
    }
    grid.into_par_iter()
        .map(|(a, b)| {
            let p1 = a as f64 / steps;
            let p2 = b as f64 / steps;
            let p3 = (grid_steps - a - b) as f64 / steps;
            let e = KrausChannel::mixture(us, &[p1, p2, p3])?;
            Ok(ScanPoint {
                p1,
                p2,
                p3,
                normalized: cgp_channel(&e).normalized,
            })
        })
        .collect()
}
