//! Basis-dependent coherence: the dephasing and off-diagonal projectors on
//! operator space, the squared 2-norm and trace-norm coherence measures of a
//! state, and detectors for incoherent unitaries and channels.
//!
//! Everything here is relative to the fixed computational basis; measure a
//! different basis by conjugating the operator first.

use num_complex::Complex64;

use crate::channel::KrausChannel;
use crate::error::Result;
use crate::matrix::{self, CMat, DensityMatrix};

/// Dephasing map: keep the diagonal, zero everything else.
pub fn dephase(x: &CMat) -> CMat {
    assert_eq!(x.nrows(), x.ncols(), "dephasing needs a square matrix");
    let d = x.nrows();
    let mut out = CMat::zeros(d, d);
    for i in 0..d {
        out[(i, i)] = x[(i, i)];
    }
    out
}

/// Off-diagonal projector, the complement of [`dephase`]: zero the diagonal,
/// keep everything else.
pub fn q_project(x: &CMat) -> CMat {
    assert_eq!(x.nrows(), x.ncols(), "off-diagonal projection needs a square matrix");
    let mut out = x.clone();
    for i in 0..out.nrows() {
        out[(i, i)] = matrix::c(0.0, 0.0);
    }
    out
}

/// Sum of `|x_lm|^2` over the off-diagonal entries: the squared 2-norm of
/// `q_project(x)`, evaluated without forming it.
pub fn offdiag_norm2_sq(x: &CMat) -> f64 {
    assert_eq!(x.nrows(), x.ncols(), "off-diagonal norm needs a square matrix");
    let d = x.nrows();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += x[(i, j)].norm_sqr();
            }
        }
    }
    sum
}

/// 2-norm coherence of a state: the squared Hilbert–Schmidt norm of its
/// off-diagonal part.
pub fn c_b(rho: &DensityMatrix) -> f64 {
    offdiag_norm2_sq(rho.mat())
}

/// Trace-norm coherence of a state: the trace norm of its off-diagonal part.
///
/// Errors with [`Error::SvdFailure`] if the singular values cannot be
/// computed.
pub fn c_b_tilde(rho: &DensityMatrix) -> Result<f64> {
    matrix::trace_norm(&q_project(rho.mat()))
}

/// Permutation-with-phases form of an incoherent unitary:
/// `U |i> = phases[i] |permutation[i]>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationPhase {
    pub permutation: Vec<usize>,
    pub phases: Vec<Complex64>,
}

/// Decide whether a unitary is incoherent (maps basis states to basis states
/// up to phases) and, if so, return its permutation-phase form.
///
/// Errors if `u` is not unitary within `tol`.
pub fn is_incoherent_unitary(u: &CMat, tol: f64) -> Result<Option<PermutationPhase>> {
    matrix::require_unitary(u, tol)?;
    let d = u.nrows();
    let mut permutation = vec![0usize; d];
    let mut phases = vec![matrix::c(0.0, 0.0); d];
    let mut hit = vec![false; d];
    for col in 0..d {
        let mut best_row = 0;
        let mut best_mod = -1.0;
        for row in 0..d {
            let m = u[(row, col)].norm();
            if m > best_mod {
                best_mod = m;
                best_row = row;
            }
        }
        if (best_mod - 1.0).abs() > tol || hit[best_row] {
            return Ok(None);
        }
        hit[best_row] = true;
        permutation[col] = best_row;
        phases[col] = u[(best_row, col)];
    }
    Ok(Some(PermutationPhase { permutation, phases }))
}

/// Decide whether a channel commutes with the dephasing map, checked on the
/// matrix-unit spanning set of operator space.
pub fn is_incoherent_channel(e: &KrausChannel, tol: f64) -> bool {
    let d = e.dim();
    for l in 0..d {
        for m in 0..d {
            let mut unit = CMat::zeros(d, d);
            unit[(l, m)] = matrix::c(1.0, 0.0);
            let out = e.apply(&unit);
            let dephased_first = if l == m { out.clone() } else { CMat::zeros(d, d) };
            let dephased_second = dephase(&out);
            if matrix::max_abs_diff(&dephased_first, &dephased_second) > tol {
                return false;
            }
        }
    }
    true
}
