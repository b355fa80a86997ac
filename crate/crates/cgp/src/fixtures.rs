//! Named unitary fixtures: discrete Fourier matrices, real Hadamard tensor
//! powers, row-swapped variants, and seeded random draws.
//!
//! The Fourier and Hadamard families are mutually unbiased with the
//! computational basis (every entry has squared modulus `1/d`), so they
//! saturate the coherence generating power bound.

use crate::ensembles::{self, RngSeed, StreamDomain};
use crate::error::{Error, Result};
use crate::matrix::{self, CMat};

/// The identity on `d` levels.
pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Discrete Fourier matrix: entries `exp(i 2*pi*h*m/d) / sqrt(d)`.
pub fn fourier(d: usize) -> CMat {
    assert!(d >= 1, "dimension must be positive");
    let scale = 1.0 / (d as f64).sqrt();
    CMat::from_fn(d, d, |h, m| {
        let angle = std::f64::consts::TAU * (h as f64) * (m as f64) / (d as f64);
        matrix::c(scale * angle.cos(), scale * angle.sin())
    })
}

/// Real Hadamard matrix as a tensor power of the 2x2 case.
///
/// Errors unless `d` is a power of two (`d = 1` gives `[[1]]`).
pub fn hadamard(d: usize) -> Result<CMat> {
    if d == 0 || !d.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "Hadamard fixture needs a power-of-two dimension, got {d}"
        )));
    }
    let s = 1.0 / 2.0_f64.sqrt();
    let h2 = CMat::from_row_slice(
        2,
        2,
        &[
            matrix::c(s, 0.0),
            matrix::c(s, 0.0),
            matrix::c(s, 0.0),
            matrix::c(-s, 0.0),
        ],
    );
    let mut h = CMat::identity(1, 1);
    while h.nrows() < d {
        h = matrix::kron(&h, &h2);
    }
    Ok(h)
}

/// The matrix with rows `i` and `j` exchanged.
///
/// Errors if either index is out of range.
pub fn swap_rows(u: &CMat, i: usize, j: usize) -> Result<CMat> {
    let d = u.nrows();
    if i >= d || j >= d {
        return Err(Error::InvalidArgument(format!(
            "row indices ({i}, {j}) out of range for {d} rows"
        )));
    }
    let mut v = u.clone();
    v.swap_rows(i, j);
    Ok(v)
}

/// Fourier matrix with rows `i` and `j` exchanged — still mutually unbiased
/// with the computational basis, but a distinct unitary.
pub fn fourier_rowswap(d: usize, i: usize, j: usize) -> Result<CMat> {
    swap_rows(&fourier(d), i, j)
}

/// Seeded Haar-random unitary.
pub fn random_haar(d: usize, seed: RngSeed) -> CMat {
    let mut rng = ensembles::indexed_rng(seed, StreamDomain::Fixture, 0);
    ensembles::haar_unitary(d, &mut rng)
}

/// Seeded random permutation-phase unitary (the generic incoherent unitary).
pub fn random_incoherent(d: usize, seed: RngSeed) -> CMat {
    let mut rng = ensembles::indexed_rng(seed, StreamDomain::Fixture, 1);
    ensembles::random_permutation_phase(d, &mut rng)
}
