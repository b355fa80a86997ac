//! Asymmetry generating power (AGP): how much a unital channel disturbs
//! symmetry with respect to a nondegenerate Hamiltonian whose eigenbasis is
//! the computational basis.
//!
//! For a channel `E` and spectrum `{eps_i}`,
//!
//! ```text
//! A_H(E) = (1/(d(d+1))) * sum_i sum_{l != m} (eps_l - eps_m)^2 |<l| E(|i><i|) |m>|^2 ,
//! ```
//!
//! the average squared 2-norm of the commutator `[H, E(rho)]` over uniformly
//! random diagonal inputs `rho`. The value is sandwiched between
//! `min_gap^2 * CGP` and `max_gap^2 * CGP`.

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::ensembles::{self, RngSeed, StreamDomain};
use crate::error::{Error, Result};
use crate::matrix::{self, CMat};
use crate::power;
use crate::protocol::MonteCarloEstimate;
use crate::statistics::mean_and_se;
use rayon::prelude::*;

/// Spectra closer to degeneracy than this are rejected.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Nondegenerate Hamiltonian, stored as its spectrum in the computational
/// eigenbasis.
///
/// Invariants: at least two levels, all gaps exceed [`DEGENERACY_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpectrum {
    eigenvalues: Vec<f64>,
    min_gap: f64,
    max_gap: f64,
}

impl HamiltonianSpectrum {
    /// Validate and wrap a spectrum.
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() < 2 {
            return Err(Error::InvalidArgument(
                "a spectrum needs at least 2 levels".into(),
            ));
        }
        if eigenvalues.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidArgument(
                "spectrum levels must be finite".into(),
            ));
        }
        let mut min_gap = f64::INFINITY;
        let mut max_gap: f64 = 0.0;
        for (l, a) in eigenvalues.iter().enumerate() {
            for b in eigenvalues.iter().skip(l + 1) {
                let gap = (a - b).abs();
                min_gap = min_gap.min(gap);
                max_gap = max_gap.max(gap);
            }
        }
        if min_gap < DEGENERACY_TOL {
            return Err(Error::DegenerateSpectrum {
                min_gap,
                tol: DEGENERACY_TOL,
            });
        }
        Ok(Self {
            eigenvalues,
            min_gap,
            max_gap,
        })
    }

    /// Number of levels.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// The energy levels.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Smallest level gap.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// Largest level gap.
    pub fn max_gap(&self) -> f64 {
        self.max_gap
    }

    /// The spectrum shifted by a constant (gaps unchanged).
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        Self::new(self.eigenvalues.iter().map(|e| e + shift).collect())
    }

    /// The spectrum scaled by a factor (gaps scaled by `|factor|`).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.eigenvalues.iter().map(|e| e * factor).collect())
    }

    /// The commutator `[H, x]`, with entries `(eps_l - eps_m) x_lm`.
    pub fn commutator(&self, x: &CMat) -> CMat {
        let d = self.dim();
        assert_eq!(x.nrows(), d, "operator dimension does not match spectrum");
        assert_eq!(x.nrows(), x.ncols(), "commutator needs a square matrix");
        CMat::from_fn(d, d, |l, m| {
            x[(l, m)] * (self.eigenvalues[l] - self.eigenvalues[m])
        })
    }
}

/// An AGP value with its sandwich bounds `min_gap^2 * CGP` and
/// `max_gap^2 * CGP`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgpResult {
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

/// Closed-form AGP of a unital channel with respect to a spectrum.
///
/// Errors if the channel and spectrum dimensions differ.
pub fn agp(e: &KrausChannel, h: &HamiltonianSpectrum) -> Result<AgpResult> {
    if e.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel dimension {} vs spectrum dimension {}",
            e.dim(),
            h.dim()
        )));
    }
    let d = e.dim();
    let eps = h.eigenvalues();
    let mut sum = 0.0;
    for i in 0..d {
        let mut unit = CMat::zeros(d, d);
        unit[(i, i)] = matrix::c(1.0, 0.0);
        let out = e.apply(&unit);
        for l in 0..d {
            for m in 0..d {
                if l == m {
                    continue;
                }
                let gap = eps[l] - eps[m];
                sum += gap * gap * out[(l, m)].norm_sqr();
            }
        }
    }
    let df = d as f64;
    let value = sum / (df * (df + 1.0));
    let cgp = power::cgp_channel(e).raw;
    Ok(AgpResult {
        value,
        lower_bound: h.min_gap() * h.min_gap() * cgp,
        upper_bound: h.max_gap() * h.max_gap() * cgp,
    })
}

/// Monte Carlo AGP: average `norm2_sq([H, E(rho)])` over uniformly random
/// diagonal states `rho`.
///
/// Errors if the channel and spectrum dimensions differ.
pub fn agp_monte_carlo(
    e: &KrausChannel,
    h: &HamiltonianSpectrum,
    n: usize,
    seed: RngSeed,
) -> Result<MonteCarloEstimate> {
    if e.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel dimension {} vs spectrum dimension {}",
            e.dim(),
            h.dim()
        )));
    }
    assert!(n >= 1, "need at least one sample");
    let d = e.dim();
    let values: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ensembles::indexed_rng(seed, StreamDomain::MonteCarloAgp, i);
            let p = ensembles::uniform_simplex(d, &mut rng);
            let mut diag = CMat::zeros(d, d);
            for (k, prob) in p.probs().iter().enumerate() {
                diag[(k, k)] = matrix::c(*prob, 0.0);
            }
            matrix::norm2_sq(&h.commutator(&e.apply(&diag)))
        })
        .collect();
    let (mean, std_error) = mean_and_se(&values);
    Ok(MonteCarloEstimate {
        mean,
        std_error,
        n_samples: n,
        seed,
    })
}

/// Check that the AGP of the unitary channel `u` is unchanged by a uniform
/// spectrum shift (the value depends on the gaps only). Assumes `u` unitary.
pub fn gap_spectrum_invariance_check(u: &CMat, h: &HamiltonianSpectrum, shift: f64) -> bool {
    let base = unitary_agp_value(u, h.eigenvalues());
    let shifted: Vec<f64> = h.eigenvalues().iter().map(|e| e + shift).collect();
    (base - unitary_agp_value(u, &shifted)).abs() <= 1e-12
}

fn unitary_agp_value(u: &CMat, eps: &[f64]) -> f64 {
    let d = u.nrows();
    let mut sum = 0.0;
    for i in 0..d {
        for l in 0..d {
            for m in 0..d {
                if l == m {
                    continue;
                }
                let gap = eps[l] - eps[m];
                sum += gap * gap * u[(l, i)].norm_sqr() * u[(m, i)].norm_sqr();
            }
        }
    }
    sum / (d as f64 * (d as f64 + 1.0))
}

/// Diagonal unitary with the given phase angles — the basic covariant
/// fixture (commutes with any Hamiltonian diagonal in this basis).
pub fn diagonal_phase_unitary(angles: &[f64]) -> CMat {
    let d = angles.len();
    let mut u = CMat::zeros(d, d);
    for (i, theta) in angles.iter().enumerate() {
        u[(i, i)] = matrix::c(theta.cos(), theta.sin());
    }
    u
}

#[allow(dead_code)]
fn covariance_witness(e: &KrausChannel, h: &HamiltonianSpectrum) -> f64 {
    // Max deviation of [H, E(x)] from E([H, x]) on matrix units — used in
    // tests to confirm covariant fixtures really are covariant.
    let d = e.dim();
    let mut dev: f64 = 0.0;
    for l in 0..d {
        for m in 0..d {
            let mut unit = CMat::zeros(d, d);
            unit[(l, m)] = matrix::c(1.0, 0.0);
            let hx = h.commutator(&e.apply(&unit));
            let xh = e.apply(&h.commutator(&unit));
            dev = dev.max(matrix::max_abs_diff(&hx, &xh));
        }
    }
    dev
}
