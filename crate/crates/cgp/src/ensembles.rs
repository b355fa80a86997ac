//! Random ensembles: Haar-distributed unitaries and pure states, and the
//! uniform (flat Dirichlet) distribution on the probability simplex.
//!
//! Every sampler draws from a caller-supplied RNG; reproducible batch work
//! derives one independent counter-based stream per sample via
//! [`indexed_rng`], so results are identical for a given seed no matter how
//! many worker threads the batch is split across.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c, CMat, CVec, PureState};

/// Master seed for a reproducible run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}

/// Independent stream families carved out of one master seed. Each sampler
/// family gets its own tag so that, for example, the i-th Monte Carlo state
/// and the i-th Haar unitary of the same run never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamDomain {
    HaarUnitary = 1,
    HaarState = 2,
    Simplex = 3,
    MonteCarloCgp = 4,
    MonteCarloAgp = 5,
    Fixture = 6,
}

/// Counter-based RNG for sample `index` of stream family `domain` under a
/// master seed. Distinct `(domain, index)` pairs yield statistically
/// independent streams; equal pairs yield bitwise-identical ones.
pub fn indexed_rng(seed: RngSeed, domain: StreamDomain, index: u64) -> ChaCha8Rng {
    debug_assert!(index < (1 << 48), "stream index overflows the domain tag");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream(((domain as u64) << 48) | index);
    rng
}

fn standard_complex(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Haar-distributed `d x d` unitary, drawn by QR decomposition of a complex
/// Ginibre matrix with the phases of the R diagonal folded back into Q.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> CMat {
    assert!(d >= 1, "dimension must be at least 1");
    let mut g = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = standard_complex(rng);
        }
    }
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let modulus = rjj.norm();
        // The diagonal of R vanishes only on a measure-zero set; fall back to
        // no correction if it does.
        let phase = if modulus > 0.0 { rjj / modulus } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-distributed pure state: a normalized vector of i.i.d. standard
/// complex Gaussians.
pub fn haar_state(d: usize, rng: &mut impl Rng) -> PureState {
    assert!(d >= 1, "dimension must be at least 1");
    loop {
        let v = CVec::from_fn(d, |_, _| standard_complex(rng));
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// Point on the probability simplex.
///
/// Invariant: entries are nonnegative and sum to 1 within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    probs: Vec<f64>,
}

impl SimplexPoint {
    /// Validate and wrap a probability vector.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbability("empty probability vector".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidProbability(
                "entries must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbability(format!(
                "entries sum to {sum}, expected 1 within 1e-12"
            )));
        }
        Ok(Self { probs })
    }

    /// Number of outcomes.
    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    /// The probabilities.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Consume and return the probabilities.
    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

/// Uniform (flat Dirichlet) sample from the probability simplex, drawn as
/// normalized i.i.d. unit-rate exponentials.
pub fn uniform_simplex(d: usize, rng: &mut impl Rng) -> SimplexPoint {
    assert!(d >= 1, "dimension must be at least 1");
    loop {
        let xs: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let sum: f64 = xs.iter().sum();
        if sum > 0.0 && sum.is_finite() {
            let probs = xs.iter().map(|x| x / sum).collect();
            return SimplexPoint::new(probs).expect("normalized exponentials lie on the simplex");
        }
    }
}

/// Diagonal of a dephased Haar-random pure state: the vector of squared
/// amplitude moduli `|<i|psi>|^2`. Distributed identically to
/// [`uniform_simplex`].
pub fn dephased_haar_diagonal(d: usize, rng: &mut impl Rng) -> SimplexPoint {
    let psi = haar_state(d, rng);
    let probs: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    SimplexPoint::new(probs).expect("squared moduli of a unit vector lie on the simplex")
}

/// Uniformly random permutation-phase unitary: a permutation matrix whose
/// nonzero entries carry independent uniform phases.
pub fn random_permutation_phase(d: usize, rng: &mut impl Rng) -> CMat {
    assert!(d >= 1, "dimension must be at least 1");
    // Fisher-Yates shuffle for a uniform permutation.
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let mut u = CMat::zeros(d, d);
    for (col, &row) in perm.iter().enumerate() {
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        u[(row, col)] = c(theta.cos(), theta.sin());
    }
    u
}
