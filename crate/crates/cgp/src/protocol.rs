//! Independent oracles for the CGP closed forms.
//!
//! Two routes that share no code with [`crate::power`]:
//!
//! 1. **Two-copy protocol simulation.** Prepare the classically correlated
//!    state `rho_B = (1/d) sum_i |ii><ii|`, push both copies through the map,
//!    optionally dephase both copies, and read off swap-operator expectation
//!    values. For a unitary, `CGP = (1 - tr(S omega)) / (d + 1)`; for a
//!    channel, `CGP = (tr(S omega~) - tr(S omega)) / (d + 1)` where `omega~`
//!    skips the final dephasing.
//! 2. **Monte Carlo.** Average the output coherence `c_B` directly over
//!    uniformly random diagonal input states.
//!
//! The two-copy objects are dense `d^2 x d^2` matrices, fine for oracle duty
//! at `d <= 16` but deliberately not used by the closed forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::coherence::{dephase, offdiag_norm2_sq};
use crate::ensembles::{self, RngSeed, StreamDomain};
use crate::error::Result;
use crate::matrix::{self, kron, rho_b, swap_operator, CMat};
use crate::statistics::mean_and_se;

/// Swap expectation values and derived CGP from one protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTrace {
    /// Hilbert-space dimension of one copy.
    pub dim: usize,
    /// `tr(S omega)` with both copies dephased after the map.
    pub s_expectation_omega: f64,
    /// `tr(S omega~)` without the final dephasing (exactly 1 for unitaries).
    pub s_expectation_omega_tilde: f64,
    /// CGP derived from the two expectation values.
    pub cgp_value: f64,
}

/// Mean and standard error of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    /// Sample standard deviation divided by `sqrt(n_samples)`.
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: RngSeed,
}

fn swap_expectation(omega: &CMat, d: usize) -> f64 {
    let s = swap_operator(d);
    (&s * omega).trace().re
}

/// Simulate the two-copy swap protocol for a unitary map.
///
/// Errors if `u` is not unitary within [`matrix::STRUCT_TOL`].
pub fn simulate_protocol_unitary(u: &CMat) -> Result<ProtocolTrace> {
    matrix::require_unitary(u, matrix::STRUCT_TOL)?;
    let d = u.nrows();
    let rho = rho_b(d).into_mat();
    let uu = kron(u, u);
    let omega_tilde = &uu * &rho * uu.adjoint();
    let s_tilde = swap_expectation(&omega_tilde, d);
    // Dephasing both copies is dephasing in the product basis.
    let omega = dephase(&omega_tilde);
    let s_omega = swap_expectation(&omega, d);
    Ok(ProtocolTrace {
        dim: d,
        s_expectation_omega: s_omega,
        s_expectation_omega_tilde: s_tilde,
        cgp_value: (1.0 - s_omega) / (d as f64 + 1.0),
    })
}

/// Simulate the two-copy swap protocol for a unital Kraus channel.
pub fn simulate_protocol_channel(e: &KrausChannel) -> ProtocolTrace {
    let d = e.dim();
    let rho = rho_b(d).into_mat();
    let mut omega_tilde = CMat::zeros(d * d, d * d);
    for a in e.kraus() {
        for b in e.kraus() {
            let ab = kron(a, b);
            omega_tilde += &ab * &rho * ab.adjoint();
        }
    }
    let s_tilde = swap_expectation(&omega_tilde, d);
    let omega = dephase(&omega_tilde);
    let s_omega = swap_expectation(&omega, d);
    ProtocolTrace {
        dim: d,
        s_expectation_omega: s_omega,
        s_expectation_omega_tilde: s_tilde,
        cgp_value: (s_tilde - s_omega) / (d as f64 + 1.0),
    }
}

fn monte_carlo<F>(d: usize, n: usize, seed: RngSeed, sample_value: F) -> MonteCarloEstimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(n >= 1, "need at least one sample");
    let values: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ensembles::indexed_rng(seed, StreamDomain::MonteCarloCgp, i);
            let p = ensembles::uniform_simplex(d, &mut rng);
            sample_value(p.probs())
        })
        .collect();
    let (mean, std_error) = mean_and_se(&values);
    MonteCarloEstimate {
        mean,
        std_error,
        n_samples: n,
        seed,
    }
}

/// Monte Carlo CGP of a unitary: average output coherence over uniformly
/// random diagonal input states.
///
/// Errors if `u` is not unitary within [`matrix::STRUCT_TOL`].
pub fn monte_carlo_cgp_unitary(u: &CMat, n: usize, seed: RngSeed) -> Result<MonteCarloEstimate> {
    matrix::require_unitary(u, matrix::STRUCT_TOL)?;
    let d = u.nrows();
    Ok(monte_carlo(d, n, seed, |probs| {
        // U diag(p) U^dag, assembled as (U diag(p)) U^dag.
        let mut scaled = u.clone();
        for j in 0..d {
            for i in 0..d {
                scaled[(i, j)] *= probs[j];
            }
        }
        let out = scaled * u.adjoint();
        offdiag_norm2_sq(&out)
    }))
}

/// Monte Carlo CGP of a unital Kraus channel.
pub fn monte_carlo_cgp_channel(e: &KrausChannel, n: usize, seed: RngSeed) -> MonteCarloEstimate {
    let d = e.dim();
    monte_carlo(d, n, seed, |probs| {
        let mut diag = CMat::zeros(d, d);
        for (i, p) in probs.iter().enumerate() {
            diag[(i, i)] = matrix::c(*p, 0.0);
        }
        offdiag_norm2_sq(&e.apply(&diag))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{self, StreamDomain};
    use crate::fixtures;
    use crate::matrix::{c, max_abs_diff, DensityMatrix};
    use crate::power::{cgp_channel, cgp_unitary, max_cgp};
    use approx::assert_abs_diff_eq;
    use rand_chacha::ChaCha8Rng;

    fn test_rng(index: u64) -> ChaCha8Rng {
        ensembles::indexed_rng(47.into(), StreamDomain::HaarUnitary, index)
    }

    #[test]
    fn identity_protocol_run() {
        let t = simulate_protocol_unitary(&CMat::identity(3, 3)).unwrap();
        assert_abs_diff_eq!(t.s_expectation_omega, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.s_expectation_omega_tilde, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.cgp_value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fourier_protocol_run_reaches_the_floor() {
        let d = 4;
        let t = simulate_protocol_unitary(&fixtures::fourier(d)).unwrap();
        assert_abs_diff_eq!(t.s_expectation_omega, 1.0 / d as f64, epsilon = 1e-10);
        assert_abs_diff_eq!(t.s_expectation_omega_tilde, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(t.cgp_value, max_cgp(d), epsilon = 1e-12);
    }

    #[test]
    fn protocol_matches_closed_form_on_random_unitaries() {
        let mut k = 0;
        for d in 2..=6 {
            for _ in 0..20 {
                let u = ensembles::haar_unitary(d, &mut test_rng(k));
                k += 1;
                let t = simulate_protocol_unitary(&u).unwrap();
                let closed = cgp_unitary(&u).unwrap().raw;
                assert!(
                    (t.cgp_value - closed).abs() <= 1e-10,
                    "protocol {} vs closed {} at d={}",
                    t.cgp_value,
                    closed,
                    d
                );
                assert_abs_diff_eq!(t.s_expectation_omega_tilde, 1.0, epsilon = 1e-10);
                assert!(t.s_expectation_omega >= -1.0 - 1e-10);
                assert!(t.s_expectation_omega <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn unitary_channel_protocol_matches_unitary_protocol() {
        let u = ensembles::haar_unitary(4, &mut test_rng(100));
        let via_unitary = simulate_protocol_unitary(&u).unwrap();
        let via_channel = simulate_protocol_channel(&KrausChannel::from_unitary(&u).unwrap());
        assert_abs_diff_eq!(
            via_unitary.cgp_value,
            via_channel.cgp_value,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            via_unitary.s_expectation_omega,
            via_channel.s_expectation_omega,
            epsilon = 1e-12
        );
    }

    #[test]
    fn dephasing_channel_has_equal_traces_and_zero_cgp() {
        let d = 3;
        let kraus: Vec<CMat> = (0..d)
            .map(|i| {
                let mut m = CMat::zeros(d, d);
                m[(i, i)] = c(1.0, 0.0);
                m
            })
            .collect();
        let t = simulate_protocol_channel(&KrausChannel::new(kraus).unwrap());
        assert_abs_diff_eq!(
            t.s_expectation_omega,
            t.s_expectation_omega_tilde,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(t.cgp_value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn channel_protocol_matches_channel_closed_form() {
        let mut rng = test_rng(200);
        for _ in 0..20 {
            let us: Vec<CMat> = (0..3)
                .map(|_| ensembles::haar_unitary(3, &mut rng))
                .collect();
            let ps = ensembles::uniform_simplex(3, &mut rng).into_vec();
            let e = KrausChannel::mixture(&us, &ps).unwrap();
            let t = simulate_protocol_channel(&e);
            let closed = cgp_channel(&e).raw;
            assert!((t.cgp_value - closed).abs() <= 1e-10);
        }
    }

    #[test]
    fn protocol_intermediate_states_are_valid() {
        // Rebuild the two-copy states exactly as the simulation does and
        // validate them as density matrices.
        let mut rng = test_rng(300);
        let d = 3;
        let us: Vec<CMat> = (0..2).map(|_| ensembles::haar_unitary(d, &mut rng)).collect();
        let e = KrausChannel::mixture(&us, &[0.5, 0.5]).unwrap();
        let rho = rho_b(d).into_mat();
        let mut omega_tilde = CMat::zeros(d * d, d * d);
        for a in e.kraus() {
            for b in e.kraus() {
                let ab = kron(a, b);
                omega_tilde += &ab * &rho * ab.adjoint();
            }
        }
        DensityMatrix::new(omega_tilde.clone()).unwrap();
        DensityMatrix::new(dephase(&omega_tilde)).unwrap();
    }

    #[test]
    fn protocol_start_from_dephased_entangled_state_is_identical() {
        // The correlated input can be prepared either directly or by
        // dephasing the maximally entangled state; the protocol outcome is
        // identical entrywise.
        let d = 4;
        let u = ensembles::haar_unitary(d, &mut test_rng(400));
        let uu = kron(&u, &u);
        let direct = rho_b(d).into_mat();
        let via_entangled = dephase(&matrix::max_entangled(d).projector());
        assert!(max_abs_diff(&direct, &via_entangled) <= 1e-14);
        let omega_a = dephase(&(&uu * &direct * uu.adjoint()));
        let omega_b = dephase(&(&uu * &via_entangled * uu.adjoint()));
        assert!(max_abs_diff(&omega_a, &omega_b) <= 1e-14);
    }

    #[test]
    fn monte_carlo_is_exact_for_incoherent_unitaries() {
        let mut rng = test_rng(500);
        let w = ensembles::random_permutation_phase(4, &mut rng);
        let est = monte_carlo_cgp_unitary(&w, 200, 5.into()).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.n_samples, 200);
    }

    #[test]
    fn monte_carlo_hadamard_matches_one_sixth() {
        let h = fixtures::hadamard(2).unwrap();
        let est = monte_carlo_cgp_unitary(&h, 100_000, 6.into()).unwrap();
        assert!(est.std_error < 3e-3);
        assert!(
            (est.mean - 1.0 / 6.0).abs() <= 3.0 * est.std_error,
            "mean {} SE {}",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn monte_carlo_matches_closed_form_for_random_channel() {
        let mut rng = test_rng(600);
        let us: Vec<CMat> = (0..3)
            .map(|_| ensembles::haar_unitary(4, &mut rng))
            .collect();
        let e = KrausChannel::mixture(&us, &[0.5, 0.25, 0.25]).unwrap();
        let closed = cgp_channel(&e).raw;
        let est = monte_carlo_cgp_channel(&e, 100_000, 7.into());
        assert!(est.std_error < 3e-3);
        assert!((est.mean - closed).abs() <= 3.0 * est.std_error);
    }

    #[test]
    fn monte_carlo_is_deterministic_and_thread_count_independent() {
        let u = ensembles::haar_unitary(3, &mut test_rng(700));
        let a = monte_carlo_cgp_unitary(&u, 5000, 8.into()).unwrap();
        let b = monte_carlo_cgp_unitary(&u, 5000, 8.into()).unwrap();
        assert_eq!(a, b);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| monte_carlo_cgp_unitary(&u, 5000, 8.into()).unwrap());
        let quad = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| monte_carlo_cgp_unitary(&u, 5000, 8.into()).unwrap());
        assert_eq!(single, quad);
        assert_eq!(a, single);
        let different_seed = monte_carlo_cgp_unitary(&u, 5000, 9.into()).unwrap();
        assert_ne!(a.mean, different_seed.mean);
    }

    #[test]
    fn monte_carlo_rejects_non_unitary_input() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        assert!(monte_carlo_cgp_unitary(&m, 10, 0.into()).is_err());
    }
}
