//! Coherence generating power of unitary maps and unital quantum channels.
//!
//! A fixed orthonormal basis of a d-dimensional Hilbert space singles out the
//! *incoherent* states: density matrices diagonal in that basis. The coherence
//! generating power (CGP) of a unitary `U` is the average coherence it creates
//! when fed uniformly random incoherent pure states, with coherence measured
//! by the squared 2-norm of the off-diagonal part of the output state. The
//! same construction extends to trace-preserving unital Kraus channels, and a
//! weighted variant measures the asymmetry generated relative to a
//! nondegenerate Hamiltonian.
//!
//! The crate provides three independent computational routes and the tooling
//! to compare them:
//!
//! * closed-form evaluation from matrix entries ([`power`], [`asymmetry`]),
//! * a two-copy protocol simulation that extracts the same quantity from
//!   swap-operator expectation values ([`protocol`]),
//! * direct Monte Carlo averaging over random incoherent inputs
//!   ([`protocol`]).
//!
//! [`ensembles`] supplies deterministic, reproducibly seeded samplers for
//! Haar-random unitaries and states and for the probability simplex;
//! [`statistics`] builds distribution summaries, goodness-of-fit tests, and
//! scaling fits of the CGP over those ensembles; [`fixtures`] constructs the
//! named unitaries used in examples and tests; [`io`] defines the JSON/CSV
//! wire formats consumed by the `cgp` command-line tool.

pub mod asymmetry;
pub mod channel;
pub mod coherence;
pub mod ensembles;
mod error;
pub mod fixtures;
pub mod io;
pub mod matrix;
pub mod power;
pub mod protocol;
pub mod statistics;

pub use channel::KrausChannel;
pub use error::{Error, Result};
pub use matrix::{CMat, DensityMatrix, PureState};
pub use power::CgpResult;
