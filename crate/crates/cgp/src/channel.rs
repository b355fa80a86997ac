//! Trace-preserving unital quantum channels in Kraus form.
//!
//! Only the doubly stochastic case is represented: construction validates
//! both trace preservation (`sum_k A_k^dag A_k = I`) and unitality
//! (`sum_k A_k A_k^dag = I`), each within [`matrix::STRUCT_TOL`].

use crate::ensembles::SimplexPoint;
use crate::error::{Error, Result};
use crate::matrix::{self, CMat};

/// Trace-preserving unital channel `x -> sum_k A_k x A_k^dag`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<CMat>,
}

impl KrausChannel {
    /// Validate and wrap a list of Kraus operators.
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let dim = first.nrows();
        if dim == 0 {
            return Err(Error::InvalidChannel("zero-dimensional Kraus operator".into()));
        }
        for (k, a) in kraus.iter().enumerate() {
            if a.nrows() != dim || a.ncols() != dim {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operator {k} is {}x{}, expected {dim}x{dim}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operator {k} has non-finite entries"
                )));
            }
        }
        let eye = CMat::identity(dim, dim);
        let mut tp_sum = CMat::zeros(dim, dim);
        let mut unital_sum = CMat::zeros(dim, dim);
        for a in &kraus {
            tp_sum += a.adjoint() * a;
            unital_sum += a * a.adjoint();
        }
        let tp_dev = matrix::max_abs_diff(&tp_sum, &eye);
        if tp_dev > matrix::STRUCT_TOL {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving: deviation {tp_dev:.3e}"
            )));
        }
        let unital_dev = matrix::max_abs_diff(&unital_sum, &eye);
        if unital_dev > matrix::STRUCT_TOL {
            return Err(Error::InvalidChannel(format!(
                "not unital: deviation {unital_dev:.3e}"
            )));
        }
        Ok(Self { dim, kraus })
    }

    /// The channel `x -> u x u^dag` of a single unitary.
    pub fn from_unitary(u: &CMat) -> Result<Self> {
        matrix::require_unitary(u, matrix::STRUCT_TOL)?;
        Ok(Self {
            dim: u.nrows(),
            kraus: vec![u.clone()],
        })
    }

    /// Convex mixture of unitary conjugations: Kraus operators
    /// `sqrt(p_k) U_k`.
    pub fn mixture(us: &[CMat], ps: &[f64]) -> Result<Self> {
        if us.is_empty() || us.len() != ps.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} unitaries but {} probabilities",
                us.len(),
                ps.len()
            )));
        }
        let probs = SimplexPoint::new(ps.to_vec())?;
        let dim = us[0].nrows();
        let mut kraus = Vec::with_capacity(us.len());
        for (k, u) in us.iter().enumerate() {
            if u.nrows() != dim || u.ncols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "unitary {k} is {}x{}, expected {dim}x{dim}",
                    u.nrows(),
                    u.ncols()
                )));
            }
            matrix::require_unitary(u, matrix::STRUCT_TOL)?;
            let w = matrix::c(probs.probs()[k].sqrt(), 0.0);
            kraus.push(u.map(|z| z * w));
        }
        Self::new(kraus)
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The Kraus operators.
    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// Apply the channel to an operator (not necessarily a state).
    pub fn apply(&self, x: &CMat) -> CMat {
        assert_eq!(
            x.nrows(),
            self.dim,
            "operator dimension does not match the channel"
        );
        assert_eq!(x.nrows(), x.ncols(), "channel input must be square");
        let mut out = CMat::zeros(self.dim, self.dim);
        for a in &self.kraus {
            out += a * x * a.adjoint();
        }
        out
    }

    /// Composition `after ∘ self`: apply this channel first, then `after`.
    pub fn then(&self, after: &KrausChannel) -> Result<KrausChannel> {
        if after.dim != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose a dimension-{} channel after a dimension-{} one",
                after.dim, self.dim
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * after.kraus.len());
        for b in &after.kraus {
            for a in &self.kraus {
                kraus.push(b * a);
            }
        }
        Self::new(kraus)
    }
}
