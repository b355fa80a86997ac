//! Dense complex linear algebra: matrix aliases, validated quantum-state
//! types, and the small operator kit (Kronecker products, Hilbert–Schmidt
//! inner product, trace norm, swap operator) everything else builds on.
//!
//! All operators are dense `nalgebra` matrices over `Complex64` in the
//! computational basis; the intended working range is dimension `d <= 64`
//! (two-copy objects up to `4096 x 4096`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the working representation for every operator.
pub type CMat = DMatrix<Complex64>;

/// Dense complex vector.
pub type CVec = DVector<Complex64>;

/// Tolerance for structural validation (unitarity, trace preservation,
/// unitality, Hermiticity of inputs).
pub const STRUCT_TOL: f64 = 1e-10;

/// Tolerance for identities that hold exactly in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// Density-matrix eigenvalues are accepted down to this floor; anything
/// below it fails positivity validation.
pub const PSD_EIGENVALUE_FLOOR: f64 = -1e-10;

/// Shorthand complex constructor.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Hilbert–Schmidt inner product `tr(x^dag y)`.
///
/// Errors if the operands are not square matrices of the same dimension.
pub fn hs_inner(x: &CMat, y: &CMat) -> Result<Complex64> {
    if x.nrows() != x.ncols() || x.shape() != y.shape() {
        return Err(Error::DimensionMismatch(format!(
            "hs_inner needs equal square shapes, got {}x{} and {}x{}",
            x.nrows(),
            x.ncols(),
            y.nrows(),
            y.ncols()
        )));
    }
    Ok(x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum())
}

/// Squared Hilbert–Schmidt (Frobenius) norm: the sum of `|x_ij|^2`.
pub fn norm2_sq(x: &CMat) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Trace norm: the sum of singular values.
///
/// Errors with [`Error::SvdFailure`] if the SVD iteration does not converge.
pub fn trace_norm(x: &CMat) -> Result<f64> {
    let svd = x
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(Error::SvdFailure)?;
    Ok(svd.singular_values.iter().sum())
}

/// Swap operator on the two-copy space: `S |i,j> = |j,i>`, a `d^2 x d^2`
/// permutation matrix.
pub fn swap_operator(d: usize) -> CMat {
    let mut s = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(i * d + j, j * d + i)] = c(1.0, 0.0);
        }
    }
    s
}

/// Maximally entangled two-copy state `sum_i |i,i> / sqrt(d)`.
pub fn max_entangled(d: usize) -> PureState {
    let mut v = CVec::zeros(d * d);
    let amp = c(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    PureState::new(v).expect("uniform diagonal superposition is normalized")
}

/// The two-copy reference state `sum_i |i,i><i,i| / d`: the dephased
/// maximally entangled state, diagonal and entanglement-free.
pub fn rho_b(d: usize) -> DensityMatrix {
    let mut m = CMat::zeros(d * d, d * d);
    let p = c(1.0 / d as f64, 0.0);
    for i in 0..d {
        m[(i * d + i, i * d + i)] = p;
    }
    DensityMatrix::new(m).expect("uniform diagonal matrix is a valid state")
}

/// Largest entry modulus of `u^dag u - I`, or infinity for non-square input.
pub fn unitarity_deviation(u: &CMat) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let d = u.nrows();
    let gram = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
            dev = dev.max((gram[(i, j)] - target).norm());
        }
    }
    dev
}

/// Whether `u^dag u = I` within `tol` in max entry modulus.
pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    unitarity_deviation(u) <= tol
}

/// Largest entry-modulus difference between two matrices of equal shape
/// (infinity if the shapes differ).
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Ensure `u` is unitary within `tol`, with a descriptive error otherwise.
pub(crate) fn require_unitary(u: &CMat, tol: f64) -> Result<()> {
    let deviation = unitarity_deviation(u);
    if deviation <= tol {
        Ok(())
    } else {
        Err(Error::NotUnitary { deviation, tol })
    }
}

/// Normalized pure state vector.
///
/// Invariant: the amplitude vector has unit 2-norm within [`EXACT_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVec,
}

impl PureState {
    /// Wrap an amplitude vector, validating normalization.
    pub fn new(amplitudes: CVec) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument(
                "pure state needs at least one amplitude".into(),
            ));
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > EXACT_TOL {
            return Err(Error::InvalidArgument(format!(
                "pure state norm is {norm}, expected 1 within {EXACT_TOL:.0e}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize an arbitrary nonzero vector into a state.
    pub fn normalized(v: CVec) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: v / c(norm, 0.0),
        })
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitudes in the computational basis.
    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    /// Rank-one projector `|psi><psi|`.
    pub fn projector(&self) -> CMat {
        let n = self.dim();
        CMat::from_fn(n, n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }
}

/// Validated density matrix: Hermitian, unit trace within [`EXACT_TOL`],
/// and positive semidefinite down to [`PSD_EIGENVALUE_FLOOR`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    /// Validate and wrap a candidate density matrix.
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.is_empty() {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected a nonempty square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix(
                "entries must be finite".into(),
            ));
        }
        let herm_dev = max_abs_diff(&mat, &mat.adjoint());
        if herm_dev > EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian: deviation {herm_dev:.3e}"
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > EXACT_TOL || trace.im.abs() > EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {trace}, expected 1"
            )));
        }
        // Symmetrize before the eigenvalue check so the decomposition sees an
        // exactly Hermitian matrix.
        let herm = (&mat + mat.adjoint()).map(|z| z * 0.5);
        let eig = herm
            .symmetric_eigen()
            .eigenvalues;
        let min_eig = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < PSD_EIGENVALUE_FLOOR {
            return Err(Error::InvalidDensityMatrix(format!(
                "minimum eigenvalue {min_eig:.3e} is below {PSD_EIGENVALUE_FLOOR:.0e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Diagonal density matrix from a probability vector.
    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbability("empty probability vector".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidProbability(
                "entries must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > EXACT_TOL {
            return Err(Error::InvalidProbability(format!(
                "entries sum to {sum}, expected 1"
            )));
        }
        let d = probs.len();
        let mat = CMat::from_fn(d, d, |i, j| {
            if i == j {
                c(probs[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        Ok(Self { mat })
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// The underlying matrix.
    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// Consume and return the underlying matrix.
    pub fn into_mat(self) -> CMat {
        self.mat
    }
}
