//! Dense complex linear algebra: Hermitian eigendecomposition, exact unitary
//! propagators and phase-aware state comparison.
//!
//! Propagators are always built from the spectral decomposition
//! `exp(-iHt) = V diag(exp(-i λ t)) V†`, which is unitary up to roundoff.
//! Series or Padé approximants are not used anywhere in the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative tolerance on `max|H - H†| / max|H|` below which a matrix is
/// accepted (and silently symmetrized) as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max|H - H^dagger| = {asymmetry:e} exceeds {limit:e}")]
    NotHermitian { asymmetry: f64, limit: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("evolution time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Checks Hermiticity and returns the symmetrized `(H + H†)/2`.
pub fn hermitianize(h: &CMatrix) -> Result<CMatrix, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    let adj = h.adjoint();
    let asymmetry = max_abs_diff(h, &adj);
    let limit = HERMITIAN_TOL * max_abs(h);
    if asymmetry > limit {
        return Err(LinalgError::NotHermitian { asymmetry, limit });
    }
    Ok((h + adj).scale(0.5))
}

/// Spectral decomposition `H = V diag(values) V†` of a Hermitian matrix,
/// eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

pub fn hermitian_eig(h: &CMatrix) -> Result<HermitianEigen, LinalgError> {
    let h = hermitianize(h)?;
    let dim = h.nrows();
    let eig = h.symmetric_eigen();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(dim, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = CMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen { values, vectors })
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(f(λ)) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= f(self.values[k]);
        }
        scaled * self.vectors.adjoint()
    }

    /// Unitary propagator `exp(-iHt)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        self.map_spectrum(|lambda| Complex64::from_polar(1.0, -lambda * t))
    }

    /// `exp(-iHt) ψ` without forming the propagator.
    pub fn evolve(&self, t: f64, psi: &CVector) -> Result<CVector, LinalgError> {
        check_time(t)?;
        if psi.len() != self.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: psi.len(),
            });
        }
        let mut coeffs = self.vectors.adjoint() * psi;
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= Complex64::from_polar(1.0, -self.values[k] * t);
        }
        Ok(&self.vectors * coeffs)
    }

    /// Reassembled `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        self.map_spectrum(|lambda| Complex64::new(lambda, 0.0))
    }
}

fn check_time(t: f64) -> Result<(), LinalgError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(LinalgError::InvalidTime(t))
    }
}

/// `exp(-iHt) ψ` for Hermitian `H` in rad/ns and `t` in ns.
pub fn evolve(h: &CMatrix, t: f64, psi: &CVector) -> Result<CVector, LinalgError> {
    check_time(t)?;
    if psi.len() != h.nrows() {
        return Err(LinalgError::DimensionMismatch {
            expected: h.nrows(),
            found: psi.len(),
        });
    }
    hermitian_eig(h)?.evolve(t, psi)
}

/// Unitary propagator `exp(-iHt)`.
pub fn propagator(h: &CMatrix, t: f64) -> Result<CMatrix, LinalgError> {
    check_time(t)?;
    Ok(hermitian_eig(h)?.propagator(t))
}

/// Compares two states modulo a global phase.
///
/// Returns whether `min_θ ‖ψ − e^{iθ}φ‖ ≤ tol` together with the minimizing
/// angle `θ = arg(φ†ψ)`, in `(-π, π]`.
pub fn equal_up_to_global_phase(
    psi: &CVector,
    phi: &CVector,
    tol: f64,
) -> Result<(bool, f64), LinalgError> {
    if psi.len() != phi.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: psi.len(),
            found: phi.len(),
        });
    }
    let overlap = phi.dotc(psi);
    let theta = if overlap.norm() == 0.0 {
        0.0
    } else {
        overlap.arg()
    };
    let rotated = phi * Complex64::from_polar(1.0, theta);
    let distance = (psi - rotated).norm();
    Ok((distance <= tol, theta))
}

/// `|φ†ψ|²`.
pub fn fidelity(psi: &CVector, phi: &CVector) -> f64 {
    phi.dotc(psi).norm_sqr()
}

/// Unit vector `e_k`.
pub fn basis_vector(dim: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[k] = Complex64::new(1.0, 0.0);
    v
}
