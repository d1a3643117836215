//! Single-step Grover search in the single-excitation subspace.
//!
//! Each of the three Grover operators is one constant-Hamiltonian pulse:
//!
//! * uniform preparation: `|ψ_unif) = i e^{iα_unif} exp(−i H_unif t_unif) |1)`
//!   with `α_unif = π/(2√n)` and `t_unif = π/(2g√n)`;
//! * oracle: `O = exp(−i H_O t_O)`, `H_O = −δε |m')(m'|`, `t_O = π/δε`;
//! * inversion: `W = e^{−iα_W} exp(−i H_W t_W)`, `H_W = g(𝟙𝟙ᵀ − I)`,
//!   `α_W = (1−n)π/n`, `t_W = π/(ng)`.
//!
//! Global phases are applied explicitly so every identity holds exactly, not
//! merely up to phase.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::densecx::{basis_vector, hermitian_eig, CMatrix, CVector, LinalgError};
use crate::hwmodel::SesMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroverError {
    #[error("search size must be at least {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("marked index {marked} outside 1..={n}")]
    MarkedOutOfRange { marked: usize, n: usize },
    #[error("{name} must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Normalized SES wavefunction; component `m` is the amplitude of `|m+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SesState(pub CVector);

impl SesState {
    /// `|m)` for 1-based `m`.
    pub fn basis(n: usize, m: usize) -> Self {
        Self(basis_vector(n, m - 1))
    }

    pub fn uniform(n: usize) -> Self {
        Self(CVector::from_element(
            n,
            Complex64::new(1.0 / (n as f64).sqrt(), 0.0),
        ))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.0
    }

    /// `|(m|ψ)|²` for 1-based `m`.
    pub fn probability(&self, m: usize) -> f64 {
        self.0[m - 1].norm_sqr()
    }
}

impl Serialize for SesState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|z| [z.re, z.im]))
    }
}

/// Parameters of one search: size `n`, 1-based marked index, coupling scale
/// `g` and oracle detuning `δε` (both rad/ns), and iteration count.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverPlan {
    pub n: usize,
    pub marked: usize,
    pub g: f64,
    pub delta_eps: f64,
    pub iterations: usize,
}

impl GroverPlan {
    /// Plan with the standard iteration count [`n_grover`].
    pub fn new(n: usize, marked: usize, g: f64, delta_eps: f64) -> Result<Self, GroverError> {
        Self::with_iterations(n, marked, g, delta_eps, n_grover(n))
    }

    pub fn with_iterations(
        n: usize,
        marked: usize,
        g: f64,
        delta_eps: f64,
        iterations: usize,
    ) -> Result<Self, GroverError> {
        let plan = Self {
            n,
            marked,
            g,
            delta_eps,
            iterations,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), GroverError> {
        if self.n == 0 {
            return Err(GroverError::TooSmall { n: 0, min: 1 });
        }
        if self.marked == 0 || self.marked > self.n {
            return Err(GroverError::MarkedOutOfRange {
                marked: self.marked,
                n: self.n,
            });
        }
        positive("g", self.g)?;
        positive("delta_eps", self.delta_eps)
    }

    pub fn t_unif(&self) -> f64 {
        t_unif(self.n, self.g)
    }

    pub fn t_oracle(&self) -> f64 {
        PI / self.delta_eps
    }

    pub fn t_inversion(&self) -> f64 {
        PI / (self.n as f64 * self.g)
    }

    /// `t_unif + iterations · (t_O + t_W)`.
    pub fn total_duration(&self) -> f64 {
        self.t_unif() + self.iterations as f64 * (self.t_oracle() + self.t_inversion())
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), GroverError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(GroverError::NonPositive { name, value })
    }
}

fn require_n(n: usize) -> Result<(), GroverError> {
    if n < 2 {
        Err(GroverError::TooSmall { n, min: 2 })
    } else {
        Ok(())
    }
}

/// `⌊(π/4)√n⌋`, at least 1 for `n ≥ 2`, and 0 for `n = 1`.
pub fn n_grover(n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    ((FRAC_PI_4 * (n as f64).sqrt()).floor() as usize).max(1)
}

pub fn t_unif(n: usize, g: f64) -> f64 {
    PI / (2.0 * g * (n as f64).sqrt())
}

pub fn alpha_unif(n: usize) -> f64 {
    PI / (2.0 * (n as f64).sqrt())
}

pub fn alpha_w(n: usize) -> f64 {
    let n = n as f64;
    (1.0 - n) * PI / n
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `g` times the matrix with `2` at (1,1), `1` along the rest of the first
/// row and column, and zeros elsewhere.
pub fn build_h_unif(n: usize, g: f64) -> Result<SesMatrix, GroverError> {
    require_n(n)?;
    let h = CMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => real(2.0 * g),
        (0, _) | (_, 0) => real(g),
        _ => real(0.0),
    });
    Ok(SesMatrix::new(h)?)
}

/// Prepared uniform state with its pulse duration and global phase.
#[derive(Debug, Clone)]
pub struct UniformPreparation {
    pub state: SesState,
    pub t_unif: f64,
    pub alpha_unif: f64,
}

pub fn prepare_uniform(n: usize, g: f64) -> Result<UniformPreparation, GroverError> {
    positive("g", g)?;
    let h = build_h_unif(n, g)?;
    let t = t_unif(n, g);
    let alpha = alpha_unif(n);
    let evolved = hermitian_eig(h.matrix())?.evolve(t, &basis_vector(n, 0))?;
    let state = evolved * Complex64::from_polar(1.0, alpha + FRAC_PI_2);
    Ok(UniformPreparation {
        state: SesState(state),
        t_unif: t,
        alpha_unif: alpha,
    })
}

#[derive(Debug, Clone)]
pub struct Oracle {
    pub hamiltonian: SesMatrix,
    pub duration: f64,
    pub unitary: CMatrix,
}

/// Detuning pulse on the marked qubit (1-based) realizing `1 − 2|m')(m'|`.
pub fn build_oracle(n: usize, marked: usize, delta_eps: f64) -> Result<Oracle, GroverError> {
    if n == 0 {
        return Err(GroverError::TooSmall { n, min: 1 });
    }
    if marked == 0 || marked > n {
        return Err(GroverError::MarkedOutOfRange { marked, n });
    }
    positive("delta_eps", delta_eps)?;
    let mut diag = DVector::from_element(n, real(0.0));
    diag[marked - 1] = real(-delta_eps);
    let hamiltonian = SesMatrix::new(CMatrix::from_diagonal(&diag))?;
    let duration = PI / delta_eps;
    let unitary = hermitian_eig(hamiltonian.matrix())?.propagator(duration);
    Ok(Oracle {
        hamiltonian,
        duration,
        unitary,
    })
}

#[derive(Debug, Clone)]
pub struct Inversion {
    pub hamiltonian: SesMatrix,
    pub duration: f64,
    pub alpha_w: f64,
    pub unitary: CMatrix,
}

/// Uniform all-to-all coupling pulse realizing `2|ψ_unif)(ψ_unif| − 1`.
pub fn build_w(n: usize, g: f64) -> Result<Inversion, GroverError> {
    require_n(n)?;
    positive("g", g)?;
    let h = CMatrix::from_fn(n, n, |i, j| if i == j { real(0.0) } else { real(g) });
    let hamiltonian = SesMatrix::new(h)?;
    let duration = PI / (n as f64 * g);
    let alpha = alpha_w(n);
    let unitary = hermitian_eig(hamiltonian.matrix())?.propagator(duration)
        * Complex64::from_polar(1.0, -alpha);
    Ok(Inversion {
        hamiltonian,
        duration,
        alpha_w: alpha,
        unitary,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GroverResult {
    pub n: usize,
    pub marked: usize,
    pub iterations: usize,
    pub success_probability: f64,
    /// `|(m'|ψ)|²` after each oracle+inversion step.
    pub iteration_probabilities: Vec<f64>,
    pub t_unif_ns: f64,
    pub t_oracle_ns: f64,
    pub t_inversion_ns: f64,
    pub total_ns: f64,
    pub alpha_unif_rad: f64,
    pub alpha_w_rad: f64,
    pub final_state: SesState,
}

/// Runs `(W O)^k U_unif |1)` with the operators built above.
pub fn run_grover(plan: &GroverPlan) -> Result<GroverResult, GroverError> {
    plan.validate()?;
    let prep = prepare_uniform(plan.n, plan.g)?;
    let oracle = build_oracle(plan.n, plan.marked, plan.delta_eps)?;
    let inversion = build_w(plan.n, plan.g)?;
    let step = &inversion.unitary * &oracle.unitary;

    let mut psi = prep.state.0;
    let mut iteration_probabilities = Vec::with_capacity(plan.iterations);
    for _ in 0..plan.iterations {
        psi = &step * psi;
        iteration_probabilities.push(psi[plan.marked - 1].norm_sqr());
    }
    let final_state = SesState(psi);
    Ok(GroverResult {
        n: plan.n,
        marked: plan.marked,
        iterations: plan.iterations,
        success_probability: final_state.probability(plan.marked),
        iteration_probabilities,
        t_unif_ns: prep.t_unif,
        t_oracle_ns: oracle.duration,
        t_inversion_ns: inversion.duration,
        total_ns: plan.total_duration(),
        alpha_unif_rad: prep.alpha_unif,
        alpha_w_rad: inversion.alpha_w,
        final_state,
    })
}

/// Outcome of checking the closed-form spectrum and eigenbasis of `H_unif`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub g: f64,
    /// Ascending computed eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// Ascending `{g(1−√n), 0 × (n−2), g(1+√n)}`.
    pub expected: Vec<f64>,
    pub max_eigenvalue_error: f64,
    /// Largest off-diagonal modulus of `S†H_unif S` with unit-norm columns.
    pub max_offdiagonal: f64,
    /// Largest deviation of `diag(S†H_unif S)` from `(g(1−√n), g(1+√n), 0, …)`.
    pub max_diagonal_error: f64,
    /// Largest overlap between a Gram-normalized zero mode and either of the
    /// two nonzero-eigenvalue columns.
    pub max_zero_mode_overlap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Closed-form eigenbasis of `H_unif` with unnormalized columns:
/// `(1∓√n, 1, …, 1)ᵀ` then `e_k − e_2` for `k = 3..n`.
pub fn h_unif_eigenbasis(n: usize) -> CMatrix {
    let s = (n as f64).sqrt();
    CMatrix::from_fn(n, n, |row, col| match col {
        0 | 1 => {
            if row == 0 {
                real(if col == 0 { 1.0 - s } else { 1.0 + s })
            } else {
                real(1.0)
            }
        }
        _ => match row {
            1 => real(-1.0),
            r if r == col => real(1.0),
            _ => real(0.0),
        },
    })
}

/// Checks the spectrum `{g(1∓√n), 0, …}` and that the closed-form eigenbasis
/// diagonalizes `H_unif`, all to `1e−10·g`.
pub fn verify_spectrum(n: usize, g: f64) -> Result<SpectrumReport, GroverError> {
    positive("g", g)?;
    let h = build_h_unif(n, g)?;
    let eig = hermitian_eig(h.matrix())?;
    let root = (n as f64).sqrt();

    let mut expected = vec![0.0; n];
    expected[0] = g * (1.0 - root);
    expected[n - 1] = g * (1.0 + root);
    let max_eigenvalue_error = eig
        .values
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let mut s = h_unif_eigenbasis(n);
    for mut col in s.column_iter_mut() {
        let norm = col.norm();
        col /= real(norm);
    }
    let d = s.adjoint() * h.matrix() * &s;
    let mut max_offdiagonal = 0.0f64;
    let mut max_diagonal_error = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                max_offdiagonal = max_offdiagonal.max(d[(i, j)].norm());
            }
        }
        let want = match i {
            0 => g * (1.0 - root),
            1 => g * (1.0 + root),
            _ => 0.0,
        };
        max_diagonal_error = max_diagonal_error.max((d[(i, i)] - real(want)).norm());
    }

    // Gram-Schmidt over the zero modes only; they are not mutually orthogonal
    // as displayed.
    let mut zero_modes: Vec<CVector> = Vec::new();
    for k in 2..n {
        let mut v: CVector = s.column(k).into_owned();
        for q in &zero_modes {
            let proj = q.dotc(&v);
            v -= q * proj;
        }
        zero_modes.push(v.normalize());
    }
    let max_zero_mode_overlap = zero_modes
        .iter()
        .flat_map(|z| [s.column(0).dotc(z).norm(), s.column(1).dotc(z).norm()])
        .fold(0.0, f64::max);

    let tolerance = 1e-10 * g;
    let passed = max_eigenvalue_error <= tolerance
        && max_offdiagonal <= tolerance
        && max_diagonal_error <= tolerance
        && max_zero_mode_overlap <= 1e-10;
    Ok(SpectrumReport {
        n,
        g,
        eigenvalues: eig.values.iter().copied().collect(),
        expected,
        max_eigenvalue_error,
        max_offdiagonal,
        max_diagonal_error,
        max_zero_mode_overlap,
        tolerance,
        passed,
    })
}
