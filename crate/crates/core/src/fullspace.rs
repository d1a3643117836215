//! Brute-force evolution in the full `2^n`-dimensional Hilbert space.
//!
//! Serves two purposes: it is the independent oracle for the closed-form SES
//! matrix elements, and it measures how much probability leaks out of the SES
//! when the counter-rotating parts of the coupling are kept.
//!
//! Basis ordering is little-endian: basis index `b = Σ_i b_i 2^i` with qubit
//! `i` (0-based) stored in bit `i`, so the SES state with qubit `m` excited sits
//! at index `1 << m`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::densecx::{fidelity, hermitian_eig, CMatrix, CVector, LinalgError};
use crate::grover::{GroverError, GroverPlan, SesState};
use crate::hwmodel::{HardwareModel, ModelError, SesMatrix};
use crate::schedule::{
    compile_grover_schedule, execute_schedule_ses, ControlSchedule, ScheduleError,
};

/// Largest qubit count the dense full-space code accepts.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error)]
pub enum FullSpaceError {
    #[error("full-space simulation supports at most {MAX_QUBITS} qubits, got {0}")]
    Capacity(usize),
    #[error("state has {found} amplitudes, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("g/epsilon ratio must be finite and non-negative, got {0}")]
    BadRatio(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Grover(#[from] GroverError),
}

fn check_capacity(n: usize) -> Result<(), FullSpaceError> {
    if n > MAX_QUBITS {
        Err(FullSpaceError::Capacity(n))
    } else {
        Ok(())
    }
}

/// Location of the SES inside the full space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SesEmbedding {
    pub n: usize,
}

impl SesEmbedding {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// Full-space index of the state with only qubit `m` (0-based) excited.
    pub fn full_index(&self, m: usize) -> usize {
        1 << m
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).map(move |m| self.full_index(m))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub n: usize,
    pub amplitudes: CVector,
}

impl FullState {
    pub fn new(n: usize, amplitudes: CVector) -> Result<Self, FullSpaceError> {
        check_capacity(n)?;
        if amplitudes.len() != 1 << n {
            return Err(FullSpaceError::Dimension {
                expected: 1 << n,
                found: amplitudes.len(),
            });
        }
        Ok(Self { n, amplitudes })
    }

    /// Computational basis state `index`.
    pub fn basis(n: usize, index: usize) -> Result<Self, FullSpaceError> {
        check_capacity(n)?;
        let mut v = CVector::zeros(1 << n);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amplitudes: v })
    }

    /// Embeds an SES wavefunction.
    pub fn from_ses(state: &SesState) -> Result<Self, FullSpaceError> {
        let n = state.n();
        check_capacity(n)?;
        let emb = SesEmbedding::new(n);
        let mut v = CVector::zeros(1 << n);
        for (m, idx) in emb.indices().enumerate() {
            v[idx] = state.0[m];
        }
        Ok(Self { n, amplitudes: v })
    }

    /// SES components (not renormalized).
    pub fn project(&self, emb: &SesEmbedding) -> CVector {
        CVector::from_iterator(emb.n, emb.indices().map(|i| self.amplitudes[i]))
    }
}

/// Action of a single Pauli on one bit: returns the flipped bit and the
/// coefficient, with `σ^z|0⟩ = +|0⟩` and `σ^y|0⟩ = i|1⟩`.
fn pauli_on_bit(mu: usize, bit: usize) -> (usize, Complex64) {
    match (mu, bit) {
        (0, b) => (b ^ 1, Complex64::new(1.0, 0.0)),
        (1, 0) => (1, Complex64::new(0.0, 1.0)),
        (1, _) => (0, Complex64::new(0.0, -1.0)),
        (_, 0) => (0, Complex64::new(1.0, 0.0)),
        (_, _) => (1, Complex64::new(-1.0, 0.0)),
    }
}

/// Dense `2^n × 2^n` Hamiltonian of the hardware model.
pub fn build_full_hamiltonian(model: &HardwareModel) -> Result<CMatrix, FullSpaceError> {
    let n = model.n();
    check_capacity(n)?;
    let dim = 1usize << n;
    let mut h = CMatrix::zeros(dim, dim);

    for b in 0..dim {
        let onsite: f64 = (0..n)
            .filter(|&i| b >> i & 1 == 1)
            .map(|i| model.epsilon[i])
            .sum();
        h[(b, b)] += Complex64::new(onsite, 0.0);
    }
    for (i, j, g) in model.couplings.iter() {
        if g == 0.0 {
            continue;
        }
        for mu in 0..3 {
            for nu in 0..3 {
                let jmn = model.tensor.get(mu, nu);
                if jmn == 0.0 {
                    continue;
                }
                let w = g * jmn;
                for b in 0..dim {
                    let (bi, ci) = pauli_on_bit(mu, b >> i & 1);
                    let (bj, cj) = pauli_on_bit(nu, b >> j & 1);
                    let target = (b & !(1 << i) & !(1 << j)) | bi << i | bj << j;
                    h[(target, b)] += ci * cj * w;
                }
            }
        }
    }
    Ok(h)
}

/// Reads the SES block `(m|H|m')` out of a full-space matrix.
pub fn project_to_ses(h_full: &CMatrix, emb: &SesEmbedding) -> Result<SesMatrix, FullSpaceError> {
    let dim = 1usize << emb.n;
    if h_full.nrows() != dim || h_full.ncols() != dim {
        return Err(FullSpaceError::Dimension {
            expected: dim,
            found: h_full.nrows(),
        });
    }
    let block = CMatrix::from_fn(emb.n, emb.n, |a, b| {
        h_full[(emb.full_index(a), emb.full_index(b))]
    });
    Ok(SesMatrix::new(block)?)
}

/// Probability outside the SES, `1 − Σ_m |ψ[2^m]|²`.
pub fn leakage(psi: &FullState, emb: &SesEmbedding) -> f64 {
    let inside: f64 = emb.indices().map(|i| psi.amplitudes[i].norm_sqr()).sum();
    (1.0 - inside).clamp(0.0, 1.0)
}

/// Leakage recorded while a segment runs.
#[derive(Debug, Clone, Serialize)]
pub struct SegmentLeakage {
    pub segment: usize,
    pub label: String,
    /// Leakage at `k/substeps` of the segment for `k = 1..=substeps`; the last
    /// entry is the end-of-segment value.
    pub samples: Vec<f64>,
}

impl SegmentLeakage {
    pub fn end(&self) -> f64 {
        *self.samples.last().unwrap_or(&0.0)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }
}

/// Applies each segment's full-space propagator in order.
pub fn evolve_full(
    schedule: &ControlSchedule,
    psi0: &FullState,
) -> Result<FullState, FullSpaceError> {
    Ok(evolve_full_traced(schedule, psi0, 1)?.0)
}

/// Like [`evolve_full`], also sampling leakage `substeps` times per segment.
pub fn evolve_full_traced(
    schedule: &ControlSchedule,
    psi0: &FullState,
    substeps: usize,
) -> Result<(FullState, Vec<SegmentLeakage>), FullSpaceError> {
    let n = schedule.n;
    check_capacity(n)?;
    schedule.validate()?;
    if psi0.n != n {
        return Err(FullSpaceError::Dimension {
            expected: 1 << n,
            found: psi0.amplitudes.len(),
        });
    }
    let substeps = substeps.max(1);
    let emb = SesEmbedding::new(n);
    let mut psi = psi0.amplitudes.clone();
    let mut trace = Vec::with_capacity(schedule.segments.len());

    for (index, seg) in schedule.segments.iter().enumerate() {
        let h = build_full_hamiltonian(&seg.hardware_model(schedule.epsilon_base)?)?;
        let eig = hermitian_eig(&h)?;
        let mut samples = Vec::with_capacity(substeps);
        for k in 1..substeps {
            let t = seg.duration * k as f64 / substeps as f64;
            let state = FullState {
                n,
                amplitudes: eig.evolve(t, &psi)?,
            };
            samples.push(leakage(&state, &emb));
        }
        psi = eig.evolve(seg.duration, &psi)? * Complex64::from_polar(1.0, seg.post_phase);
        samples.push(leakage(
            &FullState {
                n,
                amplitudes: psi.clone(),
            },
            &emb,
        ));
        trace.push(SegmentLeakage {
            segment: index,
            label: seg.label.to_string(),
            samples,
        });
    }
    Ok((FullState { n, amplitudes: psi }, trace))
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Leakage samples per segment; 1 samples only segment ends.
    pub substeps: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { substeps: 64 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub ratio: f64,
    /// Coupling scale used for this point, rad/ns.
    pub g: f64,
    pub max_leakage: f64,
    /// `|(ψ_SES | P ψ_full)|²` against the SES execution of the same schedule.
    pub final_fidelity: f64,
    pub segments: Vec<SegmentLeakage>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeakageSweep {
    pub n: usize,
    pub marked: usize,
    pub epsilon_base: f64,
    pub delta_eps: f64,
    pub substeps: usize,
    pub points: Vec<SweepPoint>,
}

impl LeakageSweep {
    /// `ratio,max_leakage,final_fidelity` rows.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["ratio", "max_leakage", "final_fidelity"])
            .expect("in-memory write");
        for p in &self.points {
            w.write_record([
                format!("{:e}", p.ratio),
                format!("{:e}", p.max_leakage),
                format!("{:.15}", p.final_fidelity),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep serializes")
    }
}

/// One sweep point: Grover schedule at `g = ratio · epsilon_base`, run in the
/// full space from `|1)`.
fn sweep_point(
    plan: &GroverPlan,
    epsilon_base: f64,
    ratio: f64,
    options: SweepOptions,
) -> Result<SweepPoint, FullSpaceError> {
    let g = ratio * epsilon_base;
    let schedule = if ratio == 0.0 {
        // Keep the plan's timing but switch the couplings off; only the
        // detunings act.
        let mut s = compile_grover_schedule(plan, epsilon_base)?;
        for seg in &mut s.segments {
            seg.couplings = crate::hwmodel::Couplings::zeros(plan.n);
        }
        s
    } else {
        let scaled = GroverPlan { g, ..plan.clone() };
        compile_grover_schedule(&scaled, epsilon_base)?
    };
    let ses = execute_schedule_ses(&schedule)?;
    let psi0 = FullState::from_ses(&SesState::basis(plan.n, 1))?;
    let (psi, segments) = evolve_full_traced(&schedule, &psi0, options.substeps)?;
    let emb = SesEmbedding::new(plan.n);
    let max_leakage = segments.iter().map(SegmentLeakage::max).fold(0.0, f64::max);
    Ok(SweepPoint {
        ratio,
        g: if ratio == 0.0 { 0.0 } else { g },
        max_leakage,
        final_fidelity: fidelity(&psi.project(&emb), &ses.0),
        segments,
    })
}

/// Leakage and SES fidelity of the compiled Grover schedule as a function of
/// `g/ε`. Points are evaluated in parallel and returned in input order.
pub fn leakage_sweep(
    plan: &GroverPlan,
    epsilon_base: f64,
    ratios: &[f64],
    options: SweepOptions,
) -> Result<LeakageSweep, FullSpaceError> {
    check_capacity(plan.n)?;
    plan.validate()?;
    if let Some(&bad) = ratios.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(FullSpaceError::BadRatio(bad));
    }
    let points = ratios
        .par_iter()
        .map(|&r| sweep_point(plan, epsilon_base, r, options))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LeakageSweep {
        n: plan.n,
        marked: plan.marked,
        epsilon_base,
        delta_eps: plan.delta_eps,
        substeps: options.substeps.max(1),
        points,
    })
}

/// Least-squares slope of `log(max_leakage)` against `log(ratio)`.
pub fn log_log_slope(points: &[SweepPoint]) -> Option<f64> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.ratio > 0.0 && p.max_leakage > 0.0)
        .map(|p| (p.ratio.ln(), p.max_leakage.ln()))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
