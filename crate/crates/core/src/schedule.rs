//! Piecewise-constant control schedules for the coupled-qubit array.
//!
//! A schedule is an ordered list of segments, each holding per-qubit detunings
//! (relative to a common `epsilon_base`) and pairwise couplings for a fixed
//! duration. Compiled Grover schedules assume the pure `σ^x ⊗ σ^x` exchange
//! tensor, for which the SES Hamiltonian of a segment is simply
//! `diag(offsets) + couplings`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::densecx::{basis_vector, hermitian_eig, CMatrix, LinalgError};
use crate::grover::{alpha_unif, alpha_w, GroverError, GroverPlan, SesState};
use crate::hwmodel::{CouplingTensor, Couplings, HardwareModel, ModelError, SesMatrix};
use crate::units::{ghz_to_rad_per_ns, mhz_to_rad_per_ns, rad_per_ns_to_ghz, rad_per_ns_to_mhz};

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("schedule document is malformed: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("segment {index}: {reason}")]
    InvalidSegment { index: usize, reason: String },
    #[error("invalid schedule: {0}")]
    Invalid(String),
    #[error(transparent)]
    Grover(#[from] GroverError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Prep,
    Oracle,
    Inversion,
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SegmentKind::Prep => "prep",
            SegmentKind::Oracle => "oracle",
            SegmentKind::Inversion => "inversion",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlSegment {
    pub label: SegmentKind,
    /// ns, strictly positive.
    pub duration: f64,
    /// Per-qubit detuning from `epsilon_base`, rad/ns.
    pub epsilon_offsets: Vec<f64>,
    pub couplings: Couplings,
    /// Global phase applied after the segment, rad. Not a physical control.
    pub post_phase: f64,
}

impl ControlSegment {
    fn check(&self, n: usize) -> Result<(), String> {
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(format!("duration must be positive, got {}", self.duration));
        }
        if self.epsilon_offsets.len() != n {
            return Err(format!(
                "expected {n} epsilon offsets, found {}",
                self.epsilon_offsets.len()
            ));
        }
        if self.couplings.n() != n {
            return Err(format!(
                "couplings sized for {} qubits, expected {n}",
                self.couplings.n()
            ));
        }
        if !self.epsilon_offsets.iter().all(|e| e.is_finite()) || !self.couplings.is_finite() {
            return Err("non-finite offset or coupling".into());
        }
        if !self.post_phase.is_finite() {
            return Err("non-finite post_phase".into());
        }
        Ok(())
    }

    /// SES Hamiltonian of this segment with the common energy dropped.
    pub fn ses_hamiltonian(&self) -> SesMatrix {
        let n = self.epsilon_offsets.len();
        let h = CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(
                if i == j {
                    self.epsilon_offsets[i]
                } else {
                    self.couplings.get(i, j)
                },
                0.0,
            )
        });
        SesMatrix::new(h).expect("real symmetric segment Hamiltonian")
    }

    /// Hardware model for this segment with absolute energies
    /// `epsilon_base + offset` and the exchange tensor.
    pub fn hardware_model(&self, epsilon_base: f64) -> Result<HardwareModel, ModelError> {
        HardwareModel::new(
            self.epsilon_offsets
                .iter()
                .map(|o| epsilon_base + o)
                .collect(),
            self.couplings.clone(),
            CouplingTensor::xx(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    pub n: usize,
    /// Common qubit energy, rad/ns.
    pub epsilon_base: f64,
    pub segments: Vec<ControlSegment>,
}

impl ControlSchedule {
    pub fn new(
        n: usize,
        epsilon_base: f64,
        segments: Vec<ControlSegment>,
    ) -> Result<Self, ScheduleError> {
        let schedule = Self {
            n,
            epsilon_base,
            segments,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        if self.n == 0 {
            return Err(ScheduleError::Invalid(
                "qubit count must be at least 1".into(),
            ));
        }
        if !self.epsilon_base.is_finite() {
            return Err(ScheduleError::Invalid("epsilon_base must be finite".into()));
        }
        for (index, seg) in self.segments.iter().enumerate() {
            seg.check(self.n)
                .map_err(|reason| ScheduleError::InvalidSegment { index, reason })?;
        }
        Ok(())
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }
}

/// Lowers a Grover plan to hardware controls.
///
/// Segment order: one `prep` pulse (`+2g` on qubit 1, `g` between qubit 1 and
/// every other qubit), then per iteration an `oracle` pulse (`−δε` on the
/// marked qubit, no coupling) and an `inversion` pulse (all pairs coupled at
/// `g`, no detuning).
pub fn compile_grover_schedule(
    plan: &GroverPlan,
    epsilon_base: f64,
) -> Result<ControlSchedule, ScheduleError> {
    plan.validate()?;
    let n = plan.n;
    if n < 2 {
        return Err(GroverError::TooSmall { n, min: 2 }.into());
    }
    if !epsilon_base.is_finite() {
        return Err(ScheduleError::Invalid("epsilon_base must be finite".into()));
    }
    let g = plan.g;

    let mut prep_offsets = vec![0.0; n];
    prep_offsets[0] = 2.0 * g;
    let mut prep_couplings = Couplings::zeros(n);
    for k in 1..n {
        prep_couplings.set(0, k, g);
    }
    let mut segments = vec![ControlSegment {
        label: SegmentKind::Prep,
        duration: plan.t_unif(),
        epsilon_offsets: prep_offsets,
        couplings: prep_couplings,
        // the `i` prefactor contributes π/2
        post_phase: alpha_unif(n) + std::f64::consts::FRAC_PI_2,
    }];

    let mut oracle_offsets = vec![0.0; n];
    oracle_offsets[plan.marked - 1] = -plan.delta_eps;
    let oracle = ControlSegment {
        label: SegmentKind::Oracle,
        duration: plan.t_oracle(),
        epsilon_offsets: oracle_offsets,
        couplings: Couplings::zeros(n),
        post_phase: 0.0,
    };
    let mut all_pairs = Couplings::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            all_pairs.set(i, j, g);
        }
    }
    let inversion = ControlSegment {
        label: SegmentKind::Inversion,
        duration: plan.t_inversion(),
        epsilon_offsets: vec![0.0; n],
        couplings: all_pairs,
        // W = e^{-iα_W} exp(-i H_W t_W)
        post_phase: -alpha_w(n),
    };
    for _ in 0..plan.iterations {
        segments.push(oracle.clone());
        segments.push(inversion.clone());
    }
    ControlSchedule::new(n, epsilon_base, segments)
}

/// Runs a schedule in the SES starting from `|1)`, applying each segment's
/// propagator followed by its post-phase.
pub fn execute_schedule_ses(schedule: &ControlSchedule) -> Result<SesState, ScheduleError> {
    schedule.validate()?;
    let mut psi = basis_vector(schedule.n, 0);
    for seg in &schedule.segments {
        let eig = hermitian_eig(seg.ses_hamiltonian().matrix())?;
        psi = eig.evolve(seg.duration, &psi)? * Complex64::from_polar(1.0, seg.post_phase);
    }
    Ok(SesState(psi))
}

/// Serialized schedule. Frequencies are `f = ω/2π` (GHz for the base, MHz
/// otherwise), durations ns, couplings 1-based `[i, j, MHz]` with `i < j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDocument {
    pub n: usize,
    #[serde(rename = "epsilon_base_GHz")]
    pub epsilon_base_ghz: f64,
    pub segments: Vec<SegmentDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDocument {
    pub label: SegmentKind,
    pub duration_ns: f64,
    #[serde(rename = "epsilon_offsets_MHz")]
    pub epsilon_offsets_mhz: Vec<f64>,
    pub couplings: Vec<(usize, usize, f64)>,
    pub post_phase_rad: f64,
}

impl From<&ControlSchedule> for ScheduleDocument {
    fn from(s: &ControlSchedule) -> Self {
        Self {
            n: s.n,
            epsilon_base_ghz: rad_per_ns_to_ghz(s.epsilon_base),
            segments: s
                .segments
                .iter()
                .map(|seg| SegmentDocument {
                    label: seg.label,
                    duration_ns: seg.duration,
                    epsilon_offsets_mhz: seg
                        .epsilon_offsets
                        .iter()
                        .map(|&e| rad_per_ns_to_mhz(e))
                        .collect(),
                    couplings: seg.couplings.to_mhz_triples(),
                    post_phase_rad: seg.post_phase,
                })
                .collect(),
        }
    }
}

impl TryFrom<ScheduleDocument> for ControlSchedule {
    type Error = ScheduleError;

    fn try_from(doc: ScheduleDocument) -> Result<Self, ScheduleError> {
        let n = doc.n;
        let segments = doc
            .segments
            .into_iter()
            .enumerate()
            .map(|(index, seg)| {
                let couplings = Couplings::from_mhz_triples(n, &seg.couplings).map_err(|e| {
                    ScheduleError::InvalidSegment {
                        index,
                        reason: e.to_string(),
                    }
                })?;
                Ok(ControlSegment {
                    label: seg.label,
                    duration: seg.duration_ns,
                    epsilon_offsets: seg
                        .epsilon_offsets_mhz
                        .iter()
                        .map(|&f| mhz_to_rad_per_ns(f))
                        .collect(),
                    couplings,
                    post_phase: seg.post_phase_rad,
                })
            })
            .collect::<Result<Vec<_>, ScheduleError>>()?;
        ControlSchedule::new(n, ghz_to_rad_per_ns(doc.epsilon_base_ghz), segments)
    }
}

pub fn export_schedule(schedule: &ControlSchedule) -> String {
    serde_json::to_string_pretty(&ScheduleDocument::from(schedule)).expect("schedule serializes")
}

pub fn import_schedule(document: &str) -> Result<ControlSchedule, ScheduleError> {
    let doc: ScheduleDocument = serde_json::from_str(document)?;
    doc.try_into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densecx::equal_up_to_global_phase;
    use crate::grover::run_grover;
    use crate::units::{ghz_to_rad_per_ns, mhz_to_rad_per_ns};

    fn paper_plan(n: usize, marked: usize) -> GroverPlan {
        GroverPlan::new(n, marked, mhz_to_rad_per_ns(1.25), mhz_to_rad_per_ns(100.0)).unwrap()
    }

    #[test]
    fn paper_timing_budget() {
        let plan = paper_plan(256, 17);
        let s = compile_grover_schedule(&plan, ghz_to_rad_per_ns(5.0)).unwrap();
        assert_eq!(s.segments.len(), 1 + 2 * 12);
        assert!((s.total_duration() - 91.25).abs() < 1e-9);
        assert!(s
            .segments
            .iter()
            .filter(|seg| seg.label == SegmentKind::Oracle)
            .all(|seg| seg.couplings.iter().all(|(_, _, g)| g == 0.0)));
    }

    #[test]
    fn zero_iterations_is_prep_only() {
        let plan = GroverPlan::with_iterations(5, 2, 0.1, 1.0, 0).unwrap();
        let s = compile_grover_schedule(&plan, 30.0).unwrap();
        assert_eq!(s.segments.len(), 1);
        assert_eq!(s.segments[0].label, SegmentKind::Prep);
        assert_eq!(s.total_duration(), plan.t_unif());
    }

    #[test]
    fn matches_operator_pipeline_n4() {
        let plan = GroverPlan::new(4, 3, 0.2, 1.1).unwrap();
        let s = compile_grover_schedule(&plan, 31.4).unwrap();
        let via_schedule = execute_schedule_ses(&s).unwrap();
        let direct = run_grover(&plan).unwrap().final_state;
        assert!((via_schedule.0 - direct.0).norm() < 1e-9);
    }

    #[test]
    fn empty_schedule_returns_initial_state() {
        let s = ControlSchedule::new(3, 1.0, vec![]).unwrap();
        assert_eq!(execute_schedule_ses(&s).unwrap(), SesState::basis(3, 1));
        let doc = export_schedule(&s);
        assert!(doc.contains("\"segments\": []"));
        assert_eq!(import_schedule(&doc).unwrap().segments.len(), 0);
    }

    #[test]
    fn oracle_twice_is_identity() {
        let plan = GroverPlan::new(4, 1, 0.3, 2.0).unwrap();
        let s = compile_grover_schedule(&plan, 10.0).unwrap();
        let oracle = s.segments[1].clone();
        assert_eq!(oracle.label, SegmentKind::Oracle);
        let twice = ControlSchedule::new(4, 10.0, vec![oracle.clone(), oracle]).unwrap();
        let out = execute_schedule_ses(&twice).unwrap();
        assert!((out.0 - basis_vector(4, 0)).norm() < 1e-12);
    }

    #[test]
    fn epsilon_base_is_global_phase_only() {
        let plan = GroverPlan::new(8, 5, 0.05, 0.9).unwrap();
        let a = execute_schedule_ses(&compile_grover_schedule(&plan, 10.0).unwrap()).unwrap();
        let b = execute_schedule_ses(&compile_grover_schedule(&plan, 47.0).unwrap()).unwrap();
        assert!(equal_up_to_global_phase(&a.0, &b.0, 1e-9).unwrap().0);
    }

    #[test]
    fn import_rejects_bad_documents() {
        let doc = r#"{"n": 2, "epsilon_base_GHz": 5.0, "segments": [
            {"label": "oracle", "duration_ns": 1.0, "epsilon_offsets_MHz": [0, 0], "couplings": [], "post_phase_rad": 0},
            {"label": "oracle", "duration_ns": -1.0, "epsilon_offsets_MHz": [0, 0], "couplings": [], "post_phase_rad": 0}
        ]}"#;
        match import_schedule(doc) {
            Err(ScheduleError::InvalidSegment { index: 1, reason }) => {
                assert!(reason.contains("duration"))
            }
            other => panic!("unexpected {other:?}"),
        }

        let bad_pair = r#"{"n": 2, "epsilon_base_GHz": 5.0, "segments": [
            {"label": "prep", "duration_ns": 1.0, "epsilon_offsets_MHz": [0, 0], "couplings": [[1, 3, 1.0]], "post_phase_rad": 0}
        ]}"#;
        assert!(matches!(
            import_schedule(bad_pair),
            Err(ScheduleError::InvalidSegment { index: 0, .. })
        ));

        match import_schedule("{\"n\": 2,\n \"segments\": [}") {
            Err(ScheduleError::Parse(e)) => assert_eq!(e.line(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn document_field_names() {
        let plan = GroverPlan::with_iterations(3, 2, 0.1, 1.0, 1).unwrap();
        let doc = export_schedule(&compile_grover_schedule(&plan, ghz_to_rad_per_ns(5.0)).unwrap());
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["epsilon_base_GHz"], 5.0);
        let seg = &v["segments"][0];
        assert_eq!(seg["label"], "prep");
        for key in [
            "duration_ns",
            "epsilon_offsets_MHz",
            "couplings",
            "post_phase_rad",
        ] {
            assert!(seg.get(key).is_some(), "missing {key}");
        }
        assert_eq!(seg["couplings"][0][0], 1);
        assert_eq!(seg["couplings"][0][1], 2);
    }
}
