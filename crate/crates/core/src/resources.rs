//! SES versus gate-model resource comparison.
//!
//! The SES side is computed for any `n`. The gate-model side is only known for
//! a 256-item search (8-qubit input register), where the CNOT costs of the
//! multiply-controlled gates are fixed published constants; for every other
//! size it is reported as unavailable rather than extrapolated.

use std::fmt::Write as _;

use serde::Serialize;

use crate::grover::{n_grover, GroverPlan};
use crate::schedule::{compile_grover_schedule, ScheduleError};
use crate::units::{ghz_to_rad_per_ns, DEFAULT_EPSILON_BASE_GHZ};

/// Search size for which gate-model costs are known.
pub const GATE_MODEL_SIZE: usize = 256;
pub const INPUT_QUBITS: usize = 8;
pub const OUTPUT_QUBITS: usize = 1;
pub const ANCILLA_QUBITS: usize = 7;
/// C⁸NOT with 7 ancillas.
pub const CNOTS_PER_ORACLE: usize = 85;
/// C⁷Z with 6 ancillas.
pub const CNOTS_PER_INVERSION: usize = 73;
/// Rounded figure quoted alongside the exact total.
pub const QUOTED_TOTAL: &str = "nearly 2000";

#[derive(Debug, Clone, Serialize)]
pub struct SesResources {
    pub qubits: usize,
    pub couplers: usize,
    pub iterations: usize,
    /// `None` for `n = 1`, where no schedule is needed.
    pub runtime_ns: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GateResources {
    pub input_qubits: usize,
    pub output_qubits: usize,
    pub ancillas: usize,
    pub total_qubits: usize,
    pub cnots_per_oracle: usize,
    pub cnots_per_inversion: usize,
    pub cnots_per_step: usize,
    pub iterations: usize,
    pub total_cnots: usize,
    pub quoted_total: &'static str,
}

impl GateResources {
    fn n256(iterations: usize) -> Self {
        let cnots_per_step = CNOTS_PER_ORACLE + CNOTS_PER_INVERSION;
        assert_eq!(cnots_per_step, 158);
        assert_eq!(n_grover(GATE_MODEL_SIZE) * cnots_per_step, 1896);
        let total_cnots = iterations * cnots_per_step;
        Self {
            input_qubits: INPUT_QUBITS,
            output_qubits: OUTPUT_QUBITS,
            ancillas: ANCILLA_QUBITS,
            total_qubits: INPUT_QUBITS + OUTPUT_QUBITS + ANCILLA_QUBITS,
            cnots_per_oracle: CNOTS_PER_ORACLE,
            cnots_per_inversion: CNOTS_PER_INVERSION,
            cnots_per_step,
            iterations,
            total_cnots,
            quoted_total: QUOTED_TOTAL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResourceReport {
    pub n: usize,
    pub ses: SesResources,
    /// `None` unless `n == 256`.
    pub gate_based: Option<GateResources>,
}

pub fn coupler_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Runtime is independent of the common qubit energy; the default is used to
/// compile the schedule.
pub fn compare_resources(plan: &GroverPlan) -> Result<ResourceReport, ScheduleError> {
    let epsilon_base = ghz_to_rad_per_ns(DEFAULT_EPSILON_BASE_GHZ);
    plan.validate()?;
    let runtime_ns = if plan.n >= 2 {
        Some(compile_grover_schedule(plan, epsilon_base)?.total_duration())
    } else {
        None
    };
    Ok(ResourceReport {
        n: plan.n,
        ses: SesResources {
            qubits: plan.n,
            couplers: coupler_count(plan.n),
            iterations: plan.iterations,
            runtime_ns,
        },
        gate_based: (plan.n == GATE_MODEL_SIZE).then(|| GateResources::n256(plan.iterations)),
    })
}

impl ResourceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Two-column aligned text table.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String, String)> = vec![(
            "search size n".into(),
            self.n.to_string(),
            self.n.to_string(),
        )];
        let gate = self.gate_based.as_ref();
        let na = || "unavailable".to_string();
        rows.push((
            "qubits".into(),
            self.ses.qubits.to_string(),
            gate.map_or_else(na, |g| {
                format!(
                    "{} ({}+{}+{})",
                    g.total_qubits, g.input_qubits, g.output_qubits, g.ancillas
                )
            }),
        ));
        rows.push((
            "tunable couplers".into(),
            self.ses.couplers.to_string(),
            gate.map_or_else(na, |_| "-".into()),
        ));
        rows.push((
            "iterations".into(),
            self.ses.iterations.to_string(),
            gate.map_or_else(na, |g| g.iterations.to_string()),
        ));
        rows.push((
            "CNOTs per oracle".into(),
            "-".into(),
            gate.map_or_else(na, |g| g.cnots_per_oracle.to_string()),
        ));
        rows.push((
            "CNOTs per inversion".into(),
            "-".into(),
            gate.map_or_else(na, |g| g.cnots_per_inversion.to_string()),
        ));
        rows.push((
            "CNOTs per step".into(),
            "-".into(),
            gate.map_or_else(na, |g| g.cnots_per_step.to_string()),
        ));
        rows.push((
            "total CNOTs".into(),
            "0".into(),
            gate.map_or_else(na, |g| format!("{} ({})", g.total_cnots, g.quoted_total)),
        ));
        rows.push((
            "runtime (ns)".into(),
            self.ses
                .runtime_ns
                .map_or_else(|| "-".into(), |t| format!("{t:.4}")),
            "-".into(),
        ));

        let headers = ("quantity", "SES", "gate model");
        let w0 = rows
            .iter()
            .map(|r| r.0.len())
            .max()
            .unwrap_or(0)
            .max(headers.0.len());
        let w1 = rows
            .iter()
            .map(|r| r.1.len())
            .max()
            .unwrap_or(0)
            .max(headers.1.len());
        let mut out = String::new();
        let _ = writeln!(out, "{:<w0$}  {:>w1$}  {}", headers.0, headers.1, headers.2);
        for (a, b, c) in rows {
            let _ = writeln!(out, "{a:<w0$}  {b:>w1$}  {c}");
        }
        out
    }
}
