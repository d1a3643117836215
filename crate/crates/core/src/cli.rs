//! Command-line front end. Frequencies are given as `f = ω/2π` in MHz or GHz
//! and converted once, here.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::fullspace::{leakage_sweep, log_log_slope, FullSpaceError, SweepOptions};
use crate::grover::{run_grover, verify_spectrum, GroverError, GroverPlan, SpectrumReport};
use crate::resources::compare_resources;
use crate::schedule::{compile_grover_schedule, export_schedule, ScheduleError};
use crate::units::{ghz_to_rad_per_ns, mhz_to_rad_per_ns, DEFAULT_EPSILON_BASE_GHZ};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ses",
    version,
    about = "Single-excitation-subspace Grover simulator and verifier"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format; the default depends on the subcommand.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Search size (number of qubits).
    #[arg(long)]
    pub n: usize,
    /// Marked item, 1-based.
    #[arg(long, default_value_t = 1)]
    pub marked: usize,
    /// Coupling scale g/2π in MHz.
    #[arg(long = "g-mhz", default_value_t = 1.25)]
    pub g_mhz: f64,
    /// Oracle detuning δε/2π in MHz.
    #[arg(long = "deps-mhz", default_value_t = 100.0)]
    pub deps_mhz: f64,
    /// Override the iteration count (default ⌊(π/4)√n⌋).
    #[arg(long)]
    pub iterations: Option<usize>,
}

impl PlanArgs {
    fn plan(&self) -> Result<GroverPlan, CliError> {
        let g = mhz_to_rad_per_ns(self.g_mhz);
        let deps = mhz_to_rad_per_ns(self.deps_mhz);
        let plan = match self.iterations {
            Some(k) => GroverPlan::with_iterations(self.n, self.marked, g, deps, k),
            None => GroverPlan::new(self.n, self.marked, g, deps),
        };
        plan.map_err(|e| CliError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the SES Grover search and print the result.
    GroverRun {
        #[command(flatten)]
        plan: PlanArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Compile the search into a hardware control schedule document.
    GroverSchedule {
        #[command(flatten)]
        plan: PlanArgs,
        /// Common qubit frequency ε/2π in GHz.
        #[arg(long = "epsilon-base-ghz", default_value_t = DEFAULT_EPSILON_BASE_GHZ)]
        epsilon_base_ghz: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Full-space leakage and SES fidelity versus g/ε.
    LeakageSweep {
        #[arg(long)]
        n: usize,
        /// Comma-separated g/ε ratios.
        #[arg(long, value_delimiter = ',', required = true)]
        ratios: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        marked: usize,
        #[arg(long = "deps-mhz", default_value_t = 100.0)]
        deps_mhz: f64,
        #[arg(long = "epsilon-base-ghz", default_value_t = DEFAULT_EPSILON_BASE_GHZ)]
        epsilon_base_ghz: f64,
        /// Leakage samples per segment.
        #[arg(long, default_value_t = SweepOptions::default().substeps)]
        substeps: usize,
        #[arg(long)]
        iterations: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Check the closed-form spectrum and eigenbasis of the preparation Hamiltonian.
    SpectrumCheck {
        #[arg(long)]
        n: usize,
        #[arg(long = "g-mhz", default_value_t = 1.25)]
        g_mhz: f64,
        #[command(flatten)]
        output: Output,
    },
    /// SES versus gate-model resource comparison.
    CompareResources {
        #[command(flatten)]
        plan: PlanArgs,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<GroverError> for CliError {
    fn from(e: GroverError) -> Self {
        match e {
            GroverError::Linalg(_) => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<ScheduleError> for CliError {
    fn from(e: ScheduleError) -> Self {
        match e {
            ScheduleError::Grover(g) => g.into(),
            ScheduleError::Linalg(_) => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<FullSpaceError> for CliError {
    fn from(e: FullSpaceError) -> Self {
        match e {
            FullSpaceError::Capacity(_)
            | FullSpaceError::BadRatio(_)
            | FullSpaceError::Model(_) => CliError::Invalid(e.to_string()),
            FullSpaceError::Grover(g) => g.into(),
            FullSpaceError::Schedule(s) => s.into(),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Invalid(format!(
            "format {f:?} not supported here (use one of {allowed:?})"
        )))
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn spectrum_table(r: &SpectrumReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n = {}, g = {:.6e} rad/ns", r.n, r.g);
    let _ = writeln!(
        out,
        "eigenvalues: min {:.12e}  max {:.12e}  (expected {:.12e}, {:.12e}, 0 x {})",
        r.eigenvalues[0],
        r.eigenvalues[r.n - 1],
        r.expected[0],
        r.expected[r.n - 1],
        r.n - 2
    );
    let _ = writeln!(
        out,
        "max eigenvalue error      {:.3e}",
        r.max_eigenvalue_error
    );
    let _ = writeln!(out, "max off-diagonal S'HS     {:.3e}", r.max_offdiagonal);
    let _ = writeln!(
        out,
        "max diagonal error S'HS   {:.3e}",
        r.max_diagonal_error
    );
    let _ = writeln!(
        out,
        "max zero-mode overlap     {:.3e}",
        r.max_zero_mode_overlap
    );
    let _ = writeln!(out, "tolerance                 {:.3e}", r.tolerance);
    let _ = writeln!(out, "{}", if r.passed { "PASS" } else { "FAIL" });
    out
}

fn execute(cmd: Command) -> Result<(String, Option<PathBuf>), CliError> {
    match cmd {
        Command::GroverRun { plan, output } => {
            let fmt = pick(output.format, Format::Json, &[Format::Json, Format::Table])?;
            let result = run_grover(&plan.plan()?)?;
            let text = match fmt {
                Format::Json => {
                    serde_json::to_string_pretty(&result).expect("result serializes") + "\n"
                }
                _ => {
                    let mut s = String::new();
                    let _ = writeln!(s, "n                    {}", result.n);
                    let _ = writeln!(s, "marked               {}", result.marked);
                    let _ = writeln!(s, "iterations           {}", result.iterations);
                    let _ = writeln!(s, "success probability  {:.12}", result.success_probability);
                    let _ = writeln!(s, "t_unif (ns)          {:.6}", result.t_unif_ns);
                    let _ = writeln!(s, "t_oracle (ns)        {:.6}", result.t_oracle_ns);
                    let _ = writeln!(s, "t_inversion (ns)     {:.6}", result.t_inversion_ns);
                    let _ = writeln!(s, "total (ns)           {:.6}", result.total_ns);
                    s
                }
            };
            Ok((text, output.out))
        }
        Command::GroverSchedule {
            plan,
            epsilon_base_ghz,
            output,
        } => {
            pick(output.format, Format::Json, &[Format::Json])?;
            positive("epsilon-base-ghz", epsilon_base_ghz)?;
            let schedule =
                compile_grover_schedule(&plan.plan()?, ghz_to_rad_per_ns(epsilon_base_ghz))?;
            Ok((export_schedule(&schedule) + "\n", output.out))
        }
        Command::LeakageSweep {
            n,
            ratios,
            marked,
            deps_mhz,
            epsilon_base_ghz,
            substeps,
            iterations,
            output,
        } => {
            let fmt = pick(output.format, Format::Csv, &[Format::Csv, Format::Json])?;
            positive("epsilon-base-ghz", epsilon_base_ghz)?;
            if substeps == 0 {
                return Err(CliError::Invalid("substeps must be at least 1".into()));
            }
            // g is set per point from the ratio; the plan's value only fixes
            // timing for a zero ratio.
            let plan = PlanArgs {
                n,
                marked,
                g_mhz: 1.25,
                deps_mhz,
                iterations,
            }
            .plan()?;
            let sweep = leakage_sweep(
                &plan,
                ghz_to_rad_per_ns(epsilon_base_ghz),
                &ratios,
                SweepOptions { substeps },
            )?;
            let text = match fmt {
                Format::Json => {
                    let mut v = serde_json::to_value(&sweep).expect("sweep serializes");
                    v["log_log_slope"] = serde_json::json!(log_log_slope(&sweep.points));
                    serde_json::to_string_pretty(&v).expect("json") + "\n"
                }
                _ => sweep.to_csv(),
            };
            Ok((text, output.out))
        }
        Command::SpectrumCheck { n, g_mhz, output } => {
            let fmt = pick(output.format, Format::Table, &[Format::Table, Format::Json])?;
            let report = verify_spectrum(n, mhz_to_rad_per_ns(g_mhz))?;
            let text = match fmt {
                Format::Json => {
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                }
                _ => spectrum_table(&report),
            };
            Ok((text, output.out))
        }
        Command::CompareResources { plan, output } => {
            let fmt = pick(output.format, Format::Table, &[Format::Table, Format::Json])?;
            let report = compare_resources(&plan.plan()?)?;
            let text = match fmt {
                Format::Json => report.to_json() + "\n",
                _ => report.to_table(),
            };
            Ok((text, output.out))
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `stdout` (or `--out`) and diagnostics to `stderr`. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command) {
        Ok((text, None)) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_INTERNAL
            }
        },
        Ok((text, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                EXIT_INTERNAL
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
