//! The batch commands behind the `gmip` binary: encode an instance file to
//! LP text, solve it, or solve it twice (model and oracle) and compare.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::ip::{emit_lp, IpModel, ModelStats};
use crate::oracle::{check_witness, oracle_solve, OracleError, OracleStatus};
use crate::problems::{decode, encode, problem_value, EncodeError, ProblemSpec, Witness, PROBLEMS};
use crate::rational::Rational;
use crate::solver::{solve, SolveConfig, SolveError, Status};
use crate::specfile::{load_spec, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;
pub const EXIT_ORACLE_CAP: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("cannot encode: {0}")]
    Encode(#[from] EncodeError),
    #[error("cannot solve: {0}")]
    Solve(#[from] SolveError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Oracle(OracleError::CapExceeded { .. }) => EXIT_ORACLE_CAP,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub status: OracleStatus,
    pub value: Option<String>,
    pub witness: Option<String>,
    pub verdict: Verdict,
}

/// One run, as printed or serialised with `--json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub problem: String,
    pub model: ModelStats,
    pub status: Status,
    /// The problem's value (0 for a feasibility question answered yes).
    pub value: Option<String>,
    pub witness: Option<String>,
    pub witness_data: Option<Witness>,
    /// `ok`, or why the decoded answer fails the problem's own check.
    pub witness_check: Option<String>,
    pub nodes: u64,
    pub oracle: Option<OracleComparison>,
    pub wall_ms: u128,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match (&self.oracle, self.status) {
            (_, Status::LimitReached) => EXIT_LIMIT,
            (Some(o), _) if o.verdict == Verdict::Mismatch => EXIT_MISMATCH,
            (Some(_), _) => EXIT_OK,
            (None, Status::Optimal) => EXIT_OK,
            (None, Status::Infeasible) => EXIT_INFEASIBLE,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k:<9} {v}");
        };
        line("problem", &self.problem);
        line("model", &self.model);
        line("status", &self.status);
        if let Some(v) = &self.value {
            line("value", v);
        }
        if let Some(w) = &self.witness {
            line("answer", w);
        }
        if let Some(c) = &self.witness_check {
            line("check", c);
        }
        line("nodes", &self.nodes);
        if let Some(o) = &self.oracle {
            let value = o.value.as_deref().unwrap_or("-");
            line("oracle", &format!("{} {value}", status_word(o.status)));
            line("verdict", &format!("{:?}", o.verdict).to_lowercase());
        }
        line("time", &format!("{} ms", self.wall_ms));
        out
    }
}

fn status_word(s: OracleStatus) -> &'static str {
    match s {
        OracleStatus::Optimal => "optimal",
        OracleStatus::Infeasible => "infeasible",
    }
}

fn show(v: Rational) -> String {
    v.to_string()
}

/// Loads an instance file.
pub fn load(path: &Path) -> Result<ProblemSpec, CliError> {
    Ok(load_spec(path)?)
}

/// Encodes `spec` and returns the model with its LP text.
pub fn encode_spec(spec: &ProblemSpec) -> Result<(IpModel, String), CliError> {
    let model = encode(spec)?;
    let text = emit_lp(&model);
    Ok((model, text))
}

/// Encodes an instance file and writes the LP text to `out`.
pub fn cmd_encode(spec_path: &Path, out: &Path) -> Result<ModelStats, CliError> {
    let (model, text) = encode_spec(&load(spec_path)?)?;
    std::fs::write(out, text).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    Ok(model.stats())
}

fn run(
    spec: &ProblemSpec,
    config: &SolveConfig,
    model: &IpModel,
    started: Instant,
) -> Result<(RunReport, Option<Rational>), CliError> {
    let sol = solve(model, config)?;
    let value = problem_value(spec, sol.objective);
    let (witness, witness_check) = match &sol.assignment {
        Some(a) if sol.status == Status::Optimal => match decode(spec, model, a) {
            Ok(w) => {
                let check = match check_witness(spec, &w) {
                    Ok(v) if Some(v) == value => "ok".to_string(),
                    Ok(v) => format!("answer is worth {v}, not the reported value"),
                    Err(e) => e,
                };
                (Some(w), Some(check))
            }
            Err(e) => (None, Some(format!("cannot decode: {e}"))),
        },
        _ => (None, None),
    };
    let report = RunReport {
        problem: spec.tag().to_string(),
        model: model.stats(),
        status: sol.status,
        value: value.map(show),
        witness: witness.as_ref().map(Witness::to_string),
        witness_data: witness,
        witness_check,
        nodes: sol.stats.nodes,
        oracle: None,
        wall_ms: started.elapsed().as_millis(),
    };
    Ok((report, value))
}

pub fn solve_spec(spec: &ProblemSpec, config: &SolveConfig) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let model = encode(spec)?;
    Ok(run(spec, config, &model, started)?.0)
}

pub fn verify_spec(spec: &ProblemSpec, config: &SolveConfig) -> Result<RunReport, CliError> {
    verify_spec_with(spec, config, &|_| {})
}

/// `verify` with a hook that may alter the model before solving. Lets tests
/// check that a broken encoding is caught.
#[doc(hidden)]
pub fn verify_spec_with(
    spec: &ProblemSpec,
    config: &SolveConfig,
    mutate: &dyn Fn(&mut IpModel),
) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let oracle = oracle_solve(spec)?;
    let mut model = encode(spec)?;
    mutate(&mut model);
    let (mut report, model_value) = run(spec, config, &model, started)?;
    let agree = match (oracle.status, report.status) {
        (OracleStatus::Optimal, Status::Optimal) => {
            oracle.value == model_value && report.witness_check.as_deref() == Some("ok")
        }
        (OracleStatus::Infeasible, Status::Infeasible) => true,
        _ => false,
    };
    report.oracle = Some(OracleComparison {
        status: oracle.status,
        value: oracle.value.map(show),
        witness: oracle.witness.as_ref().map(Witness::to_string),
        verdict: if agree { Verdict::Match } else { Verdict::Mismatch },
    });
    report.wall_ms = started.elapsed().as_millis();
    Ok(report)
}

pub fn list_problems() -> String {
    PROBLEMS.iter().map(|(tag, what)| format!("{tag:<10} {what}\n")).collect()
}
