//! `qinv`: command-line front end for quasi-invariant computations.
//!
//! Exit codes: 0 when every check passes, 1 on a verification or computation
//! failure, 2 on a usage or configuration error.

mod commands;
mod config;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qinv::baf::BafError;
use qinv::quasiinv::QiError;
use qinv::refgroup::{GroupError, MultiplicityError};
use qinv::shiftops::ShiftError;
use serde_json::{json, Value};
use thiserror::Error;

use config::{CommandName, DirectionArg, Format, JobConfig, RawConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{kind} error: {message}")]
    Computation { kind: &'static str, message: String },
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Computation { .. } => 1,
            CliError::Config(_) | CliError::Output { .. } => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Computation { kind, .. } => kind,
            CliError::Output { .. } => "output",
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::UnknownRep(_) | GroupError::InvalidParameters(_) => CliError::Config(e.to_string()),
            other => CliError::Computation { kind: "group", message: other.to_string() },
        }
    }
}

impl From<MultiplicityError> for CliError {
    fn from(e: MultiplicityError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<QiError> for CliError {
    fn from(e: QiError) -> Self {
        match e {
            QiError::InvalidArgument(_) | QiError::NotIntegral | QiError::IncompatibleMultiplicity(_) => {
                CliError::Config(e.to_string())
            }
            QiError::Group(g) => g.into(),
            other => CliError::Computation { kind: "quasiinv", message: other.to_string() },
        }
    }
}

impl From<ShiftError> for CliError {
    fn from(e: ShiftError) -> Self {
        match e {
            ShiftError::InvalidArgument(_) | ShiftError::UnreachableTarget(_) => CliError::Config(e.to_string()),
            ShiftError::Qi(q) => q.into(),
            other => CliError::Computation { kind: "shiftops", message: other.to_string() },
        }
    }
}

impl From<BafError> for CliError {
    fn from(e: BafError) -> Self {
        match e {
            BafError::InvalidMultiplicity => CliError::Config(e.to_string()),
            BafError::Shift(s) => s.into(),
            BafError::Qi(q) => q.into(),
            BafError::Group(g) => g.into(),
            other => CliError::Computation { kind: "baf", message: other.to_string() },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qinv", version, about = "Exact quasi-invariants of complex reflection groups")]
struct Cli {
    /// Command to run; may instead come from the config file.
    #[arg(value_enum)]
    command: Option<CommandName>,
    /// Group: cyclic:n, dihedral:m:p (G(m,p,2)), symmetric:n.
    #[arg(long)]
    group: Option<String>,
    /// Multiplicity: comma lists per orbit separated by `;`, entries may be `a/b`.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Twist a-function, one integer per orbit.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long)]
    max_deg: Option<i64>,
    /// Irreducible representation name, or `regular`.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    orbit: Option<usize>,
    /// Shift parameter a in 1..n_C-1.
    #[arg(long)]
    shift_a: Option<i64>,
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
    /// Verification suite (dunkl-axioms, membership-crosscheck, poincare,
    /// freeness, intertwining, kz-additivity, baf, fake-degrees, all).
    #[arg(long)]
    suite: Option<String>,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn raw(self) -> Result<RawConfig, CliError> {
        let base = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        let flags = RawConfig {
            command: self.command,
            group: self.group,
            k: self.k,
            a: self.a,
            max_deg: self.max_deg,
            tau: self.tau,
            orbit: self.orbit,
            shift_a: self.shift_a,
            direction: self.direction,
            suite: self.suite,
            out: self.out,
            format: self.format,
        };
        Ok(flags.over(base))
    }
}

/// Flattens a JSON value into sorted `path: value` lines.
fn render_text(value: &Value, path: &str, out: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                let next = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                render_text(v, &next, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                render_text(v, &format!("{path}[{i}]"), out);
            }
        }
        Value::String(s) => out.push(format!("{path}: {s}")),
        other => out.push(format!("{path}: {other}")),
    }
}

fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut lines = Vec::new();
            render_text(report, "", &mut lines);
            lines.join("\n") + "\n"
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Output { path: path.display().to_string(), message: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    let job = JobConfig::resolve(cli.raw()?)?;
    let report = match commands::run(&job) {
        Ok(outcome) => json!({
            "schemaVersion": 1,
            "command": job.command.name(),
            "config": job.to_json(outcome.max_deg),
            "passed": outcome.passed,
            "result": outcome.result,
        }),
        Err(e @ CliError::Computation { .. }) => {
            let report = json!({
                "schemaVersion": 1,
                "command": job.command.name(),
                "config": job.to_json(job.max_deg),
                "passed": false,
                "error": { "kind": e.kind(), "message": e.to_string() },
            });
            emit(&render(&report, job.format), job.out.as_ref())?;
            return Ok(e.exit_code());
        }
        Err(e) => return Err(e),
    };
    emit(&render(&report, job.format), job.out.as_ref())?;
    Ok(if report["passed"] == json!(true) { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qinv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
