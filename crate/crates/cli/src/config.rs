//! Job configuration assembled from an optional JSON file and command-line
//! flags, with flags taking precedence.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::ValueEnum;
use qinv::refgroup::{GroupSpec, Multiplicity, ReflectionGroup};
use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandName {
    GroupInfo,
    QiBasis,
    QiPoincare,
    FreeGens,
    KzTwist,
    ShiftOp,
    Verify,
    Baf,
}

impl CommandName {
    pub fn name(self) -> &'static str {
        match self {
            CommandName::GroupInfo => "group-info",
            CommandName::QiBasis => "qi-basis",
            CommandName::QiPoincare => "qi-poincare",
            CommandName::FreeGens => "free-gens",
            CommandName::KzTwist => "kz-twist",
            CommandName::ShiftOp => "shift-op",
            CommandName::Verify => "verify",
            CommandName::Baf => "baf",
        }
    }

    fn parse(s: &str) -> Option<CommandName> {
        CommandName::value_variants().iter().copied().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Raising,
    Lowering,
}

/// Values given on the command line; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub command: Option<CommandName>,
    pub group: Option<String>,
    pub k: Option<String>,
    pub a: Option<String>,
    pub max_deg: Option<i64>,
    pub tau: Option<String>,
    pub orbit: Option<usize>,
    pub shift_a: Option<i64>,
    pub direction: Option<DirectionArg>,
    pub suite: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

const CONFIG_KEYS: [&str; 12] =
    ["command", "group", "k", "a", "maxDeg", "tau", "orbit", "shiftA", "direction", "suite", "out", "format"];

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn string_field(obj: &Map<String, Value>, key: &str) -> Result<Option<String>, CliError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(Value::Number(n)) if key == "k" || key == "a" => Ok(Some(n.to_string())),
        Some(other) => Err(config_error(format!("`{key}` must be a string, got {other}"))),
    }
}

fn int_field(obj: &Map<String, Value>, key: &str) -> Result<Option<i64>, CliError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_i64().map(Some).ok_or_else(|| config_error(format!("`{key}` must be an integer, got {v}"))),
    }
}

fn enum_field<T: ValueEnum>(obj: &Map<String, Value>, key: &str) -> Result<Option<T>, CliError> {
    string_field(obj, key)?
        .map(|s| T::from_str(&s, false).map_err(|_| config_error(format!("invalid `{key}`: {s}"))))
        .transpose()
}

impl RawConfig {
    /// Reads a JSON config file; unknown keys are rejected.
    pub fn from_file(path: &Path) -> Result<RawConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        let value: Value =
            serde_json::from_str(&text).map_err(|e| config_error(format!("{} is not valid JSON: {e}", path.display())))?;
        let obj = value.as_object().ok_or_else(|| config_error("config file must hold a JSON object"))?;
        if let Some(key) = obj.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(config_error(format!("unknown config key `{key}`")));
        }
        let command = string_field(obj, "command")?
            .map(|s| CommandName::parse(&s).ok_or_else(|| config_error(format!("unknown command `{s}`"))))
            .transpose()?;
        let orbit = int_field(obj, "orbit")?
            .map(|o| usize::try_from(o).map_err(|_| config_error("`orbit` must be non-negative")))
            .transpose()?;
        Ok(RawConfig {
            command,
            group: string_field(obj, "group")?,
            k: string_field(obj, "k")?,
            a: string_field(obj, "a")?,
            max_deg: int_field(obj, "maxDeg")?,
            tau: string_field(obj, "tau")?,
            orbit,
            shift_a: int_field(obj, "shiftA")?,
            direction: enum_field(obj, "direction")?,
            suite: string_field(obj, "suite")?,
            out: string_field(obj, "out")?.map(PathBuf::from),
            format: enum_field(obj, "format")?,
        })
    }

    /// Fields of `self` override those of `base`.
    pub fn over(self, base: RawConfig) -> RawConfig {
        RawConfig {
            command: self.command.or(base.command),
            group: self.group.or(base.group),
            k: self.k.or(base.k),
            a: self.a.or(base.a),
            max_deg: self.max_deg.or(base.max_deg),
            tau: self.tau.or(base.tau),
            orbit: self.orbit.or(base.orbit),
            shift_a: self.shift_a.or(base.shift_a),
            direction: self.direction.or(base.direction),
            suite: self.suite.or(base.suite),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
        }
    }
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: CommandName,
    pub group: Option<Arc<ReflectionGroup>>,
    pub k: Option<Multiplicity>,
    pub max_deg: Option<i64>,
    pub tau: Option<String>,
    pub orbit: usize,
    pub shift_a: i64,
    pub direction: DirectionArg,
    pub suite: String,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub const SUITES: [&str; 9] = [
    "dunkl-axioms",
    "membership-crosscheck",
    "poincare",
    "freeness",
    "intertwining",
    "kz-additivity",
    "baf",
    "fake-degrees",
    "all",
];

impl JobConfig {
    pub fn resolve(raw: RawConfig) -> Result<JobConfig, CliError> {
        let command = raw.command.ok_or_else(|| config_error("no command given"))?;
        let group = raw
            .group
            .as_deref()
            .map(|s| {
                let spec = GroupSpec::parse(s).map_err(|e| config_error(format!("--group {s}: {e}")))?;
                ReflectionGroup::cached(&spec).map_err(|e| config_error(format!("--group {s}: {e}")))
            })
            .transpose()?;
        if group.is_none() && command != CommandName::Verify {
            return Err(config_error(format!("`{}` needs --group", command.name())));
        }
        let k = match (&group, raw.k.as_deref()) {
            (Some(g), Some(s)) => Some(Multiplicity::parse(g, s).map_err(|e| config_error(format!("--k {s}: {e}")))?),
            (Some(g), None) => Some(Multiplicity::zero(g)),
            (None, Some(_)) => return Err(config_error("--k needs --group")),
            (None, None) => None,
        };
        let k = match (&group, k, raw.a.as_deref()) {
            (Some(g), Some(k), Some(a)) => {
                let twist = Multiplicity::parse_twist(g, a).map_err(|e| config_error(format!("--a {a}: {e}")))?;
                Some(k.with_twist(Some(twist)))
            }
            (None, _, Some(_)) => return Err(config_error("--a needs --group")),
            (_, k, _) => k,
        };
        if let Some(d) = raw.max_deg {
            if d < 0 {
                return Err(config_error("--max-deg must be non-negative"));
            }
        }
        let suite = raw.suite.unwrap_or_else(|| "all".to_string());
        if !SUITES.contains(&suite.as_str()) {
            return Err(config_error(format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "))));
        }
        Ok(JobConfig {
            command,
            group,
            k,
            max_deg: raw.max_deg,
            tau: raw.tau,
            orbit: raw.orbit.unwrap_or(0),
            shift_a: raw.shift_a.unwrap_or(1),
            direction: raw.direction.unwrap_or(DirectionArg::Raising),
            suite,
            out: raw.out,
            format: raw.format.unwrap_or(Format::Json),
        })
    }

    /// The resolved configuration, echoed in every report.
    pub fn to_json(&self, max_deg: Option<i64>) -> Value {
        let mut obj = Map::new();
        if let Some(g) = &self.group {
            obj.insert("group".into(), json!(g.spec().to_string()));
        }
        if let Some(k) = &self.k {
            obj.insert("k".into(), json!(k.to_string()));
        }
        if let Some(d) = max_deg {
            obj.insert("maxDeg".into(), json!(d));
        }
        match self.command {
            CommandName::QiBasis => {
                if let Some(t) = &self.tau {
                    obj.insert("tau".into(), json!(t));
                }
            }
            CommandName::ShiftOp => {
                obj.insert("orbit".into(), json!(self.orbit));
                obj.insert("shiftA".into(), json!(self.shift_a));
                let dir = match self.direction {
                    DirectionArg::Raising => "raising",
                    DirectionArg::Lowering => "lowering",
                };
                obj.insert("direction".into(), json!(dir));
            }
            CommandName::Verify => {
                obj.insert("suite".into(), json!(self.suite));
            }
            _ => {}
        }
        Value::Object(obj)
    }
}
