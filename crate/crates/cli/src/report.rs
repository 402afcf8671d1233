//! JSON run reports, output files and exit codes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use eccpie::Error;
use serde::Serialize;
use serde_json::Value;

/// Bumped on incompatible changes to the report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Code {
    Internal = 1,
    Invalid = 2,
    Budget = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub code: Code,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: Code::Invalid,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            code: Code::Internal,
            message: message.into(),
        }
    }

    /// Attributes a library error to the flag that caused it.
    pub fn flag(flag: &str, e: Error) -> Self {
        let mut err = Self::from(e);
        if err.code == Code::Invalid {
            err.message = format!("{flag}: {}", err.message);
        }
        err
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => Code::Budget,
            Error::Domain(_)
            | Error::NotOnCircle { .. }
            | Error::ApexOutside { .. }
            | Error::DegenerateSector { .. }
            | Error::DimensionMismatch { .. }
            | Error::Parse { .. }
            | Error::Invalid(_) => Code::Invalid,
            Error::Quadrature { .. }
            | Error::Internal(_)
            | Error::SingularJacobian { .. }
            | Error::NoConvergence { .. } => Code::Internal,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub inputs: Value,
    pub solutions: Value,
    pub warnings: Vec<String>,
    #[serde(rename = "paper_check", skip_serializing_if = "Option::is_none")]
    pub reference_check: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(command: &'static str, inputs: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            inputs,
            solutions: Value::Null,
            warnings: Vec::new(),
            reference_check: None,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are finite");
        s.push('\n');
        s
    }
}

/// Writes `text` to `path`, or to stdout when the path is `-`.
pub fn write_output(path: &Path, text: &str) -> CliResult {
    if path == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text).map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

/// Wall-clock time per named stage.
pub struct Stopwatch {
    last: Instant,
    stages: BTreeMap<String, f64>,
}

impl Stopwatch {
    pub fn start() -> Self {
        Self {
            last: Instant::now(),
            stages: BTreeMap::new(),
        }
    }

    pub fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.stages
            .insert(stage.to_string(), (now - self.last).as_secs_f64() * 1e3);
        self.last = now;
    }

    pub fn into_report(self, enabled: bool) -> Option<BTreeMap<String, f64>> {
        enabled.then_some(self.stages)
    }
}
