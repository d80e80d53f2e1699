use std::fs;
use std::io::Write;

use nilpairs_core::io::FieldJson;
use serde::Serialize;
use thiserror::Error;

use crate::args::{Common, Format};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input, guard violations.
    #[error("{0}")]
    Usage(String),
    /// A violated invariant or a falsification event.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<nilpairs_core::Error> for CliError {
    fn from(err: nilpairs_core::Error) -> Self {
        use nilpairs_core::Error as E;
        match err {
            E::Falsification(_) | E::Invariant(_) | E::Internal(_) => CliError::Failure(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Serialize)]
pub struct Budgets {
    pub enumeration_cap: u64,
    pub samples: u64,
}

/// Every report carries enough to rerun it.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub budgets: Budgets,
    pub fields: Vec<FieldJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limitations: Option<Vec<&'static str>>,
    pub result: T,
}

pub fn envelope<'a, T: Serialize>(common: &Common, seed: u64, command: &'a str, fields: Vec<FieldJson>, result: T) -> Envelope<'a, T> {
    Envelope {
        tool: "nilpairs",
        version: VERSION,
        command,
        seed,
        budgets: Budgets { enumeration_cap: common.enumeration_cap, samples: common.samples },
        fields,
        limitations: None,
        result,
    }
}

pub fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failure(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn emit(common: &Common, text: &str) -> CliResult<()> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Failure(e.to_string()))
        }
    }
}

pub fn require_json(common: &Common, command: &str) -> CliResult<()> {
    if common.format == Format::Csv {
        return Err(CliError::Usage(format!("{command} has no CSV output")));
    }
    Ok(())
}
