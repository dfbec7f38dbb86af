//! Group sources: `corpus:<name>`, `pc:<path>`, `cayley:<path>`, or a bare path.

use std::fs;
use std::path::Path;

use pgroup_core::corpus;
use pgroup_core::exec::Execution;
use pgroup_core::pc::PcPresentation;
use pgroup_core::structure::prime_of_order;
use pgroup_core::table::{CayleyFile, GroupTable};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Pc,
    Cayley,
}

pub struct Loaded {
    pub table: GroupTable,
    pub presentation: Option<PcPresentation>,
}

impl Loaded {
    /// The prime of a presentation, else the one dividing the order.
    pub fn prime(&self) -> Result<u64, CliError> {
        if let Some(p) = &self.presentation {
            return Ok(p.prime());
        }
        prime_of_order(self.table.order()).ok_or_else(|| {
            CliError::Precondition(format!("group of order {} is not a p-group", self.table.order()))
        })
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
}

pub fn read_presentation(path: &str) -> Result<PcPresentation, CliError> {
    PcPresentation::parse(&read(path)?).map_err(|e| CliError::Parse(format!("{path}: {e}")))
}

fn from_presentation(p: PcPresentation, what: &str, exec: Execution) -> Result<Loaded, CliError> {
    let (table, _) = p.to_cayley_with(exec).map_err(|e| CliError::Parse(format!("{what}: {e}")))?;
    Ok(Loaded { table, presentation: Some(p) })
}

fn from_cayley(path: &str) -> Result<Loaded, CliError> {
    let file: CayleyFile =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
    let table = GroupTable::from_cayley_file(file).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
    Ok(Loaded { table, presentation: None })
}

pub fn load(source: &str, format: Option<Format>, exec: Execution) -> Result<Loaded, CliError> {
    if let Some(name) = source.strip_prefix("corpus:") {
        let entry = corpus::find(name).ok_or_else(|| CliError::Io(format!("no corpus entry `{name}`")))?;
        let p = entry.presentation().map_err(|e| CliError::Parse(format!("corpus:{name}: {e}")))?;
        return from_presentation(p, source, exec);
    }
    if let Some(path) = source.strip_prefix("pc:") {
        return from_presentation(read_presentation(path)?, path, exec);
    }
    if let Some(path) = source.strip_prefix("cayley:") {
        return from_cayley(path);
    }
    let format = format.unwrap_or_else(|| {
        if Path::new(source).extension().is_some_and(|e| e == "json") {
            Format::Cayley
        } else {
            Format::Pc
        }
    });
    match format {
        Format::Pc => from_presentation(read_presentation(source)?, source, exec),
        Format::Cayley => from_cayley(source),
    }
}
