//! Text input formats: `.cfg` cell arrays and cyclic tag system descriptions.

use std::fs;
use std::path::Path;

use ecalab_core::cts::{self, CtsSystem};
use ecalab_core::Configuration;

use crate::error::CliError;

/// Parses the `.cfg` configuration format.
///
/// Cells are `'0'`/`'1'` characters in increasing `x` order; all whitespace
/// is ignored; any other character is an error reported with its byte
/// offset. The file must contain at least one digit.
pub fn parse_cfg(text: &str) -> Result<Configuration, CliError> {
    let mut cells = Vec::new();
    for (offset, byte) in text.bytes().enumerate() {
        match byte {
            b'0' => cells.push(false),
            b'1' => cells.push(true),
            b if b.is_ascii_whitespace() => {}
            other => {
                return Err(CliError::Data(format!(
                    "illegal character {:?} at byte offset {offset}: expected '0', '1', or whitespace",
                    other as char
                )))
            }
        }
    }
    if cells.is_empty() {
        return Err(CliError::Data(
            "zero digits: a configuration needs at least one cell".into(),
        ));
    }
    Ok(Configuration::from_cells(cells))
}

/// Loads a configuration from a `.cfg` file.
pub fn load_cfg(path: &Path) -> Result<Configuration, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    parse_cfg(&text).map_err(|e| match e {
        CliError::Data(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Parses a cyclic tag system description.
///
/// The first content line is the initial tape word; every following content
/// line is one appendant. `#` starts a comment running to the end of the
/// line; blank lines are skipped (so an empty appendant cannot be written in
/// this format, though the interpreter itself supports them).
pub fn parse_cts(text: &str) -> Result<(Vec<bool>, CtsSystem), CliError> {
    let mut initial: Option<Vec<bool>> = None;
    let mut appendants = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let word = cts::word_from_str(line)
            .map_err(|e| CliError::Data(format!("line {}: {e}", index + 1)))?;
        match initial {
            None => initial = Some(word),
            Some(_) => appendants.push(word),
        }
    }
    let initial = initial
        .ok_or_else(|| CliError::Data("missing initial word: the description is empty".into()))?;
    let system = CtsSystem::new(appendants)
        .map_err(|_| CliError::Data("the description needs at least one appendant line".into()))?;
    Ok((initial, system))
}

/// Loads a cyclic tag system description from a file.
pub fn load_cts(path: &Path) -> Result<(Vec<bool>, CtsSystem), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    parse_cts(&text).map_err(|e| match e {
        CliError::Data(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}
