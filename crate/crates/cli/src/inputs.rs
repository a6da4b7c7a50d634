//! Command-line spellings of hosts and dilators.

use std::sync::Arc;

use ukruskal::dilator::{resolve, CodedDilator};
use ukruskal::orders::FinPoset;

use crate::CliError;

/// `empty`, `chain:<k>`, `antichain:<k>`, an inline poset object, or the
/// path of a poset file.
pub fn host(spec: &str) -> Result<FinPoset, CliError> {
    let spec = spec.trim();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::input(format!("bad host {spec:?}")))
    };
    if spec == "empty" {
        return Ok(FinPoset::empty());
    }
    if let Some(k) = spec.strip_prefix("chain:") {
        return Ok(FinPoset::chain(num(k)?));
    }
    if let Some(k) = spec.strip_prefix("antichain:") {
        return Ok(FinPoset::antichain(num(k)?));
    }
    let text = if spec.starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| CliError::input(format!("cannot read {spec:?}: {e}")))?
    };
    Ok(FinPoset::from_json(&text)?)
}

/// A built-in name or a dilator file; unreadable or malformed input is an
/// input error even when the library reports it structurally.
pub fn dilator(spec: &str) -> Result<Arc<CodedDilator>, CliError> {
    resolve(spec).map_err(|e| CliError::input(e.to_string()))
}

/// `inf` or a number.
pub fn branching(spec: &str) -> Result<Option<usize>, CliError> {
    if spec == "inf" {
        return Ok(None);
    }
    spec.parse()
        .map(Some)
        .map_err(|_| CliError::input(format!("bad branching bound {spec:?}, expected a number or inf")))
}

/// Comma separated letters such as `0,1,1`; the empty string is the empty word.
pub fn word(spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::input(format!("bad word {spec:?}"))))
        .collect()
}
