//! Cabin layouts shipped with the crate.
//!
//! Seat maps match the seat counts, abreast patterns and door counts of the
//! real aircraft; row pitch, galley extent and door positions are
//! approximations.

use crate::cabin::{parse_layout, CabinGrid};
use crate::error::ConfigError;

/// `(name, file contents)` for every shipped layout.
pub const BUILTIN: &[(&str, &str)] = &[
    ("b737", include_str!("../data/b737.cab")),
    ("a320", include_str!("../data/a320.cab")),
    ("b767", include_str!("../data/b767.cab")),
    ("a330", include_str!("../data/a330.cab")),
    ("prp-wide", include_str!("../data/prp-wide.cab")),
    ("prp-narrow", include_str!("../data/prp-narrow.cab")),
];

/// Layout text by name. A trailing `.cab` is ignored.
pub fn source(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".cab").unwrap_or(name);
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Parses a shipped layout. Panics only if the embedded file is broken,
/// which the tests rule out.
pub fn builtin(name: &str) -> Option<CabinGrid> {
    source(name).map(|text| parse_layout(text).expect("shipped layout parses"))
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

/// Resolves a layout argument: a shipped name, or else a path on disk.
pub fn load(name_or_path: &str) -> Result<CabinGrid, ConfigError> {
    if let Some(text) = source(name_or_path) {
        return Ok(parse_layout(text)?);
    }
    let text = std::fs::read_to_string(name_or_path).map_err(|source| ConfigError::Io {
        path: name_or_path.to_owned(),
        source,
    })?;
    Ok(parse_layout(&text)?)
}
