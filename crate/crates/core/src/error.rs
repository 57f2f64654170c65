use thiserror::Error;

use crate::engine::Snapshot;

#[derive(Debug, Error, PartialEq)]
pub enum LayoutError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("seat {seat} cannot be reached from every door")]
    Connectivity { seat: String },
    #[error("invalid layout: {0}")]
    Validation(String),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Format(String),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("no progress after {} ticks ({} passengers unfinished)", .0.tick, .0.unfinished)]
    Deadlock(Box<Snapshot>),
}

#[derive(Debug, Error, PartialEq)]
pub enum RateError {
    #[error("elapsed time must be positive")]
    Division,
    #[error("passenger and door counts must be positive")]
    Invalid,
}

#[derive(Debug, Error, PartialEq)]
pub enum ScheduleError {
    #[error("activity network has a cycle through `{0}`")]
    Cycle(String),
    #[error("unknown activity `{0}`")]
    UnknownActivity(String),
    #[error("invalid scenario: {0}")]
    Validation(String),
}
