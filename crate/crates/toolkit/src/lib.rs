//! Std companion of `bergman-core`: the verification suite, report and
//! function-spec formats, a rayon driver for the extremal search, and the
//! `bergman` command line.

pub mod fnspec;
pub mod report;
pub mod search;
pub mod verify;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ToolkitError {
    #[error(transparent)]
    Core(#[from] bergman_core::Error),
    #[error("function spec: {0}")]
    Spec(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
