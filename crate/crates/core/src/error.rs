// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Population leaked into the highest shells of a truncated basis.
    #[error(
        "basis too small: population {population:.3e} in the top two shells (N >= {lowest_top_shell}) \
         exceeds {threshold:.0e}; increase n_max beyond {n_max}"
    )]
    BasisTooSmall {
        population: f64,
        threshold: f64,
        lowest_top_shell: u32,
        n_max: u32,
    },

    #[error("configuration error: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("scan cell (tau = {tau} fs, delta = {delta} rad) failed: {source}")]
    ScanCell {
        tau: f64,
        delta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Config(_) => 1,
            Error::BasisTooSmall { .. } | Error::ScanCell { .. } => 2,
            Error::Io { .. } => 3,
        }
    }
}
