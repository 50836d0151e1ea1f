// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Bell index (j={j}, n={n}, m={m}) for dimension {dim}")]
    InvalidIndex { dim: usize, j: usize, n: u8, m: u8 },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("mode space mismatch: {0}")]
    ModeSpaceMismatch(String),

    #[error("state is not normalized (norm {0})")]
    Unnormalized(f64),

    #[error("group table is empty")]
    EmptyTable,

    #[error("outcome {0} is not in the support of any group")]
    UnknownOutcome(String),

    #[error("group {group} has members with differing outcome supports")]
    InconsistentGroup { group: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
