// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: group tables, verification against the
//! transcribed reference tables, sampling and superdense-coding runs.

pub mod commands;
pub mod references;
pub mod render;

pub use commands::{run, Cli, Exit};
