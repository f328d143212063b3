// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration, file output and the command-line front end.

pub mod cli;
pub mod config;
pub mod export;
pub mod format;
pub mod selftest;

pub use config::{RunConfig, ScanSection, ShaperSection, SynthSection};
