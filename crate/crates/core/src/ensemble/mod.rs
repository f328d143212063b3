// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Thermal ensembles, train propagation, left/right observables and the
//! (τ, δ) parameter-plane scan.

mod observables;
mod propagate;
mod scan;
mod symmetry;
mod thermal;

pub use observables::{ensemble_observables, Observables, DEFAULT_SIGNAL_FLOOR};
pub use propagate::{propagate_train, Propagator, TRUNCATION_THRESHOLD};
pub use scan::{
    linspace, scan, scan_with_progress, scan_with_workers, Map2, Progress, ScanGrid, ScanMetadata, ScanResult,
};
pub use symmetry::{epsilon_symmetry_report, SymmetryReport};
pub use thermal::{thermal_states, EnsembleMember, ThermalEnsemble, DEFAULT_THERMAL_FLOOR};
