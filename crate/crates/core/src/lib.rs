// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Unidirectional molecular rotation driven by chiral pulse trains.
//!
//! A chiral train is a sequence of linearly polarized pulses whose
//! polarization steps by a fixed angle from pulse to pulse. This crate
//! synthesizes such trains from pulse-shaper parameters, propagates a thermal
//! ensemble of rigid quantum rotors through them in the impulsive (δ-kick)
//! limit, and maps excitation efficiency and rotational directionality over
//! the (train period, polarization step) plane.
//!
//! The crate is organized bottom-up:
//!
//! * [`rotor`]: rigid-rotor basis, energies, cos² interaction operators,
//!   kick unitaries and free evolution.
//! * [`train`]: Bessel sideband weights, optical field synthesis, the
//!   quarter-wave plate and reduction of the field to a list of kicks.
//! * [`ensemble`]: thermal averaging, train propagation, observables and the
//!   parameter-plane scan.
//! * [`io`]: run configuration, CSV/JSON export and the command-line front
//!   end.

pub mod constants;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod oracle;
pub mod rotor;
pub mod train;

pub use error::{Error, Result};

pub use ensemble::{
    ensemble_observables, epsilon_symmetry_report, propagate_train, scan, scan_with_progress, scan_with_workers,
    thermal_states, Observables, Propagator, ScanGrid, ScanResult, SymmetryReport, ThermalEnsemble,
};
pub use rotor::{
    beat_period, build_basis, cos2_matrix, cos2_matrix_x, free_propagate, kick_unitary, rotate_z, rotational_energy,
    Axis, Operator, Parity, RotorBasis, Species, SpeciesRegistry, WaveFunction,
};
pub use train::{
    bessel_weights, project_polarization, quarter_wave, synthesize_field, train_from_shaper, ChiralTrain, Pulse,
    SampledField, ShaperConfig, TimeGrid,
};

/// Crate version recorded in emitted metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
