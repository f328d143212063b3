// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Rigid-rotor states |N, M⟩, their field-free energies, the cos²
//! interaction operators and the unitaries built from them.
//!
//! The quantization axis z is the propagation direction of the pulse train;
//! pulse polarizations lie in the x–y plane.

mod angular;
mod basis;
mod kick;
mod operator;
mod species;
mod wavefunction;

pub use angular::{gaunt_y2, wigner_3j};
pub use basis::{build_basis, RotorBasis};
pub use kick::{kick_unitary, KickCache, KickSpectrum, UnitaryBlock};
pub use operator::{cos2_matrix, cos2_matrix_x, Axis, Operator};
pub use species::{beat_period, rotational_energy, Parity, Species, SpeciesRegistry};
pub use wavefunction::{free_propagate, rotate_z, WaveFunction};
