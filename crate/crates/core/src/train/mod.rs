// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Chiral pulse trains: from a sinusoidal spectral phase on two orthogonal
//! shaper axes to a sampled optical field, and from the field to the ordered
//! list of instantaneous kicks consumed by the propagator.

mod bessel;
mod field;
mod pulses;
mod shaper;

pub use bessel::{bessel_j, bessel_j_sequence, bessel_weights};
pub use field::{project_polarization, quarter_wave, synthesize_field, PulseStokes, SampledField, TimeGrid};
pub use pulses::{retained_cutoff, train_from_shaper, ChiralTrain, Pulse};
pub use shaper::ShaperConfig;
