// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Physical constants in the units used throughout the crate
//! (energies in cm⁻¹, times in fs).

/// Speed of light in cm/fs.
pub const SPEED_OF_LIGHT_CM_PER_FS: f64 = 2.997_924_58e-5;

/// Second radiation constant hc/k_B in cm·K.
pub const HC_OVER_KB_CM_K: f64 = 1.438_776_877;

/// Speed of light in nm/fs, for carrier frequencies from wavelengths.
pub const SPEED_OF_LIGHT_NM_PER_FS: f64 = 299.792_458;

/// Angular carrier frequency (rad/fs) of light with the given vacuum wavelength.
pub fn angular_frequency_from_wavelength_nm(wavelength_nm: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT_NM_PER_FS / wavelength_nm
}
