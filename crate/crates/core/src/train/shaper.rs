// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::constants::angular_frequency_from_wavelength_nm;
use crate::error::{Error, Result};

/// Parameters of a two-layer spectral phase shaper.
///
/// Each shaper axis ê₁ = x̂, ê₂ = ŷ imprints the spectral phase
/// φᵢ(ω) = A·sin[(ω − ω₀)τ + δᵢ] on the input pulse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShaperConfig {
    /// Modulation amplitude A.
    pub amplitude: f64,
    /// Train period τ, fs.
    pub tau: f64,
    /// Mask phase offset δ₁ (x axis), rad.
    pub delta1: f64,
    /// Mask phase offset δ₂ (y axis), rad.
    pub delta2: f64,
    /// Carrier angular frequency, rad/fs.
    pub omega0: f64,
    /// Intensity FWHM of the unshaped input pulse, fs.
    pub envelope_fwhm: f64,
    /// Unit polarization vector of the input pulse in the shaper frame.
    pub input_polarization: [f64; 2],
}

impl ShaperConfig {
    pub const DEFAULT_WAVELENGTH_NM: f64 = 800.0;
    pub const DEFAULT_FWHM_FS: f64 = 120.0;

    /// Chiral configuration δ₁ = −δ₂ = δ with the input polarized at 45° to
    /// both shaper axes, 120 fs pulses at 800 nm.
    pub fn chiral(amplitude: f64, tau: f64, delta: f64) -> Result<Self> {
        let cfg = ShaperConfig {
            amplitude,
            tau,
            delta1: delta,
            delta2: -delta,
            omega0: angular_frequency_from_wavelength_nm(Self::DEFAULT_WAVELENGTH_NM),
            envelope_fwhm: Self::DEFAULT_FWHM_FS,
            input_polarization: [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.tau.is_finite() && self.tau > 0.0) {
            problems.push(format!("tau must be > 0, got {}", self.tau));
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            problems.push(format!("amplitude must be >= 0, got {}", self.amplitude));
        }
        if !(self.envelope_fwhm.is_finite() && self.envelope_fwhm > 0.0) {
            problems.push(format!("envelope_fwhm must be > 0, got {}", self.envelope_fwhm));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            problems.push(format!("omega0 must be > 0, got {}", self.omega0));
        }
        if !(self.delta1.is_finite() && self.delta2.is_finite()) {
            problems.push("mask offsets must be finite".to_owned());
        }
        let [ex, ey] = self.input_polarization;
        if ((ex * ex + ey * ey) - 1.0).abs() > 1e-12 {
            problems.push(format!("input_polarization ({ex}, {ey}) is not a unit vector"));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(problems.join("; ")))
        }
    }

    pub fn is_chiral(&self) -> bool {
        self.delta1 == -self.delta2
    }

    /// Per-pulse polarization step (δ₁ − δ₂)/2 after the quarter-wave plate.
    pub fn polarization_step(&self) -> f64 {
        0.5 * (self.delta1 - self.delta2)
    }

    /// Orientation of the input polarization in the lab frame, rad.
    pub fn input_angle(&self) -> f64 {
        self.input_polarization[1].atan2(self.input_polarization[0])
    }

    pub fn carrier_period(&self) -> f64 {
        std::f64::consts::TAU / self.omega0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn chiral_constructor() {
        let cfg = ShaperConfig::chiral(2.0, 1000.0, FRAC_PI_4).unwrap();
        assert!(cfg.is_chiral());
        assert_eq!(cfg.polarization_step(), FRAC_PI_4);
        assert!((cfg.input_angle() - FRAC_PI_4).abs() < 1e-15);
        assert!((cfg.carrier_period() - 2.668).abs() < 1e-3);
    }

    #[test]
    fn validation() {
        assert!(ShaperConfig::chiral(2.0, 0.0, 0.1).is_err());
        assert!(ShaperConfig::chiral(-1.0, 100.0, 0.1).is_err());
        let mut cfg = ShaperConfig::chiral(1.0, 100.0, 0.1).unwrap();
        cfg.envelope_fwhm = 0.0;
        assert!(cfg.validate().is_err());
        cfg.envelope_fwhm = 10.0;
        cfg.input_polarization = [1.0, 1.0];
        assert!(cfg.validate().is_err());
    }
}
