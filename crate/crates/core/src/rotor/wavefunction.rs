// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use super::basis::RotorBasis;
use crate::constants::SPEED_OF_LIGHT_CM_PER_FS;
use crate::error::{Error, Result};

/// Tolerance on |‖ψ‖² − 1| accepted for a wavefunction.
pub const NORM_TOL: f64 = 1e-9;

/// Normalized state vector over a rotor basis.
#[derive(Clone, Debug)]
pub struct WaveFunction {
    basis: Arc<RotorBasis>,
    amplitudes: DVector<Complex64>,
}

impl WaveFunction {
    /// The basis state |N, M⟩.
    pub fn basis_state(basis: &Arc<RotorBasis>, n: u32, m: i32) -> Result<Self> {
        let index = basis
            .index_of(n, m)
            .ok_or_else(|| Error::invalid(format!("|{n}, {m}⟩ is not in the basis")))?;
        Ok(Self::from_index(basis, index))
    }

    pub(crate) fn from_index(basis: &Arc<RotorBasis>, index: usize) -> Self {
        let mut amplitudes = DVector::zeros(basis.len());
        amplitudes[index] = Complex64::new(1.0, 0.0);
        WaveFunction {
            basis: basis.clone(),
            amplitudes,
        }
    }

    /// Wrap amplitudes that are already normalized to within [`NORM_TOL`].
    pub fn from_amplitudes(basis: &Arc<RotorBasis>, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::invalid(format!(
                "{} amplitudes for a basis of {} states",
                amplitudes.len(),
                basis.len()
            )));
        }
        let norm = amplitudes.norm_squared();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("wavefunction norm² is {norm}, not 1")));
        }
        Ok(WaveFunction {
            basis: basis.clone(),
            amplitudes,
        })
    }

    /// Scale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(basis: &Arc<RotorBasis>, amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        Self::from_amplitudes(basis, amplitudes / Complex64::new(norm, 0.0))
    }

    pub(crate) fn from_parts(basis: Arc<RotorBasis>, amplitudes: DVector<Complex64>) -> Self {
        WaveFunction { basis, amplitudes }
    }

    pub fn basis(&self) -> &Arc<RotorBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: u32, m: i32) -> Option<Complex64> {
        self.basis.index_of(n, m).map(|i| self.amplitudes[i])
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn population(&self, n: u32, m: i32) -> f64 {
        self.amplitude(n, m).map_or(0.0, |a| a.norm_sqr())
    }

    /// Total population of each shell N.
    pub fn populations_by_level(&self) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        for (&(n, _), a) in self.basis.states().iter().zip(self.amplitudes.iter()) {
            *out.entry(n).or_insert(0.0) += a.norm_sqr();
        }
        out
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &WaveFunction) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Multiply |N, M⟩ by exp(−i·M·angle).
    pub fn rotate_z_mut(&mut self, angle: f64) {
        for (&(_, m), a) in self.basis.states().iter().zip(self.amplitudes.iter_mut()) {
            *a *= Complex64::from_polar(1.0, -f64::from(m) * angle);
        }
    }

    /// Multiply |N, M⟩ by exp(−i·2π·c·E_N·dt), dt in fs.
    pub fn free_propagate_mut(&mut self, dt: f64) -> Result<()> {
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("free propagation time must be >= 0, got {dt}")));
        }
        if dt == 0.0 {
            return Ok(());
        }
        let species = self.basis.species();
        for (&(n, _), a) in self.basis.states().iter().zip(self.amplitudes.iter_mut()) {
            let phase = -TAU * SPEED_OF_LIGHT_CM_PER_FS * species.energy_unchecked(n) * dt;
            *a *= Complex64::from_polar(1.0, phase);
        }
        Ok(())
    }
}

/// Rotate about the propagation axis: |N, M⟩ → exp(−i·M·angle)|N, M⟩.
pub fn rotate_z(psi: &WaveFunction, angle: f64) -> WaveFunction {
    let mut out = psi.clone();
    out.rotate_z_mut(angle);
    out
}

/// Field-free evolution for `dt` femtoseconds.
pub fn free_propagate(psi: &WaveFunction, dt: f64) -> Result<WaveFunction> {
    let mut out = psi.clone();
    out.free_propagate_mut(dt)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotor::basis::build_basis;
    use crate::rotor::species::{beat_period, Species};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn o2(n_max: u32) -> Arc<RotorBasis> {
        build_basis(&Species::oxygen(), n_max).unwrap()
    }

    fn superposition(basis: &Arc<RotorBasis>) -> WaveFunction {
        let amps = DVector::from_fn(basis.len(), |i, _| Complex64::new(1.0 + i as f64, 0.5 * i as f64));
        WaveFunction::normalized(basis, amps).unwrap()
    }

    #[test]
    fn rotate_by_zero_and_full_turn() {
        let b = o2(5);
        let psi = superposition(&b);
        assert_eq!(rotate_z(&psi, 0.0).amplitudes(), psi.amplitudes());
        let turned = rotate_z(&psi, 2.0 * PI);
        let diff = (turned.amplitudes() - psi.amplitudes()).camax();
        assert!(diff < 1e-14);
    }

    #[test]
    fn rotate_single_phase() {
        let b = o2(3);
        let psi = WaveFunction::basis_state(&b, 1, 1).unwrap();
        let a = rotate_z(&psi, FRAC_PI_2).amplitude(1, 1).unwrap();
        assert!((a - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn free_propagation_zero_time() {
        let b = o2(5);
        let psi = superposition(&b);
        assert_eq!(free_propagate(&psi, 0.0).unwrap().amplitudes(), psi.amplitudes());
    }

    #[test]
    fn free_propagation_rejects_negative_time() {
        let b = o2(3);
        let psi = superposition(&b);
        assert!(matches!(free_propagate(&psi, -1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn two_level_wavepacket_revives_after_beat_period() {
        let b = o2(5);
        let mut amps = DVector::zeros(b.len());
        amps[b.index_of(1, 0).unwrap()] = Complex64::new(1.0, 0.0);
        amps[b.index_of(3, 0).unwrap()] = Complex64::new(1.0, 0.0);
        let psi = WaveFunction::normalized(&b, amps).unwrap();
        let period = beat_period(b.species(), 3).unwrap();
        assert!((period - 2320.3).abs() < 0.5);
        let later = free_propagate(&psi, period).unwrap();
        assert!((psi.overlap(&later).norm() - 1.0).abs() < 1e-10);
        let half = free_propagate(&psi, 0.5 * period).unwrap();
        assert!(psi.overlap(&half).norm() < 1e-10);
    }

    #[test]
    fn stationary_state_keeps_populations() {
        let b = o2(5);
        let psi = WaveFunction::basis_state(&b, 1, 0).unwrap();
        let later = free_propagate(&psi, 1234.5).unwrap();
        assert!((later.population(1, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_amplitudes_checks_norm() {
        let b = o2(1);
        let amps = DVector::from_element(3, Complex64::new(1.0, 0.0));
        assert!(WaveFunction::from_amplitudes(&b, amps.clone()).is_err());
        assert!(WaveFunction::normalized(&b, amps).is_ok());
        assert!(WaveFunction::basis_state(&b, 2, 0).is_err());
    }
}
