// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::constants::HC_OVER_KB_CM_K;
use crate::error::{Error, Result};
use crate::rotor::RotorBasis;

/// Members whose weight relative to the most populated member falls below
/// this are dropped.
pub const DEFAULT_THERMAL_FLOOR: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleMember {
    pub n: u32,
    pub m: i32,
    /// Position of |N, M⟩ in the basis.
    pub index: usize,
    pub weight: f64,
}

/// Incoherent mixture of basis states with Boltzmann weights.
#[derive(Clone, Debug)]
pub struct ThermalEnsemble {
    basis: Arc<RotorBasis>,
    members: Vec<EnsembleMember>,
    temperature: f64,
    floor: f64,
}

impl ThermalEnsemble {
    pub fn basis(&self) -> &Arc<RotorBasis> {
        &self.basis
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Population fraction of each initial shell N.
    pub fn level_fractions(&self) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        for m in &self.members {
            *out.entry(m.n).or_insert(0.0) += m.weight;
        }
        out
    }
}

/// Boltzmann ensemble over the basis at temperature `temperature` (K).
///
/// Weights are ∝ exp(−E_N·hc/k_B·T), equal for all M of a shell. Members
/// with weight below `floor` relative to the heaviest member are dropped
/// and the rest renormalized.
pub fn thermal_states(basis: &Arc<RotorBasis>, temperature: f64, floor: f64) -> Result<ThermalEnsemble> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::invalid(format!("temperature must be > 0 K, got {temperature}")));
    }
    if !(0.0..1.0).contains(&floor) {
        return Err(Error::invalid(format!("thermal floor must be in [0, 1), got {floor}")));
    }
    let energies = basis.energies();
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut members: Vec<EnsembleMember> = basis
        .states()
        .iter()
        .zip(&energies)
        .enumerate()
        .filter_map(|(index, (&(n, m), &e))| {
            let relative = (-(e - e_min) * HC_OVER_KB_CM_K / temperature).exp();
            (relative > 0.0 && relative >= floor).then_some(EnsembleMember {
                n,
                m,
                index,
                weight: relative,
            })
        })
        .collect();
    if members.is_empty() {
        return Err(Error::invalid("thermal ensemble is empty after applying the floor"));
    }
    let total: f64 = members.iter().map(|m| m.weight).sum();
    for m in &mut members {
        m.weight /= total;
    }
    Ok(ThermalEnsemble {
        basis: basis.clone(),
        members,
        temperature,
        floor,
    })
}
