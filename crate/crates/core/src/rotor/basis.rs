// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::species::Species;
use crate::error::{Error, Result};

static NEXT_BASIS_ID: AtomicU64 = AtomicU64::new(1);

/// Truncated set of rotor states |N, M⟩, ordered lexicographically in (N, M).
#[derive(Debug)]
pub struct RotorBasis {
    id: u64,
    species: Species,
    n_max: u32,
    states: Vec<(u32, i32)>,
    /// Index of |N, −N⟩ for every N ≤ n_max; `None` for disallowed N.
    shell_offsets: Vec<Option<usize>>,
}

/// Enumerate all allowed |N, M⟩ with N ≤ n_max.
///
/// An `n_max` of the wrong parity is rounded down to the nearest allowed level.
pub fn build_basis(species: &Species, n_max: u32) -> Result<Arc<RotorBasis>> {
    species.validate()?;
    if n_max < 1 || n_max < species.parity.lowest() {
        return Err(Error::invalid(format!(
            "n_max = {n_max} is below the smallest usable level for {}",
            species.name
        )));
    }
    let n_max = (0..=n_max)
        .rev()
        .find(|&n| species.parity.allows(n))
        .expect("n_max >= lowest allowed level");

    let mut states = Vec::new();
    let mut shell_offsets = vec![None; n_max as usize + 1];
    for n in (0..=n_max).filter(|&n| species.parity.allows(n)) {
        shell_offsets[n as usize] = Some(states.len());
        let n_i = n as i32;
        states.extend((-n_i..=n_i).map(|m| (n, m)));
    }
    Ok(Arc::new(RotorBasis {
        id: NEXT_BASIS_ID.fetch_add(1, Ordering::Relaxed),
        species: species.clone(),
        n_max,
        states,
        shell_offsets,
    }))
}

impl RotorBasis {
    /// Process-unique identity, used to key cached unitaries.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn species(&self) -> &Species {
        &self.species
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[(u32, i32)] {
        &self.states
    }

    pub fn state(&self, index: usize) -> (u32, i32) {
        self.states[index]
    }

    pub fn index_of(&self, n: u32, m: i32) -> Option<usize> {
        if m.unsigned_abs() > n {
            return None;
        }
        let offset = (*self.shell_offsets.get(n as usize)?)?;
        Some(offset + (m + n as i32) as usize)
    }

    pub fn contains_level(&self, n: u32) -> bool {
        n <= self.n_max && self.species.parity.allows(n)
    }

    /// Allowed N values in ascending order.
    pub fn levels(&self) -> impl Iterator<Item = u32> + '_ {
        (0..=self.n_max).filter(move |&n| self.species.parity.allows(n))
    }

    /// Index range of the 2N+1 states of shell N.
    pub fn shell_range(&self, n: u32) -> Option<std::ops::Range<usize>> {
        let offset = (*self.shell_offsets.get(n as usize)?)?;
        Some(offset..offset + 2 * n as usize + 1)
    }

    /// Lowest N of the two highest shells, used by the truncation check.
    pub fn top_two_shells_start(&self) -> u32 {
        let levels: Vec<u32> = self.levels().collect();
        levels[levels.len().saturating_sub(2)]
    }

    /// Field-free energy of every state, cm⁻¹.
    pub fn energies(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|&(n, _)| self.species.energy_unchecked(n))
            .collect()
    }
}
