// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::Serialize;

use super::propagate::Propagator;
use super::thermal::ThermalEnsemble;
use crate::error::{Error, Result};
use crate::train::ChiralTrain;

/// Below this target-level population the directionality is undefined.
pub const DEFAULT_SIGNAL_FLOOR: f64 = 1e-6;

/// Ensemble-averaged populations after a train.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Observables {
    pub target_n: u32,
    pub pop_by_n: BTreeMap<u32, f64>,
    /// Population of the target level with M > 0, plus half of M = 0.
    pub q_left: f64,
    /// Population of the target level with M < 0, plus half of M = 0.
    pub q_right: f64,
    pub s_total: f64,
    /// (q_left − q_right)/s_total; `None` when s_total is below the floor.
    pub epsilon: Option<f64>,
}

impl Propagator {
    /// Propagate every ensemble member and accumulate weighted populations.
    pub fn ensemble_observables(
        &self,
        ensemble: &ThermalEnsemble,
        train: &ChiralTrain,
        target_n: u32,
        signal_floor: f64,
    ) -> Result<Observables> {
        let basis = self.basis();
        if ensemble.basis().id() != basis.id() {
            return Err(Error::invalid("ensemble belongs to a different basis"));
        }
        if !basis.contains_level(target_n) {
            return Err(Error::invalid(format!(
                "target N = {target_n} is not a level of the basis (n_max {})",
                basis.n_max()
            )));
        }
        let top = basis.top_two_shells_start();

        // group members by block, keeping ensemble order inside each group
        let mut groups: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
        for member in ensemble.members() {
            let (block, row) = self.locate(member.index);
            groups.entry(block).or_default().push((row, member.weight));
        }

        let mut level_pop: BTreeMap<u32, f64> = basis.levels().map(|n| (n, 0.0)).collect();
        let (mut positive, mut negative, mut zero) = (0.0, 0.0, 0.0);
        for (block, members) in groups {
            let rows: Vec<usize> = members.iter().map(|&(r, _)| r).collect();
            let mut batch = self.basis_batch(block, &rows);
            self.evolve_batch(&mut batch, train);
            let indices = self.block_indices(block);
            for (col, &(_, weight)) in members.iter().enumerate() {
                let mut leaked = 0.0;
                for (row, &i) in indices.iter().enumerate() {
                    let p = batch.population(row, col);
                    let (n, m) = basis.state(i);
                    if n >= top {
                        leaked += p;
                    }
                    *level_pop.get_mut(&n).expect("level present") += weight * p;
                    if n == target_n {
                        match m.signum() {
                            1 => positive += weight * p,
                            -1 => negative += weight * p,
                            _ => zero += weight * p,
                        }
                    }
                }
                self.check_leak(leaked)?;
            }
        }

        let q_left = positive + 0.5 * zero;
        let q_right = negative + 0.5 * zero;
        let s_total = q_left + q_right;
        let epsilon = (s_total >= signal_floor).then(|| (q_left - q_right) / s_total);
        Ok(Observables {
            target_n,
            pop_by_n: level_pop,
            q_left,
            q_right,
            s_total,
            epsilon,
        })
    }
}

/// Thermally averaged observables of `target_n` after `train`.
pub fn ensemble_observables(ensemble: &ThermalEnsemble, train: &ChiralTrain, target_n: u32) -> Result<Observables> {
    Propagator::new(ensemble.basis())?.ensemble_observables(ensemble, train, target_n, DEFAULT_SIGNAL_FLOOR)
}
