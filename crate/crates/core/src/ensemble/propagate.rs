// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::constants::SPEED_OF_LIGHT_CM_PER_FS;
use crate::error::{Error, Result};
use crate::rotor::{cos2_matrix_x, KickCache, RotorBasis, WaveFunction};
use crate::train::ChiralTrain;

/// Largest population tolerated in the two highest shells of the basis.
pub const TRUNCATION_THRESHOLD: f64 = 1e-6;

/// Propagates rotor states through kick trains on one basis.
///
/// Holds the x-polarized kick operator's spectrum and a cache of kick
/// unitaries. A pulse polarized at φ acts as R(φ)·U_x·R(−φ) with
/// R(φ) = exp(−i·L_z·φ), so one spectrum serves every polarization.
///
/// States are propagated in column batches, one batch per invariant block of
/// the kick operator.
#[derive(Debug)]
pub struct Propagator {
    basis: Arc<RotorBasis>,
    cache: KickCache,
    blocks: Vec<Block>,
}

#[derive(Debug)]
struct Block {
    indices: Vec<usize>,
    m: Vec<f64>,
    /// 2π·c·E_N for each row, rad/fs.
    angular_frequency: Vec<f64>,
}

/// Column batch of states restricted to one block.
pub(crate) struct SectorBatch {
    pub(crate) block: usize,
    pub(crate) re: DMatrix<f64>,
    pub(crate) im: DMatrix<f64>,
}

impl SectorBatch {
    pub(crate) fn population(&self, row: usize, col: usize) -> f64 {
        let (a, b) = (self.re[(row, col)], self.im[(row, col)]);
        a * a + b * b
    }
}

fn apply_row_phases(batch: &mut SectorBatch, phases: &[f64]) {
    let cols = batch.re.ncols();
    for (r, &theta) in phases.iter().enumerate() {
        if theta == 0.0 {
            continue;
        }
        let (s, c) = theta.sin_cos();
        for col in 0..cols {
            let (a, b) = (batch.re[(r, col)], batch.im[(r, col)]);
            batch.re[(r, col)] = a * c - b * s;
            batch.im[(r, col)] = a * s + b * c;
        }
    }
}

impl Propagator {
    pub fn new(basis: &Arc<RotorBasis>) -> Result<Self> {
        let cache = KickCache::new(&cos2_matrix_x(basis))?;
        let energies = basis.energies();
        let blocks = cache
            .spectrum()
            .block_indices()
            .map(|indices| Block {
                indices: indices.to_vec(),
                m: indices.iter().map(|&i| f64::from(basis.state(i).1)).collect(),
                angular_frequency: indices
                    .iter()
                    .map(|&i| TAU * SPEED_OF_LIGHT_CM_PER_FS * energies[i])
                    .collect(),
            })
            .collect();
        Ok(Propagator {
            basis: basis.clone(),
            cache,
            blocks,
        })
    }

    pub fn basis(&self) -> &Arc<RotorBasis> {
        &self.basis
    }

    pub fn cache(&self) -> &KickCache {
        &self.cache
    }

    /// Compute the kick unitaries a train needs so later lookups only read.
    pub fn prepare(&self, train: &ChiralTrain) {
        self.cache.prepare(train.distinct_strengths());
    }

    /// Block containing basis index `index`, with its row inside the block.
    pub(crate) fn locate(&self, index: usize) -> (usize, usize) {
        for (b, block) in self.blocks.iter().enumerate() {
            if let Ok(row) = block.indices.binary_search(&index) {
                return (b, row);
            }
        }
        unreachable!("every basis index lies in one block")
    }

    pub(crate) fn block_indices(&self, block: usize) -> &[usize] {
        &self.blocks[block].indices
    }

    /// Batch of basis states, all lying in `block`, given by their rows.
    pub(crate) fn basis_batch(&self, block: usize, rows: &[usize]) -> SectorBatch {
        let dim = self.blocks[block].indices.len();
        let mut re = DMatrix::zeros(dim, rows.len());
        for (col, &row) in rows.iter().enumerate() {
            re[(row, col)] = 1.0;
        }
        SectorBatch {
            block,
            re,
            im: DMatrix::zeros(dim, rows.len()),
        }
    }

    /// Apply the train in time order. The batch is taken to be the state at
    /// the arrival time of the first pulse.
    pub(crate) fn evolve_batch(&self, batch: &mut SectorBatch, train: &ChiralTrain) {
        let block = &self.blocks[batch.block];
        let dim = block.indices.len();
        let cols = batch.re.ncols();
        let mut next_re = DMatrix::zeros(dim, cols);
        let mut next_im = DMatrix::zeros(dim, cols);
        let mut phases = vec![0.0; dim];
        let mut clock = train.pulses().first().map_or(0.0, |p| p.time);

        for pulse in train.pulses() {
            let dt = pulse.time - clock;
            clock = pulse.time;
            // free evolution, then R(−φ)
            for (theta, (&w, &m)) in phases.iter_mut().zip(block.angular_frequency.iter().zip(&block.m)) {
                *theta = -w * dt + m * pulse.pol_angle;
            }
            apply_row_phases(batch, &phases);

            if pulse.kick_strength != 0.0 {
                let unitary = self.cache.get(pulse.kick_strength);
                let u = &unitary[batch.block];
                next_re.gemm(1.0, &u.re, &batch.re, 0.0);
                next_re.gemm(-1.0, &u.im, &batch.im, 1.0);
                next_im.gemm(1.0, &u.re, &batch.im, 0.0);
                next_im.gemm(1.0, &u.im, &batch.re, 1.0);
                std::mem::swap(&mut batch.re, &mut next_re);
                std::mem::swap(&mut batch.im, &mut next_im);
            }

            // R(+φ)
            for (theta, &m) in phases.iter_mut().zip(&block.m) {
                *theta = -m * pulse.pol_angle;
            }
            apply_row_phases(batch, &phases);
        }
    }

    /// Propagate without the truncation check.
    pub fn evolve(&self, psi: &WaveFunction, train: &ChiralTrain) -> Result<WaveFunction> {
        if psi.basis().id() != self.basis.id() {
            return Err(Error::invalid("wavefunction belongs to a different basis"));
        }
        let mut out = DVector::<Complex64>::zeros(self.basis.len());
        for (b, block) in self.blocks.iter().enumerate() {
            let dim = block.indices.len();
            let mut batch = SectorBatch {
                block: b,
                re: DMatrix::from_fn(dim, 1, |r, _| psi.amplitudes()[block.indices[r]].re),
                im: DMatrix::from_fn(dim, 1, |r, _| psi.amplitudes()[block.indices[r]].im),
            };
            if batch.re.iter().chain(batch.im.iter()).all(|&x| x == 0.0) {
                continue;
            }
            self.evolve_batch(&mut batch, train);
            for (r, &i) in block.indices.iter().enumerate() {
                out[i] = Complex64::new(batch.re[(r, 0)], batch.im[(r, 0)]);
            }
        }
        Ok(WaveFunction::from_parts(self.basis.clone(), out))
    }

    /// Propagate and enforce the truncation rule on the result.
    pub fn propagate_train(&self, psi: &WaveFunction, train: &ChiralTrain) -> Result<WaveFunction> {
        let out = self.evolve(psi, train)?;
        let top = self.basis.top_two_shells_start();
        let leaked: f64 = self
            .basis
            .states()
            .iter()
            .zip(out.amplitudes().iter())
            .filter(|(&(n, _), _)| n >= top)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        self.check_leak(leaked)?;
        Ok(out)
    }

    pub(crate) fn check_leak(&self, leaked: f64) -> Result<()> {
        if leaked < TRUNCATION_THRESHOLD {
            Ok(())
        } else {
            Err(Error::BasisTooSmall {
                population: leaked,
                threshold: TRUNCATION_THRESHOLD,
                lowest_top_shell: self.basis.top_two_shells_start(),
                n_max: self.basis.n_max(),
            })
        }
    }
}

/// Propagate `psi0` through `train`, checking the truncation rule.
///
/// Builds a throwaway [`Propagator`]; reuse one for repeated calls.
pub fn propagate_train(psi0: &WaveFunction, train: &ChiralTrain) -> Result<WaveFunction> {
    Propagator::new(psi0.basis())?.propagate_train(psi0, train)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotor::{beat_period, build_basis, Species};

    fn o2(n_max: u32) -> Arc<RotorBasis> {
        build_basis(&Species::oxygen(), n_max).unwrap()
    }

    #[test]
    fn empty_train_leaves_state_unchanged() {
        let b = o2(9);
        let psi = WaveFunction::basis_state(&b, 3, 1).unwrap();
        let train = ChiralTrain::empty(1000.0, 0.3).unwrap();
        let out = propagate_train(&psi, &train).unwrap();
        assert_eq!(out.amplitudes(), psi.amplitudes());
    }

    #[test]
    fn single_kick_selection_rules() {
        let b = o2(29);
        let psi = WaveFunction::basis_state(&b, 1, 0).unwrap();
        let train = ChiralTrain::uniform(1000.0, 0.0, &[7.0]).unwrap();
        let out = propagate_train(&psi, &train).unwrap();
        assert!((out.norm_squared() - 1.0).abs() < 1e-9);
        for (&(n, m), a) in b.states().iter().zip(out.amplitudes().iter()) {
            assert_eq!(n % 2, 1);
            if m % 2 != 0 {
                assert_eq!(*a, Complex64::new(0.0, 0.0), "|{n},{m}⟩");
            }
        }
        assert!(out.population(3, 2) > 1e-3);
        assert!(out.population(3, 0) > 1e-3);
    }

    #[test]
    fn resonant_spacing_beats_half_period() {
        let b = o2(15);
        let psi = WaveFunction::basis_state(&b, 1, 0).unwrap();
        let period = beat_period(b.species(), 3).unwrap();
        let pop3 = |tau: f64| {
            let train = ChiralTrain::uniform(tau, 0.0, &[1.0, 1.0]).unwrap();
            let out = propagate_train(&psi, &train).unwrap();
            out.populations_by_level()[&3]
        };
        let resonant = pop3(period);
        let off = pop3(0.5 * period);
        assert!(resonant > off, "{resonant} vs {off}");
        assert!(resonant > 2.0 * off);
    }

    #[test]
    fn small_basis_trips_truncation_rule() {
        let b = o2(9);
        let psi = WaveFunction::basis_state(&b, 1, 0).unwrap();
        let train = ChiralTrain::uniform(1000.0, 0.0, &[7.0]).unwrap();
        match propagate_train(&psi, &train) {
            Err(Error::BasisTooSmall {
                population,
                lowest_top_shell,
                ..
            }) => {
                assert!(population > TRUNCATION_THRESHOLD);
                assert_eq!(lowest_top_shell, 7);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn foreign_basis_rejected() {
        let a = o2(5);
        let b = o2(5);
        let prop = Propagator::new(&a).unwrap();
        let psi = WaveFunction::basis_state(&b, 1, 0).unwrap();
        let train = ChiralTrain::empty(100.0, 0.0).unwrap();
        assert!(prop.evolve(&psi, &train).is_err());
    }
}
