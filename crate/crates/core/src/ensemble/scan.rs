// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::observables::{Observables, DEFAULT_SIGNAL_FLOOR};
use super::propagate::Propagator;
use super::thermal::{thermal_states, DEFAULT_THERMAL_FLOOR};
use crate::error::{Error, Result};
use crate::rotor::{build_basis, Species};
use crate::train::train_from_shaper;

/// Axes and fixed parameters of a (τ, δ) scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub species: Species,
    /// Train periods, fs, strictly increasing.
    pub tau_values: Vec<f64>,
    /// Polarization steps, rad.
    pub delta_values: Vec<f64>,
    pub amplitude: f64,
    pub p_total: f64,
    pub coverage: f64,
    /// K.
    pub temperature: f64,
    pub target_n: u32,
    pub n_max: u32,
    pub thermal_floor: f64,
    pub signal_floor: f64,
}

/// `count` evenly spaced values from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (count - 1) as f64;
            (0..count)
                .map(|k| if k == count - 1 { end } else { start + k as f64 * step })
                .collect()
        }
    }
}

impl ScanGrid {
    /// τ ∈ [200, 5000] fs in 97 steps, δ ∈ [0, π] in 65 steps, A = 2,
    /// P = 7, 8 K.
    pub fn default_for(species: Species, target_n: u32) -> Self {
        ScanGrid {
            species,
            tau_values: linspace(200.0, 5000.0, 97),
            delta_values: linspace(0.0, PI, 65),
            amplitude: 2.0,
            p_total: 7.0,
            coverage: 0.99,
            temperature: 8.0,
            target_n,
            n_max: 29,
            thermal_floor: DEFAULT_THERMAL_FLOOR,
            signal_floor: DEFAULT_SIGNAL_FLOOR,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.species.validate()?;
        if self.tau_values.is_empty() || self.delta_values.is_empty() {
            return Err(Error::invalid("scan axes must not be empty"));
        }
        if self.tau_values.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::invalid("tau values must be finite and > 0"));
        }
        if self.tau_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("tau values must be strictly increasing"));
        }
        if self.delta_values.iter().any(|d| !d.is_finite()) {
            return Err(Error::invalid("delta values must be finite"));
        }
        if self.signal_floor.is_nan() || self.signal_floor < 0.0 {
            return Err(Error::invalid("signal floor must be >= 0"));
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.tau_values.len() * self.delta_values.len()
    }
}

/// Row-major matrix indexed by (τ index, δ index).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Map2<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy> Map2<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len());
        Map2 { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanMetadata {
    pub version: String,
    pub basis_size: usize,
    pub ensemble_size: usize,
    pub pulses_per_train: usize,
    pub workers: usize,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub grid: ScanGrid,
    pub s_map: Map2<f64>,
    pub epsilon_map: Map2<Option<f64>>,
    pub metadata: ScanMetadata,
}

impl ScanResult {
    /// (τ index, δ index) of the largest S.
    pub fn peak_signal(&self) -> (usize, usize) {
        let k =
            self.s_map.as_slice().iter().enumerate().fold(
                0,
                |best, (k, v)| if *v > self.s_map.as_slice()[best] { k } else { best },
            );
        (k / self.s_map.cols(), k % self.s_map.cols())
    }

    /// (τ index, δ index) of the largest |ε|, if any cell is defined.
    pub fn peak_directionality(&self) -> Option<(usize, usize)> {
        let cols = self.epsilon_map.cols();
        self.epsilon_map
            .as_slice()
            .iter()
            .enumerate()
            .filter_map(|(k, e)| e.map(|v| (k, v.abs())))
            .fold(None, |best: Option<(usize, f64)>, (k, v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((k, v)),
            })
            .map(|(k, _)| (k / cols, k % cols))
    }
}

/// Called with (cells done, cells total) as a scan progresses.
pub type Progress<'a> = &'a (dyn Fn(usize, usize) + Sync);

/// Scan on the global rayon pool.
pub fn scan(grid: &ScanGrid) -> Result<ScanResult> {
    scan_impl(grid, None, None)
}

/// Scan on a dedicated pool of `workers` threads (0 = one per core).
pub fn scan_with_workers(grid: &ScanGrid, workers: usize) -> Result<ScanResult> {
    scan_with_progress(grid, workers, None)
}

pub fn scan_with_progress(grid: &ScanGrid, workers: usize, progress: Option<Progress<'_>>) -> Result<ScanResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start {workers} workers: {e}")))?;
    scan_impl(grid, Some(&pool), progress)
}

type CellOutcome = Result<(f64, Option<f64>)>;

fn scan_impl(grid: &ScanGrid, pool: Option<&rayon::ThreadPool>, progress: Option<Progress<'_>>) -> Result<ScanResult> {
    grid.validate()?;
    let started = Instant::now();
    let basis = build_basis(&grid.species, grid.n_max)?;
    if !basis.contains_level(grid.target_n) {
        return Err(Error::invalid(format!(
            "target N = {} is not a level of {} up to n_max {}",
            grid.target_n,
            grid.species.name,
            basis.n_max()
        )));
    }
    let ensemble = thermal_states(&basis, grid.temperature, grid.thermal_floor)?;
    let propagator = Propagator::new(&basis)?;

    // A and coverage are fixed, so every cell uses the same kick strengths.
    let template = train_from_shaper(grid.amplitude, grid.tau_values[0], 0.0, grid.p_total, grid.coverage)?;
    propagator.prepare(&template);

    let n_delta = grid.delta_values.len();
    let cell = |k: usize| -> CellOutcome {
        let (tau, delta) = (grid.tau_values[k / n_delta], grid.delta_values[k % n_delta]);
        let train = train_from_shaper(grid.amplitude, tau, delta, grid.p_total, grid.coverage)?;
        let obs: Observables = propagator.ensemble_observables(&ensemble, &train, grid.target_n, grid.signal_floor)?;
        Ok((obs.s_total, obs.epsilon))
    };
    let total = grid.cell_count();
    let done = AtomicUsize::new(0);
    let work = || -> Vec<CellOutcome> {
        (0..total)
            .into_par_iter()
            .map(|k| {
                let outcome = cell(k);
                if let Some(report) = progress {
                    report(done.fetch_add(1, Ordering::Relaxed) + 1, total);
                }
                outcome
            })
            .collect()
    };
    let (outcomes, workers) = match pool {
        Some(pool) => (pool.install(work), pool.current_num_threads()),
        None => (work(), rayon::current_num_threads()),
    };

    let mut s = Vec::with_capacity(outcomes.len());
    let mut eps = Vec::with_capacity(outcomes.len());
    for (k, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok((sv, ev)) => {
                s.push(sv);
                eps.push(ev);
            }
            Err(e) => {
                return Err(Error::ScanCell {
                    tau: grid.tau_values[k / n_delta],
                    delta: grid.delta_values[k % n_delta],
                    source: Box::new(e),
                })
            }
        }
    }
    let rows = grid.tau_values.len();
    Ok(ScanResult {
        grid: grid.clone(),
        s_map: Map2::from_vec(rows, n_delta, s),
        epsilon_map: Map2::from_vec(rows, n_delta, eps),
        metadata: ScanMetadata {
            version: crate::VERSION.to_owned(),
            basis_size: basis.len(),
            ensemble_size: ensemble.len(),
            pulses_per_train: template.len(),
            workers,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::observables::ensemble_observables;

    #[test]
    fn linspace_endpoints() {
        let v = linspace(200.0, 5000.0, 97);
        assert_eq!(v.len(), 97);
        assert_eq!(v[0], 200.0);
        assert_eq!(v[96], 5000.0);
        assert!((v[1] - 250.0).abs() < 1e-12);
        let d = linspace(0.0, PI, 65);
        assert_eq!(d[64], PI);
        assert!((d[32] - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_cell_matches_direct_call() {
        let mut grid = ScanGrid::default_for(Species::oxygen(), 3);
        grid.tau_values = vec![1500.0];
        grid.delta_values = vec![0.7];
        let result = scan_with_workers(&grid, 2).unwrap();
        let basis = build_basis(&grid.species, grid.n_max).unwrap();
        let ensemble = thermal_states(&basis, 8.0, DEFAULT_THERMAL_FLOOR).unwrap();
        let train = train_from_shaper(2.0, 1500.0, 0.7, 7.0, 0.99).unwrap();
        let obs = ensemble_observables(&ensemble, &train, 3).unwrap();
        assert_eq!(result.s_map.get(0, 0), obs.s_total);
        assert_eq!(result.epsilon_map.get(0, 0), obs.epsilon);
    }

    #[test]
    fn failing_cell_reports_coordinates() {
        let mut grid = ScanGrid::default_for(Species::oxygen(), 3);
        grid.n_max = 9;
        grid.tau_values = vec![800.0, 900.0];
        grid.delta_values = vec![0.0];
        match scan_with_workers(&grid, 1) {
            Err(Error::ScanCell { tau, delta, source }) => {
                assert_eq!((tau, delta), (800.0, 0.0));
                assert!(matches!(*source, Error::BasisTooSmall { .. }));
            }
            other => panic!("expected a cell error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_grids() {
        let mut grid = ScanGrid::default_for(Species::oxygen(), 3);
        grid.tau_values = vec![300.0, 200.0];
        assert!(scan(&grid).is_err());
        let mut grid = ScanGrid::default_for(Species::oxygen(), 4);
        grid.tau_values = vec![300.0];
        assert!(scan(&grid).is_err());
    }
}
