// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::scan::ScanResult;
use crate::error::{Error, Result};

const AXIS_TOL: f64 = 1e-9;

/// Mirror-symmetry residuals of a scan over δ ∈ [0, π].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    /// max |ε(τ, δ) + ε(τ, π − δ)| over cells where both are defined.
    pub epsilon_antisymmetry: f64,
    /// max |S(τ, δ) − S(τ, π − δ)|.
    pub signal_mirror: f64,
    /// max |ε| on the δ = 0, π/2 and π columns present in the grid.
    pub epsilon_on_symmetry_lines: f64,
    /// Which of δ = 0, π/2, π are grid columns.
    pub symmetry_columns: Vec<f64>,
}

pub fn epsilon_symmetry_report(result: &ScanResult) -> Result<SymmetryReport> {
    let deltas = &result.grid.delta_values;
    let n = deltas.len();
    for j in 0..n {
        if (deltas[j] + deltas[n - 1 - j] - PI).abs() > AXIS_TOL {
            return Err(Error::invalid(format!(
                "delta axis is not symmetric about pi/2: {} and {} do not sum to pi",
                deltas[j],
                deltas[n - 1 - j]
            )));
        }
    }

    let mut report = SymmetryReport {
        epsilon_antisymmetry: 0.0,
        signal_mirror: 0.0,
        epsilon_on_symmetry_lines: 0.0,
        symmetry_columns: Vec::new(),
    };
    let line_columns: Vec<usize> = (0..n)
        .filter(|&j| [0.0, FRAC_PI_2, PI].iter().any(|l| (deltas[j] - l).abs() < AXIS_TOL))
        .collect();
    report.symmetry_columns = line_columns.iter().map(|&j| deltas[j]).collect();

    for i in 0..result.s_map.rows() {
        for j in 0..n {
            let mirror = n - 1 - j;
            let ds = (result.s_map.get(i, j) - result.s_map.get(i, mirror)).abs();
            report.signal_mirror = report.signal_mirror.max(ds);
            if let (Some(a), Some(b)) = (result.epsilon_map.get(i, j), result.epsilon_map.get(i, mirror)) {
                report.epsilon_antisymmetry = report.epsilon_antisymmetry.max((a + b).abs());
            }
        }
        for &j in &line_columns {
            if let Some(e) = result.epsilon_map.get(i, j) {
                report.epsilon_on_symmetry_lines = report.epsilon_on_symmetry_lines.max(e.abs());
            }
        }
    }
    Ok(report)
}
