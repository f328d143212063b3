// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Runtime self-check: production routines against the slow oracles, plus
//! the guards a configured run depends on.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::config::RunConfig;
use super::format::format_number;
use crate::ensemble::{epsilon_symmetry_report, scan, thermal_states, Propagator, ScanGrid, TRUNCATION_THRESHOLD};
use crate::error::{Error, Result};
use crate::oracle;
use crate::rotor::{build_basis, cos2_matrix, kick_unitary, Axis, Parity, RotorBasis, Species, WaveFunction};
use crate::train::{bessel_j, train_from_shaper, ChiralTrain};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// None for pass/fail checks without a numeric residual.
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn numeric(name: &str, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_owned(),
            residual: Some(residual),
            tolerance: Some(tolerance),
            passed: residual <= tolerance,
            detail: String::new(),
        }
    }

    fn outcome(name: &str, result: Result<String>) -> Self {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(e) => (false, e.to_string()),
        };
        Check {
            name: name.to_owned(),
            residual: None,
            tolerance: None,
            passed,
            detail,
        }
    }

    fn from_residual(name: &str, tolerance: f64, residual: Result<f64>) -> Self {
        match residual {
            Ok(r) => Check::numeric(name, r, tolerance),
            Err(e) => Check {
                tolerance: Some(tolerance),
                ..Check::outcome(name, Err(e))
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Fixed-width table, one check per line.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        writeln!(
            out,
            "{:<width$}  {:>18}  {:>18}  result",
            "check", "residual", "tolerance"
        )
        .unwrap();
        for c in &self.checks {
            let num = |v: Option<f64>| v.map_or_else(|| "-".to_owned(), |x| format!("{x:.3e}"));
            write!(
                out,
                "{:<width$}  {:>18}  {:>18}  {}",
                c.name,
                num(c.residual),
                num(c.tolerance),
                if c.passed { "pass" } else { "FAIL" }
            )
            .unwrap();
            if !c.detail.is_empty() {
                write!(out, "  ({})", c.detail).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Run every check. Checks that depend on the configured species are
/// reported as failed when the species cannot be resolved.
pub fn run_selftest(cfg: &RunConfig) -> SelftestReport {
    let mut checks = Vec::new();
    let species = cfg.resolve_species();
    checks.push(Check::outcome(
        "species registry",
        species
            .as_ref()
            .map(|s| {
                format!(
                    "{}: B = {} cm^-1, D = {} cm^-1",
                    s.name,
                    format_number(s.b),
                    format_number(s.d)
                )
            })
            .map_err(clone_error),
    ));

    checks.push(Check::from_residual(
        "cos2 elements vs quadrature (N <= 7)",
        1e-8,
        quadrature_residual(),
    ));
    checks.push(Check::from_residual(
        "Bessel J_n vs power series",
        1e-9,
        Ok(bessel_residual()),
    ));
    checks.push(Check::from_residual(
        "completeness x + y + z = 1",
        1e-12,
        completeness_residual(&Species::oxygen(), cfg.n_max),
    ));
    checks.push(Check::from_residual(
        "kick unitarity at P_total",
        1e-10,
        unitarity_residual(&Species::oxygen(), cfg.n_max, cfg.shaper.p_total),
    ));
    checks.push(Check::from_residual(
        "two-pulse train vs dense product",
        1e-12,
        dense_oracle_residual(),
    ));
    checks.push(Check::from_residual(
        "perturbative limit",
        1e-3,
        perturbative_residual(),
    ));
    checks.push(Check::from_residual(
        "thermal fractions vs partition sum",
        1e-12,
        thermal_residual(&Species::oxygen(), cfg.temperature, cfg.n_max),
    ));
    checks.push(Check::outcome(
        "truncation guard (n_max = 9, P = 7)",
        truncation_guard(),
    ));

    match &species {
        Ok(s) => {
            checks.push(Check::from_residual(
                "mirror symmetry of scan maps",
                1e-10,
                symmetry_residual(cfg, s),
            ));
            checks.push(Check::outcome(
                "configured basis sufficiency",
                basis_sufficiency(cfg, s),
            ));
        }
        Err(e) => {
            for name in ["mirror symmetry of scan maps", "configured basis sufficiency"] {
                checks.push(Check::outcome(
                    name,
                    Err(Error::invalid(format!("species unavailable: {e}"))),
                ));
            }
        }
    }
    SelftestReport { checks }
}

fn clone_error(e: &Error) -> Error {
    match e {
        Error::Config(list) => Error::Config(list.clone()),
        other => Error::invalid(other.to_string()),
    }
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Every element of the x, y and z operators for all N ≤ 7.
pub fn quadrature_residual() -> Result<f64> {
    let rotor = Species::new("rigid", 1.0, 0.0, Parity::All)?;
    let basis = build_basis(&rotor, 7)?;
    let mut worst: f64 = 0.0;
    for (axis, f) in [
        (Axis::X, oracle::cos2_in_plane(0.0)),
        (Axis::Y, oracle::cos2_in_plane(FRAC_PI_2)),
    ] {
        let reference = oracle::quadrature_operator(basis.states(), f);
        worst = worst.max(max_abs_diff(cos2_matrix(&basis, axis).matrix(), &reference));
    }
    let reference = oracle::quadrature_operator(basis.states(), |x: f64, _| x * x);
    worst = worst.max(max_abs_diff(cos2_matrix(&basis, Axis::Z).matrix(), &reference));
    Ok(worst)
}

/// Largest relative error over A ∈ {0.5, 2, 5, 10}, |n| ≤ 12, absolute
/// below 1e-12.
pub fn bessel_residual() -> f64 {
    let mut worst: f64 = 0.0;
    for x in [0.5, 2.0, 5.0, 10.0] {
        for n in -12..=12 {
            let (a, b) = (bessel_j(n, x), oracle::bessel_series(n, x));
            worst = worst.max((a - b).abs() / b.abs().max(1e-12));
        }
    }
    worst
}

pub fn completeness_residual(species: &Species, n_max: u32) -> Result<f64> {
    let basis = build_basis(species, n_max)?;
    let x = cos2_matrix(&basis, Axis::X);
    let y = x.rotated_z(FRAC_PI_2);
    let z = cos2_matrix(&basis, Axis::Z);
    let sum = x.matrix() + y.matrix() + z.matrix();
    let id = DMatrix::<Complex64>::identity(basis.len(), basis.len());
    Ok(max_abs_diff(&sum, &id))
}

pub fn unitarity_residual(species: &Species, n_max: u32, p: f64) -> Result<f64> {
    let basis = build_basis(species, n_max)?;
    let x = cos2_matrix(&basis, Axis::X);
    Ok(kick_unitary(&x, p)?
        .unitarity_residual()
        .max(kick_unitary(&x.rotated_z(FRAC_PI_4), p)?.unitarity_residual()))
}

/// Two kicks with a rotated second polarization, propagated both ways from
/// a superposition of several M states.
pub fn dense_oracle_residual() -> Result<f64> {
    let species = Species::oxygen();
    let basis = build_basis(&species, 5)?;
    let train = ChiralTrain::uniform(700.0, 0.6, &[0.8, 1.3])?;
    let psi0 = probe_state(&basis)?;
    let out = Propagator::new(&basis)?.evolve(&psi0, &train)?;
    let pulses: Vec<(f64, f64, f64)> = train
        .pulses()
        .iter()
        .map(|p| (p.time, p.kick_strength, p.pol_angle))
        .collect();
    let reference = oracle::dense_train_propagation(&species, basis.states(), psi0.amplitudes(), &pulses);
    Ok(out
        .amplitudes()
        .iter()
        .zip(reference.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

fn probe_state(basis: &Arc<RotorBasis>) -> Result<WaveFunction> {
    let amps = DVector::from_fn(basis.len(), |i, _| {
        let (n, m) = basis.state(i);
        if n <= 3 {
            Complex64::new(1.0 + 0.1 * f64::from(m), 0.3 * f64::from(n) - 0.2 * f64::from(m))
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    WaveFunction::normalized(basis, amps)
}

/// Single weak kick on |1, 0⟩: population of N = 3 against P²|⟨3 0|cos²|1 0⟩|².
pub fn perturbative_residual() -> Result<f64> {
    let p = 1e-3;
    let basis = build_basis(&Species::oxygen(), 9)?;
    let psi0 = WaveFunction::basis_state(&basis, 1, 0)?;
    let out = Propagator::new(&basis)?.propagate_train(&psi0, &ChiralTrain::uniform(1.0, 0.0, &[p])?)?;
    let x = cos2_matrix(&basis, Axis::X);
    let (i, j) = (basis.index_of(3, 0).unwrap(), basis.index_of(1, 0).unwrap());
    let (im2, ip2) = (basis.index_of(3, -2).unwrap(), basis.index_of(3, 2).unwrap());
    let predicted = p * p * (x.element(i, j).norm_sqr() + x.element(im2, j).norm_sqr() + x.element(ip2, j).norm_sqr());
    let actual = out.populations_by_level()[&3];
    Ok((actual / predicted - 1.0).abs())
}

pub fn thermal_residual(species: &Species, temperature: f64, n_max: u32) -> Result<f64> {
    let basis = build_basis(species, n_max)?;
    let fractions = thermal_states(&basis, temperature, 0.0)?.level_fractions();
    let reference = oracle::boltzmann_fractions(species, temperature, basis.n_max());
    Ok(reference
        .iter()
        .map(|(n, f)| (fractions.get(n).copied().unwrap_or(0.0) - f).abs())
        .fold(0.0, f64::max))
}

/// A deliberately small basis must be rejected rather than give numbers.
fn truncation_guard() -> Result<String> {
    let basis = build_basis(&Species::oxygen(), 9)?;
    let ensemble = thermal_states(&basis, 8.0, crate::ensemble::DEFAULT_THERMAL_FLOOR)?;
    let train = train_from_shaper(2.0, 1000.0, FRAC_PI_4, 7.0, 0.99)?;
    match Propagator::new(&basis)?.ensemble_observables(&ensemble, &train, 3, 0.0) {
        Err(Error::BasisTooSmall { population, .. }) => Ok(format!("rejected, top-shell population {population:.2e}")),
        Err(e) => Err(e),
        Ok(_) => Err(Error::invalid(format!(
            "n_max = 9 at P = 7 was accepted; the top-shell threshold {TRUNCATION_THRESHOLD:.0e} is not enforced"
        ))),
    }
}

/// Configured physics on a 3 × 5 grid spanning δ ∈ [0, π].
fn symmetry_residual(cfg: &RunConfig, species: &Species) -> Result<f64> {
    let mut grid: ScanGrid = cfg.scan_grid(species.clone());
    grid.tau_values = vec![cfg.shaper.tau, 0.5 * cfg.shaper.tau + 700.0, 2.0 * cfg.shaper.tau];
    grid.tau_values.sort_by(f64::total_cmp);
    grid.tau_values.dedup();
    grid.delta_values = crate::ensemble::linspace(0.0, PI, 5);
    let report = epsilon_symmetry_report(&scan(&grid)?)?;
    Ok(report
        .epsilon_antisymmetry
        .max(report.signal_mirror)
        .max(report.epsilon_on_symmetry_lines))
}

/// One ensemble cell with the configured basis and train.
fn basis_sufficiency(cfg: &RunConfig, species: &Species) -> Result<String> {
    let basis = build_basis(species, cfg.n_max)?;
    let ensemble = thermal_states(&basis, cfg.temperature, cfg.thermal_floor)?;
    let s = &cfg.shaper;
    let train = train_from_shaper(s.amplitude, s.tau, cfg.delta_rad(), s.p_total, s.coverage)?;
    let obs = Propagator::new(&basis)?.ensemble_observables(&ensemble, &train, cfg.target_n, cfg.signal_floor)?;
    Ok(format!(
        "n_max {} holds {} members through {} pulses, S = {}",
        basis.n_max(),
        ensemble.len(),
        train.len(),
        format_number(obs.s_total)
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_configuration_passes() {
        let report = run_selftest(&RunConfig::default());
        assert!(report.passed(), "\n{}", report.table());
        assert_eq!(report.checks.len(), 11);
    }

    #[test]
    fn small_basis_fails_sufficiency() {
        let cfg = RunConfig {
            n_max: 9,
            ..RunConfig::default()
        };
        let report = run_selftest(&cfg);
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"configured basis sufficiency"), "{failed:?}");
        let detail = &report
            .failures()
            .find(|c| c.name == "configured basis sufficiency")
            .unwrap()
            .detail;
        assert!(detail.contains("basis too small"), "{detail}");
    }
}
