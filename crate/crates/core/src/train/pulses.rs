// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bessel::bessel_j_sequence;
use crate::error::{Error, Result};

/// One instantaneous kick.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    /// Arrival time, fs.
    pub time: f64,
    /// Dimensionless kick strength P.
    pub kick_strength: f64,
    /// Linear polarization angle in the lab x–y plane, rad.
    pub pol_angle: f64,
}

/// Time-ordered train of kicks with a constant period and polarization step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiralTrain {
    pulses: Vec<Pulse>,
    delta: f64,
    tau: f64,
    total_kick: f64,
}

impl ChiralTrain {
    /// Pulse k of `kicks` arrives at k·τ polarized at k·δ.
    pub fn uniform(tau: f64, delta: f64, kicks: &[f64]) -> Result<Self> {
        Self::centered(tau, delta, 0, kicks)
    }

    /// Pulses indexed from `first_index`: pulse k arrives at k·τ polarized
    /// at k·δ.
    fn centered(tau: f64, delta: f64, first_index: i32, kicks: &[f64]) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::invalid(format!("train period must be > 0, got {tau}")));
        }
        if !delta.is_finite() {
            return Err(Error::invalid("polarization step must be finite"));
        }
        if let Some(bad) = kicks.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::invalid(format!("kick strengths must be >= 0, got {bad}")));
        }
        let pulses: Vec<Pulse> = kicks
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let k = f64::from(first_index + i as i32);
                Pulse {
                    time: k * tau,
                    kick_strength: p,
                    pol_angle: k * delta,
                }
            })
            .collect();
        let total_kick = pulses.iter().map(|p| p.kick_strength).sum();
        Ok(ChiralTrain {
            pulses,
            delta,
            tau,
            total_kick,
        })
    }

    pub fn empty(tau: f64, delta: f64) -> Result<Self> {
        Self::uniform(tau, delta, &[])
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn total_kick(&self) -> f64 {
        self.total_kick
    }

    /// Polarization rotation period 2πτ/δ in fs; negative for clockwise
    /// trains, `None` when the polarization does not rotate.
    pub fn rotation_period(&self) -> Option<f64> {
        if self.delta == 0.0 {
            None
        } else {
            // 2τ/(δ/π) is exact for δ a dyadic fraction of π
            Some(2.0 * self.tau / (self.delta / PI))
        }
    }

    /// Same pulses with every polarization angle negated.
    pub fn mirrored(&self) -> ChiralTrain {
        ChiralTrain {
            pulses: self
                .pulses
                .iter()
                .map(|p| Pulse {
                    pol_angle: -p.pol_angle,
                    ..*p
                })
                .collect(),
            delta: -self.delta,
            ..self.clone()
        }
    }

    /// Distinct kick strengths, in first-appearance order.
    pub fn distinct_strengths(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for p in &self.pulses {
            if !out.contains(&p.kick_strength) {
                out.push(p.kick_strength);
            }
        }
        out
    }
}

/// Smallest n_cut with Σ_{|n|≤n_cut} J_n(A)² ≥ coverage, with that sum.
///
/// The full sum is 1 only in the limit; a shortfall of at most 1e-14 is
/// accepted so that `coverage = 1` terminates.
pub fn retained_cutoff(amplitude: f64, coverage: f64) -> Result<(u32, f64)> {
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(Error::invalid(format!("coverage must be in (0, 1], got {coverage}")));
    }
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::invalid(format!(
            "modulation amplitude must be >= 0, got {amplitude}"
        )));
    }
    let limit = amplitude.ceil() as usize + 60;
    let j = bessel_j_sequence(amplitude, limit);
    let mut sum = 0.0;
    for (n, jn) in j.iter().enumerate() {
        sum += if n == 0 { jn * jn } else { 2.0 * jn * jn };
        if sum >= coverage - 1e-14 {
            return Ok((n as u32, sum));
        }
    }
    Ok((limit as u32, sum))
}

/// Reduce a shaped train to instantaneous kicks.
///
/// Pulse n carries P_total·J_n(A)²/Σ_retained J_m(A)² and, in time order,
/// the polarization steps by +δ from pulse to pulse; the central (n = 0)
/// pulse arrives at t = 0 polarized at angle 0.
pub fn train_from_shaper(amplitude: f64, tau: f64, delta: f64, p_total: f64, coverage: f64) -> Result<ChiralTrain> {
    if !(p_total.is_finite() && p_total >= 0.0) {
        return Err(Error::invalid(format!("total kick must be >= 0, got {p_total}")));
    }
    let (n_cut, retained) = retained_cutoff(amplitude, coverage)?;
    let j = bessel_j_sequence(amplitude, n_cut as usize);
    let n_cut = n_cut as i32;
    let kicks: Vec<f64> = (-n_cut..=n_cut)
        .map(|n| {
            let jn = j[n.unsigned_abs() as usize];
            p_total * jn * jn / retained
        })
        .collect();
    ChiralTrain::centered(tau, delta, -n_cut, &kicks)
}
