// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Sampled optical fields in the lab x–y plane.
//!
//! Fields are complex analytic signals: the physical field is
//! Re[E(t)], with the carrier e^{−iω₀t} included in the samples.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bessel::bessel_weights;
use super::shaper::ShaperConfig;
use crate::error::{Error, Result};

/// Uniform time grid `start + k·step`, k = 0 … len−1 (fs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl TimeGrid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) || len == 0 || !start.is_finite() {
            return Err(Error::invalid(format!(
                "time grid needs step > 0 and at least one point (start {start}, step {step}, len {len})"
            )));
        }
        Ok(TimeGrid { start, step, len })
    }

    /// Grid covering [start, end] inclusive with the given step.
    pub fn spanning(start: f64, end: f64, step: f64) -> Result<Self> {
        if end.partial_cmp(&start) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::invalid(format!("empty time span [{start}, {end}]")));
        }
        let len = ((end - start) / step).floor() as usize + 1;
        Self::new(start, step, len)
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.time(self.len - 1)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.time(k)).collect()
    }

    /// Index range of samples with |t − center| ≤ half_width.
    fn window(&self, center: f64, half_width: f64) -> std::ops::Range<usize> {
        let lo = ((center - half_width - self.start) / self.step).ceil().max(0.0) as usize;
        let hi = (((center + half_width - self.start) / self.step).floor() + 1.0).max(0.0) as usize;
        lo.min(self.len)..hi.min(self.len)
    }
}

/// Complex field components on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub grid: TimeGrid,
    pub ex: Vec<Complex64>,
    pub ey: Vec<Complex64>,
}

/// Stokes parameters of one pulse, integrated over its time window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PulseStokes {
    pub center: f64,
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl PulseStokes {
    /// Orientation of the polarization ellipse, rad in (−π/2, π/2].
    pub fn angle(&self) -> f64 {
        0.5 * self.s2.atan2(self.s1)
    }

    /// |S₃|/S₀: 0 for linear, 1 for circular polarization.
    pub fn ellipticity(&self) -> f64 {
        if self.s0 == 0.0 {
            0.0
        } else {
            self.s3.abs() / self.s0
        }
    }

    /// Pulse energy in arbitrary units: Σ|E|²·dt.
    pub fn energy(&self) -> f64 {
        self.s0
    }
}

impl SampledField {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn len(&self) -> usize {
        self.grid.len
    }

    pub fn is_empty(&self) -> bool {
        self.grid.len == 0
    }

    /// |E(t)|², the carrier-averaged intensity envelope up to a constant.
    pub fn intensity(&self) -> Vec<f64> {
        self.ex
            .iter()
            .zip(&self.ey)
            .map(|(x, y)| x.norm_sqr() + y.norm_sqr())
            .collect()
    }

    /// Stokes parameters integrated over |t − center| ≤ half_width.
    pub fn pulse_stokes(&self, center: f64, half_width: f64) -> PulseStokes {
        let mut acc = PulseStokes {
            center,
            s0: 0.0,
            s1: 0.0,
            s2: 0.0,
            s3: 0.0,
        };
        for k in self.grid.window(center, half_width) {
            let (x, y) = (self.ex[k], self.ey[k]);
            let cross = x.conj() * y;
            acc.s0 += x.norm_sqr() + y.norm_sqr();
            acc.s1 += x.norm_sqr() - y.norm_sqr();
            acc.s2 += 2.0 * cross.re;
            acc.s3 += 2.0 * cross.im;
        }
        let dt = self.grid.step;
        acc.s0 *= dt;
        acc.s1 *= dt;
        acc.s2 *= dt;
        acc.s3 *= dt;
        acc
    }
}

/// Field envelope ε(t) of a Gaussian pulse with the given intensity FWHM.
fn envelope(t: f64, fwhm: f64) -> f64 {
    (-2.0 * std::f64::consts::LN_2 * t * t / (fwhm * fwhm)).exp()
}

/// Largest sideband order worth sampling for amplitude A.
fn field_cutoff(amplitude: f64) -> u32 {
    amplitude.ceil() as u32 + 20
}

/// Shaped field
/// E(t) = Σᵢ êᵢ(êᵢ·ê_in) Σₙ Jₙ(A) ε(t + nτ) exp[−i(ω₀t + nδᵢ)]
/// with ê₁ = x̂, ê₂ = ŷ.
///
/// The grid must resolve the carrier: step ≤ (carrier period)/4.
pub fn synthesize_field(cfg: &ShaperConfig, grid: &TimeGrid) -> Result<SampledField> {
    cfg.validate()?;
    let max_step = cfg.carrier_period() / 4.0;
    if grid.step > max_step {
        return Err(Error::invalid(format!(
            "time step {} fs does not resolve the carrier (need <= {max_step:.4} fs)",
            grid.step
        )));
    }
    let weights = bessel_weights(cfg.amplitude, field_cutoff(cfg.amplitude));
    let [px, py] = cfg.input_polarization;
    let reach = 6.0 * cfg.envelope_fwhm;

    let mut ex = vec![Complex64::new(0.0, 0.0); grid.len];
    let mut ey = vec![Complex64::new(0.0, 0.0); grid.len];
    for &(n, jn) in &weights {
        if jn == 0.0 {
            continue;
        }
        let nf = f64::from(n);
        let center = -nf * cfg.tau;
        let phase_x = Complex64::from_polar(1.0, -nf * cfg.delta1);
        let phase_y = Complex64::from_polar(1.0, -nf * cfg.delta2);
        for k in grid.window(center, reach) {
            let t = grid.time(k);
            let a = jn * envelope(t - center, cfg.envelope_fwhm);
            let carrier = Complex64::from_polar(a, -cfg.omega0 * t);
            ex[k] += carrier * phase_x * px;
            ey[k] += carrier * phase_y * py;
        }
    }
    Ok(SampledField { grid: *grid, ex, ey })
}

/// Ideal quarter-wave retarder with its fast axis at `axis_angle` from x̂.
///
/// The slow-axis component is delayed by a quarter period, i.e. multiplied
/// by e^{iπ/2} for e^{−iωt} fields.
pub fn quarter_wave(field: &SampledField, axis_angle: f64) -> SampledField {
    let (s, c) = axis_angle.sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let (ex, ey) = field
        .ex
        .iter()
        .zip(&field.ey)
        .map(|(&x, &y)| {
            let fast = c * x + s * y;
            let slow = (-s * x + c * y) * i;
            (c * fast - s * slow, s * fast + c * slow)
        })
        .unzip();
    SampledField {
        grid: field.grid,
        ex,
        ey,
    }
}

/// |ê_a·E(t)|² behind a linear analyzer at `analyzer_angle` from x̂.
pub fn project_polarization(field: &SampledField, analyzer_angle: f64) -> Vec<f64> {
    let (s, c) = analyzer_angle.sin_cos();
    field
        .ex
        .iter()
        .zip(&field.ey)
        .map(|(&x, &y)| (c * x + s * y).norm_sqr())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn single_point(ex: Complex64, ey: Complex64) -> SampledField {
        SampledField {
            grid: TimeGrid::new(0.0, 1.0, 1).unwrap(),
            ex: vec![ex],
            ey: vec![ey],
        }
    }

    #[test]
    fn grid_window_bounds() {
        let g = TimeGrid::new(-10.0, 0.5, 41).unwrap();
        assert_eq!(g.end(), 10.0);
        assert_eq!(g.window(0.0, 1.0), 18..23);
        assert_eq!(g.window(100.0, 1.0), 41..41);
        assert_eq!(g.window(-100.0, 1.0), 0..0);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let cfg = ShaperConfig::chiral(2.0, 1000.0, FRAC_PI_4).unwrap();
        let grid = TimeGrid::new(-100.0, 1.0, 200).unwrap();
        assert!(matches!(synthesize_field(&cfg, &grid), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn unmodulated_input_is_one_pulse_along_input() {
        let cfg = ShaperConfig::chiral(0.0, 1000.0, FRAC_PI_4).unwrap();
        let grid = TimeGrid::spanning(-3000.0, 3000.0, 0.5).unwrap();
        let field = synthesize_field(&cfg, &grid).unwrap();
        let intensity = field.intensity();
        let peak = intensity
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(grid.time(peak).abs() < 0.5);
        for (x, y) in field.ex.iter().zip(&field.ey) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn fast_axis_passes_unchanged() {
        let f = single_point(Complex64::new(0.6, 0.2), Complex64::new(0.0, 0.0));
        let out = quarter_wave(&f, 0.0);
        assert_eq!(out, f);
        let diag = single_point(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0));
        let out = quarter_wave(&diag, FRAC_PI_4);
        assert!((out.ex[0] - diag.ex[0]).norm() < 1e-15 && (out.ey[0] - diag.ey[0]).norm() < 1e-15);
    }

    #[test]
    fn circular_becomes_linear_at_45_degrees() {
        let circ = single_point(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        let out = quarter_wave(&circ, 0.0);
        let stokes = out.pulse_stokes(0.0, 0.5);
        assert!(stokes.ellipticity() < 1e-15);
        assert!((stokes.angle().abs() - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn analyzer_projection() {
        let f = single_point(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        assert!((project_polarization(&f, 0.0)[0] - 1.0).abs() < 1e-15);
        assert!(project_polarization(&f, FRAC_PI_2)[0] < 1e-30);
    }
}
