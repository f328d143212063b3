// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{FRAC_PI_4, PI};

use chiraltrain::train::{bessel_j, retained_cutoff};
use chiraltrain::{
    project_polarization, quarter_wave, synthesize_field, train_from_shaper, SampledField, ShaperConfig, TimeGrid,
};

fn quarter_turn_train() -> ShaperConfig {
    ShaperConfig::chiral(2.0, 1000.0, FRAC_PI_4).unwrap()
}

fn sample(cfg: &ShaperConfig, pulses: i32) -> SampledField {
    let half = (f64::from(pulses) + 0.5) * cfg.tau;
    synthesize_field(cfg, &TimeGrid::spanning(-half, half, 0.5).unwrap()).unwrap()
}

fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(PI);
    if a > PI / 2.0 {
        a - PI
    } else {
        a
    }
}

#[test]
fn cutoff_follows_coverage_rule() {
    let (n, sum) = retained_cutoff(2.0, 0.99).unwrap();
    assert_eq!(n, 3);
    assert!((sum - 0.997_587).abs() < 1e-6);
    let (n, sum) = retained_cutoff(2.0, 0.999).unwrap();
    assert_eq!(n, 4);
    assert!((sum - 0.999_898).abs() < 1e-6);
    assert_eq!(retained_cutoff(0.0, 0.99).unwrap().0, 0);
}

#[test]
fn picosecond_train_geometry() {
    let train = train_from_shaper(2.0, 1000.0, FRAC_PI_4, 7.0, 0.999).unwrap();
    assert_eq!(train.len(), 9);
    assert_eq!(train.rotation_period(), Some(8000.0));
    for pair in train.pulses().windows(2) {
        assert!((pair[1].pol_angle - pair[0].pol_angle - FRAC_PI_4).abs() < 1e-15);
        assert!((pair[1].time - pair[0].time - 1000.0).abs() < 1e-12);
    }
    assert!((train.total_kick() - 7.0).abs() < 1e-12);
}

#[test]
fn quarter_wave_output_is_linear_and_steps_by_delta() {
    let cfg = quarter_turn_train();
    let after = quarter_wave(&sample(&cfg, 4), cfg.input_angle());
    let total: f64 = (-4..=4)
        .map(|k| after.pulse_stokes(f64::from(k) * 1000.0, 500.0).energy())
        .sum();
    for k in -4..=4 {
        let st = after.pulse_stokes(f64::from(k) * 1000.0, 500.0);
        assert!(st.ellipticity() < 1e-6, "pulse {k}: ellipticity {}", st.ellipticity());
        let expected = wrap(f64::from(k) * FRAC_PI_4);
        let measured = wrap(st.angle() - cfg.input_angle());
        assert!(
            (wrap(measured - expected)).abs() < 1e-9,
            "pulse {k}: {measured} vs {expected}"
        );
        let j = bessel_j(k, 2.0);
        assert!((st.energy() / total / (j * j) - 1.0).abs() < 0.01, "pulse {k}");
    }
}

#[test]
fn shaped_field_is_elliptical_before_the_plate() {
    let cfg = quarter_turn_train();
    let field = sample(&cfg, 2);
    // the component phase difference 2kδ makes pulse ±1 circular
    let st = field.pulse_stokes(1000.0, 500.0);
    assert!(st.ellipticity() > 0.99);
    let st = field.pulse_stokes(0.0, 500.0);
    assert!(st.ellipticity() < 1e-9);
}

#[test]
fn analyzer_along_input_suppresses_pulses_two_apart() {
    let cfg = quarter_turn_train();
    let after = quarter_wave(&sample(&cfg, 4), cfg.input_angle());
    let signal = project_polarization(&after, cfg.input_angle());
    let intensity = after.intensity();
    let window_sum = |v: &[f64], k: i32| -> f64 {
        after
            .times()
            .iter()
            .zip(v)
            .filter(|(t, _)| (**t - f64::from(k) * 1000.0).abs() <= 500.0)
            .map(|(_, x)| x)
            .sum()
    };
    for k in [-4, 0, 4] {
        let contrast = window_sum(&signal, k) / window_sum(&intensity, k);
        assert!((contrast - 1.0).abs() < 1e-9, "pulse {k}: {contrast}");
    }
    for k in [-2, 2] {
        let contrast = window_sum(&signal, k) / window_sum(&intensity, k);
        assert!(contrast < 1e-9, "pulse {k}: {contrast}");
    }
}

#[test]
fn kick_strengths_track_field_energies() {
    for (amplitude, tau, delta) in [(1.0, 800.0, 0.3), (2.0, 1500.0, 1.2), (3.0, 2000.0, 2.9)] {
        let cfg = ShaperConfig::chiral(amplitude, tau, delta).unwrap();
        let train = train_from_shaper(amplitude, tau, delta, 7.0, 0.999).unwrap();
        let n_cut = (train.len() / 2) as i32;
        let after = quarter_wave(&sample(&cfg, n_cut), cfg.input_angle());
        let energies: Vec<f64> = train
            .pulses()
            .iter()
            .map(|p| after.pulse_stokes(p.time, 0.5 * tau).energy())
            .collect();
        let total: f64 = energies.iter().sum();
        for (p, e) in train.pulses().iter().zip(&energies) {
            let kick = p.kick_strength / train.total_kick();
            let field = e / total;
            assert!(
                (field / kick - 1.0).abs() < 0.01,
                "A {amplitude}: t {} kick {kick} field {field}",
                p.time
            );
            let measured = wrap(after.pulse_stokes(p.time, 0.5 * tau).angle() - cfg.input_angle());
            assert!(wrap(measured - p.pol_angle).abs() < 1e-6);
        }
    }
}

#[test]
fn coarse_grid_is_rejected() {
    let cfg = quarter_turn_train();
    let grid = TimeGrid::spanning(-100.0, 100.0, 1.0).unwrap();
    assert!(synthesize_field(&cfg, &grid).is_err());
}
