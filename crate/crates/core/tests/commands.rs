// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use chiraltrain::io::cli::{cmd_scan, cmd_synth, cmd_thermal, CommandOutput};
use chiraltrain::io::export::parse_map_csv;
use chiraltrain::io::{RunConfig, ScanSection};
use chiraltrain::rotor::Species;
use chiraltrain::{beat_period, scan, ScanGrid};

fn doc<'a>(out: &'a CommandOutput, name: &str) -> &'a str {
    &out.documents.iter().find(|d| d.name == name).unwrap().contents
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn synth_unmodulated_is_single_pulse() {
    let mut cfg = RunConfig::default();
    cfg.shaper.amplitude = 0.0;
    let out = cmd_synth(&cfg).unwrap();
    assert_eq!(csv_rows(doc(&out, "train.csv")).len(), 1);
}

#[test]
fn synth_without_rotation_has_zero_angles() {
    let mut cfg = RunConfig::default();
    cfg.shaper.delta = 0.0;
    let out = cmd_synth(&cfg).unwrap();
    let rows = csv_rows(doc(&out, "train.csv"));
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r[2] == "0"));
    let summary: serde_json::Value = serde_json::from_str(doc(&out, "synth.json")).unwrap();
    assert!(summary["rotation_period_fs"].is_null());
}

#[test]
fn every_metadata_json_reloads() {
    let mut cfg = RunConfig {
        scan: ScanSection {
            tau_min: 1000.0,
            tau_max: 1000.0,
            tau_steps: 1,
            delta_min: 0.25,
            delta_max: 0.25,
            delta_steps: 1,
        },
        ..RunConfig::default()
    };
    cfg.shaper.delta = 0.125;
    let outputs = [
        cmd_synth(&cfg).unwrap(),
        cmd_scan(&cfg, false).unwrap(),
        cmd_thermal(&cfg).unwrap(),
    ];
    let mut count = 0;
    for out in &outputs {
        for d in out.documents.iter().filter(|d| d.name.ends_with(".json")) {
            let back = RunConfig::from_json_str(&d.contents).unwrap();
            assert_eq!(back, cfg, "{}", d.name);
            let again = RunConfig::from_json_str(&serde_json::to_string(&back).unwrap()).unwrap();
            assert_eq!(again, back);
            count += 1;
        }
    }
    assert_eq!(count, 5);
}

#[test]
fn single_cell_scan() {
    let mut cfg = RunConfig::default();
    cfg.scan.tau_steps = 1;
    cfg.scan.delta_steps = 1;
    let out = cmd_scan(&cfg, false).unwrap();
    for name in ["s_map.csv", "epsilon_map.csv"] {
        let (taus, deltas, cells) = parse_map_csv(doc(&out, name)).unwrap();
        assert_eq!((taus.len(), deltas.len(), cells.len()), (1, 1, 1));
    }
}

#[test]
fn target_n5_maps() {
    let mut cfg = RunConfig {
        target_n: 5,
        ..RunConfig::default()
    };
    cfg.scan.tau_steps = 3;
    cfg.scan.delta_steps = 3;
    let out = cmd_scan(&cfg, false).unwrap();
    let (_, _, cells) = parse_map_csv(doc(&out, "s_map.csv")).unwrap();
    assert!(cells.iter().flatten().all(|c| c.unwrap() > 0.0));
    let meta: serde_json::Value = serde_json::from_str(doc(&out, "scan_meta.json")).unwrap();
    assert_eq!(meta["config"]["target_n"], 5);
}

#[test]
fn default_scan_peaks_at_beat_period_for_fixed_polarization() {
    let mut grid = ScanGrid::default_for(Species::oxygen(), 3);
    grid.delta_values = vec![0.0];
    let result = scan(&grid).unwrap();
    let (i, _) = result.peak_signal();
    let step = grid.tau_values[1] - grid.tau_values[0];
    let t = beat_period(&grid.species, 3).unwrap();
    assert!((grid.tau_values[i] - t).abs() <= step, "peak at {}", grid.tau_values[i]);
}

#[test]
fn cold_ensemble_sits_in_lowest_level() {
    let mut cfg = RunConfig {
        temperature: 0.01,
        ..RunConfig::default()
    };
    let rows = csv_rows(doc(&cmd_thermal(&cfg).unwrap(), "thermal.csv"));
    assert_eq!(rows[0], ["1", "1.00000000000"]);

    let dir = tempfile::tempdir().unwrap();
    let registry = dir.path().join("species.toml");
    std::fs::write(&registry, "[rigid]\nB = 2.0\nD = 0.0\nparity = \"all\"\n").unwrap();
    cfg.species = "rigid".into();
    cfg.species_file = Some(registry);
    cfg.target_n = 2;
    let rows = csv_rows(doc(&cmd_thermal(&cfg).unwrap(), "thermal.csv"));
    assert_eq!(rows[0], ["0", "1.00000000000"]);
}
