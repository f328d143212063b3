// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON renderers.
//!
//! Commands render every output document in memory first and write them
//! in one pass afterwards, so a failed computation leaves no partial files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::format::{format_number, format_optional};
use crate::ensemble::{Map2, ScanResult, ThermalEnsemble};
use crate::error::{Error, Result};
use crate::train::{ChiralTrain, SampledField};

/// One output file, relative to the output directory.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub name: String,
    pub contents: String,
}

impl Document {
    pub fn new(name: impl Into<String>, contents: String) -> Self {
        Document {
            name: name.into(),
            contents,
        }
    }

    pub fn json(name: impl Into<String>, value: &impl Serialize) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("output serializes");
        text.push('\n');
        Document::new(name, text)
    }
}

/// Create `dir` and write every document into it; returns the paths.
pub fn write_documents(dir: &Path, docs: &[Document]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    docs.iter()
        .map(|doc| {
            let path = dir.join(&doc.name);
            std::fs::write(&path, &doc.contents).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

fn hash_line(out: &mut String, config_hash: &str) {
    writeln!(out, "# config_hash={config_hash}").unwrap();
}

/// Columns `t_fs,ex_re,ex_im,ey_re,ey_im`.
pub fn field_csv(field: &SampledField, config_hash: &str) -> String {
    let mut out = String::with_capacity(field.len() * 80);
    hash_line(&mut out, config_hash);
    out.push_str("t_fs,ex_re,ex_im,ey_re,ey_im\n");
    for (k, (x, y)) in field.ex.iter().zip(&field.ey).enumerate() {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_number(field.grid.time(k)),
            format_number(x.re),
            format_number(x.im),
            format_number(y.re),
            format_number(y.im)
        )
        .unwrap();
    }
    out
}

/// Columns `time_fs,kick_strength,pol_angle_rad`, one row per kick.
pub fn train_csv(train: &ChiralTrain, config_hash: &str) -> String {
    let mut out = String::new();
    hash_line(&mut out, config_hash);
    out.push_str("time_fs,kick_strength,pol_angle_rad\n");
    for p in train.pulses() {
        writeln!(
            out,
            "{},{},{}",
            format_number(p.time),
            format_number(p.kick_strength),
            format_number(p.pol_angle)
        )
        .unwrap();
    }
    out
}

/// τ down the rows, δ across the columns; the corner cell names the axes.
fn map_csv<T: Copy>(
    map: &Map2<T>,
    taus: &[f64],
    deltas: &[f64],
    config_hash: &str,
    cell: impl Fn(T) -> String,
) -> String {
    let mut out = String::with_capacity(map.rows() * map.cols() * 16);
    hash_line(&mut out, config_hash);
    out.push_str("tau_fs\\delta_rad");
    for &d in deltas {
        out.push(',');
        out.push_str(&format_number(d));
    }
    out.push('\n');
    for (i, &tau) in taus.iter().enumerate() {
        out.push_str(&format_number(tau));
        for &v in map.row(i) {
            out.push(',');
            out.push_str(&cell(v));
        }
        out.push('\n');
    }
    out
}

pub fn s_map_csv(result: &ScanResult, config_hash: &str) -> String {
    let g = &result.grid;
    map_csv(
        &result.s_map,
        &g.tau_values,
        &g.delta_values,
        config_hash,
        format_number,
    )
}

/// Cells where ε is undefined are left empty.
pub fn epsilon_map_csv(result: &ScanResult, config_hash: &str) -> String {
    let g = &result.grid;
    map_csv(
        &result.epsilon_map,
        &g.tau_values,
        &g.delta_values,
        config_hash,
        format_optional,
    )
}

/// Columns `N,fraction` for every level of the basis, 0 where the member
/// fell below the thermal floor.
pub fn thermal_csv(ensemble: &ThermalEnsemble, config_hash: &str) -> String {
    let fractions = ensemble.level_fractions();
    let mut out = String::new();
    hash_line(&mut out, config_hash);
    out.push_str("N,fraction\n");
    for n in ensemble.basis().levels() {
        let f = fractions.get(&n).copied().unwrap_or(0.0);
        writeln!(out, "{n},{}", format_number(f)).unwrap();
    }
    out
}

/// (τ axis, δ axis, rows of cells) of a map CSV.
pub type MapTable = (Vec<f64>, Vec<f64>, Vec<Vec<Option<f64>>>);

/// Parse a map CSV back into its axes and cells; empty cells are None.
pub fn parse_map_csv(text: &str) -> Result<MapTable> {
    let bad = |line: usize, msg: &str| Error::invalid(format!("map csv line {}: {msg}", line + 1));
    let num = |s: &str, line: usize| s.trim().parse::<f64>().map_err(|_| bad(line, "not a number"));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| bad(0, "missing header"))?;
    let deltas = header
        .split(',')
        .skip(1)
        .map(|s| num(s, hl))
        .collect::<Result<Vec<_>>>()?;
    let mut taus = Vec::new();
    let mut rows = Vec::new();
    for (ln, line) in lines {
        let mut fields = line.split(',');
        taus.push(num(fields.next().unwrap_or(""), ln)?);
        let row = fields
            .map(|s| if s.is_empty() { Ok(None) } else { num(s, ln).map(Some) })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != deltas.len() {
            return Err(bad(ln, "wrong number of cells"));
        }
        rows.push(row);
    }
    Ok((taus, deltas, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{scan, ScanGrid};
    use crate::rotor::Species;

    fn small_scan() -> ScanResult {
        let mut grid = ScanGrid::default_for(Species::oxygen(), 3);
        grid.tau_values = vec![1000.0, 2320.0];
        grid.delta_values = vec![0.0, std::f64::consts::FRAC_PI_4];
        grid.n_max = 21;
        scan(&grid).unwrap()
    }

    #[test]
    fn map_csv_round_trip() {
        let result = small_scan();
        let text = epsilon_map_csv(&result, "abc");
        assert!(text.starts_with("# config_hash=abc\n"));
        let (taus, deltas, rows) = parse_map_csv(&text).unwrap();
        assert_eq!(taus, result.grid.tau_values);
        assert_eq!(deltas.len(), 2);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                match (v, result.epsilon_map.get(i, j)) {
                    (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-11 * b.abs().max(1e-300)),
                    (None, None) => {}
                    other => panic!("mismatch {other:?}"),
                }
            }
        }
    }

    #[test]
    fn undefined_epsilon_is_empty_cell() {
        let mut result = small_scan();
        result.epsilon_map = Map2::from_vec(2, 2, vec![None, Some(0.5), None, None]);
        let text = epsilon_map_csv(&result, "h");
        let rows: Vec<&str> = text.lines().skip(2).collect();
        assert!(rows[0].ends_with(",,0.500000000000"), "{}", rows[0]);
        assert!(rows[1].ends_with(",,"), "{}", rows[1]);
    }

    #[test]
    fn write_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        let err = write_documents(&blocker.join("sub"), &[Document::new("a", String::new())]).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("file"));
    }
}
