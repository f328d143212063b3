// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration.
//!
//! A run is described by one TOML file (or a metadata JSON emitted by an
//! earlier run). Values are resolved in this order, later wins:
//!
//! 1. built-in defaults,
//! 2. the configuration file (`--config`),
//! 3. `--set key=value` overrides, in command-line order,
//! 4. the dedicated flags `--out`, `--workers`, `--target-n`.
//!
//! Angles (`shaper.delta`, `scan.delta_min`, `scan.delta_max`) are given in
//! units of π: `delta = 0.25` means π/4.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constants::angular_frequency_from_wavelength_nm;
use crate::ensemble::{ScanGrid, DEFAULT_SIGNAL_FLOOR, DEFAULT_THERMAL_FLOOR};
use crate::error::{Error, Result};
use crate::rotor::{Species, SpeciesRegistry};
use crate::train::{ShaperConfig, TimeGrid};

const MAX_N_MAX: u32 = 80;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Species name in the registry.
    pub species: String,
    /// Registry file; the built-in registry when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub species_file: Option<PathBuf>,
    pub n_max: u32,
    /// Rotational temperature, K.
    pub temperature: f64,
    /// Level read out by the probe.
    pub target_n: u32,
    pub thermal_floor: f64,
    pub signal_floor: f64,
    pub output_dir: PathBuf,
    /// Scan worker threads, 0 = one per core.
    pub workers: usize,
    pub shaper: ShaperSection,
    pub scan: ScanSection,
    pub synth: SynthSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShaperSection {
    pub amplitude: f64,
    /// Train period for single-train commands, fs.
    pub tau: f64,
    /// Polarization step for single-train commands, units of π.
    pub delta: f64,
    pub p_total: f64,
    pub coverage: f64,
    /// Input pulse intensity FWHM, fs.
    pub envelope_fwhm: f64,
    pub wavelength_nm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_steps: usize,
    /// Units of π.
    pub delta_min: f64,
    /// Units of π.
    pub delta_max: f64,
    pub delta_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    /// Sampling step of the optical field, fs.
    pub time_step: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            species: "O2".to_owned(),
            species_file: None,
            n_max: 29,
            temperature: 8.0,
            target_n: 3,
            thermal_floor: DEFAULT_THERMAL_FLOOR,
            signal_floor: DEFAULT_SIGNAL_FLOOR,
            output_dir: PathBuf::from("out"),
            workers: 0,
            shaper: ShaperSection::default(),
            scan: ScanSection::default(),
            synth: SynthSection::default(),
        }
    }
}

impl Default for ShaperSection {
    fn default() -> Self {
        ShaperSection {
            amplitude: 2.0,
            tau: 1000.0,
            delta: 0.25,
            p_total: 7.0,
            coverage: 0.99,
            envelope_fwhm: ShaperConfig::DEFAULT_FWHM_FS,
            wavelength_nm: ShaperConfig::DEFAULT_WAVELENGTH_NM,
        }
    }
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection {
            tau_min: 200.0,
            tau_max: 5000.0,
            tau_steps: 97,
            delta_min: 0.0,
            delta_max: 1.0,
            delta_steps: 65,
        }
    }
}

impl Default for SynthSection {
    fn default() -> Self {
        SynthSection { time_step: 0.5 }
    }
}

/// Command-line adjustments applied on top of a configuration file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    /// `key=value` pairs with dotted keys, e.g. `shaper.delta=0.5`.
    pub sets: Vec<String>,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub target_n: Option<u32>,
}

fn parse_value(text: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {text}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(text.to_owned()))
}

fn apply_set(table: &mut toml::Table, assignment: &str) -> std::result::Result<(), String> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| format!("--set {assignment:?}: expected key=value"))?;
    let key = key.trim();
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(format!("--set {assignment:?}: malformed key"));
    }
    let mut node = table;
    for part in &parts[..parts.len() - 1] {
        let entry = node
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| format!("{key}: {part} is not a section"))?;
    }
    node.insert(parts[parts.len() - 1].to_owned(), parse_value(value.trim()));
    Ok(())
}

fn strip_unknown(given: &mut toml::Table, known: &toml::Table, prefix: &str, out: &mut Vec<String>) {
    given.retain(|key, value| {
        let path = if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        };
        match (known.get(key), value) {
            (None, _) => {
                out.push(format!("{path}: unknown key"));
                false
            }
            (Some(toml::Value::Table(k)), toml::Value::Table(g)) => {
                strip_unknown(g, k, &path, out);
                true
            }
            (Some(toml::Value::Table(_)), _) => {
                out.push(format!("{path}: expected a section"));
                false
            }
            _ => true,
        }
    });
}

fn finish(cfg: RunConfig, problems: &mut Vec<String>) -> Result<RunConfig> {
    if let Err(Error::Config(more)) = cfg.validate() {
        problems.extend(more);
    }
    if problems.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(std::mem::take(problems)))
    }
}

fn known_keys() -> toml::Table {
    let template = RunConfig {
        species_file: Some(PathBuf::from("registry.toml")),
        ..RunConfig::default()
    };
    toml::Table::try_from(&template).expect("config serializes to a table")
}

impl RunConfig {
    /// Load with the documented precedence; `path` may be TOML or a metadata
    /// JSON written by an earlier run.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut table = match path {
            Some(p) => read_table(p)?,
            None => toml::Table::new(),
        };
        let mut problems = Vec::new();
        for assignment in &overrides.sets {
            if let Err(e) = apply_set(&mut table, assignment) {
                problems.push(e);
            }
        }
        if !problems.is_empty() {
            return Err(Error::Config(problems));
        }
        let (mut cfg, mut problems) = Self::from_table_lenient(table)?;
        if let Some(dir) = &overrides.output_dir {
            cfg.output_dir = dir.clone();
        }
        if let Some(w) = overrides.workers {
            cfg.workers = w;
        }
        if let Some(n) = overrides.target_n {
            cfg.target_n = n;
        }
        finish(cfg, &mut problems)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(vec![format!("config: {e}")]))?;
        let (cfg, mut problems) = Self::from_table_lenient(table)?;
        finish(cfg, &mut problems)
    }

    /// Load from a metadata JSON document, which carries the configuration
    /// under `config`, or from a bare configuration object.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let table = json_to_table(text)?;
        let (cfg, mut problems) = Self::from_table_lenient(table)?;
        finish(cfg, &mut problems)
    }

    /// Deserialize with unknown keys stripped and listed, so that range
    /// errors can be reported alongside them.
    fn from_table_lenient(mut table: toml::Table) -> Result<(Self, Vec<String>)> {
        let mut problems = Vec::new();
        strip_unknown(&mut table, &known_keys(), "", &mut problems);
        let cfg = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| {
            problems.push(format!("config: {}", e.message()));
            Error::Config(problems.clone())
        })?;
        Ok((cfg, problems))
    }

    /// Range checks; every violation is reported with its key.
    pub fn validate(&self) -> Result<()> {
        let mut p = Vec::new();
        let mut check = |ok: bool, key: &str, msg: String| {
            if !ok {
                p.push(format!("{key}: {msg}"));
            }
        };
        check(!self.species.is_empty(), "species", "must not be empty".into());
        check(
            (1..=MAX_N_MAX).contains(&self.n_max),
            "n_max",
            format!("must be in 1..={MAX_N_MAX}, got {}", self.n_max),
        );
        check(
            self.temperature.is_finite() && self.temperature > 0.0 && self.temperature <= 1000.0,
            "temperature",
            format!("must be in (0, 1000] K, got {}", self.temperature),
        );
        check(
            self.target_n <= self.n_max,
            "target_n",
            format!("must not exceed n_max ({}), got {}", self.n_max, self.target_n),
        );
        check(
            (0.0..1.0).contains(&self.thermal_floor),
            "thermal_floor",
            format!("must be in [0, 1), got {}", self.thermal_floor),
        );
        check(
            self.signal_floor.is_finite() && self.signal_floor >= 0.0,
            "signal_floor",
            format!("must be >= 0, got {}", self.signal_floor),
        );
        let s = &self.shaper;
        check(
            s.amplitude.is_finite() && (0.0..=50.0).contains(&s.amplitude),
            "shaper.amplitude",
            format!("must be in [0, 50], got {}", s.amplitude),
        );
        check(
            s.tau.is_finite() && s.tau > 0.0,
            "shaper.tau",
            format!("must be > 0 fs, got {}", s.tau),
        );
        check(s.delta.is_finite(), "shaper.delta", "must be finite".into());
        check(
            s.p_total.is_finite() && (0.0..=50.0).contains(&s.p_total),
            "shaper.p_total",
            format!("must be in [0, 50], got {}", s.p_total),
        );
        check(
            s.coverage > 0.0 && s.coverage <= 1.0,
            "shaper.coverage",
            format!("must be in (0, 1], got {}", s.coverage),
        );
        check(
            s.envelope_fwhm.is_finite() && s.envelope_fwhm > 0.0,
            "shaper.envelope_fwhm",
            format!("must be > 0 fs, got {}", s.envelope_fwhm),
        );
        check(
            s.wavelength_nm.is_finite() && s.wavelength_nm > 0.0,
            "shaper.wavelength_nm",
            format!("must be > 0 nm, got {}", s.wavelength_nm),
        );
        let g = &self.scan;
        check(
            g.tau_min.is_finite() && g.tau_min > 0.0,
            "scan.tau_min",
            format!("must be > 0 fs, got {}", g.tau_min),
        );
        check(g.tau_steps >= 1, "scan.tau_steps", "must be >= 1".into());
        check(
            g.tau_steps == 1 || (g.tau_max.is_finite() && g.tau_max > g.tau_min),
            "scan.tau_max",
            format!(
                "must exceed tau_min ({}) for more than one step, got {}",
                g.tau_min, g.tau_max
            ),
        );
        check(g.delta_steps >= 1, "scan.delta_steps", "must be >= 1".into());
        check(
            g.delta_min.is_finite() && g.delta_max.is_finite(),
            "scan.delta_min",
            "delta range must be finite".into(),
        );
        check(
            g.delta_steps == 1 || g.delta_max > g.delta_min,
            "scan.delta_max",
            format!(
                "must exceed delta_min ({}) for more than one step, got {}",
                g.delta_min, g.delta_max
            ),
        );
        check(
            self.synth.time_step.is_finite() && self.synth.time_step > 0.0,
            "synth.time_step",
            format!("must be > 0 fs, got {}", self.synth.time_step),
        );
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(p))
        }
    }

    pub fn registry(&self) -> Result<SpeciesRegistry> {
        match &self.species_file {
            Some(path) => SpeciesRegistry::from_file(path),
            None => Ok(SpeciesRegistry::builtin()),
        }
    }

    /// Species constants, with the target level checked against its parity.
    pub fn resolve_species(&self) -> Result<Species> {
        let species = self.registry()?.lookup(&self.species)?;
        if !species.parity.allows(self.target_n) {
            return Err(Error::Config(vec![format!(
                "target_n: N = {} is not a level of {} ({:?} parity)",
                self.target_n, species.name, species.parity
            )]));
        }
        Ok(species)
    }

    /// Polarization step of single-train commands, rad.
    pub fn delta_rad(&self) -> f64 {
        self.shaper.delta * PI
    }

    pub fn shaper_config(&self) -> Result<ShaperConfig> {
        let mut cfg = ShaperConfig::chiral(self.shaper.amplitude, self.shaper.tau, self.delta_rad())?;
        cfg.envelope_fwhm = self.shaper.envelope_fwhm;
        cfg.omega0 = angular_frequency_from_wavelength_nm(self.shaper.wavelength_nm);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Time grid wide enough for `n_cut` pulses on either side of t = 0.
    pub fn synth_grid(&self, n_cut: usize) -> Result<TimeGrid> {
        let half = (n_cut as f64 + 0.5) * self.shaper.tau + 4.0 * self.shaper.envelope_fwhm;
        TimeGrid::spanning(-half, half, self.synth.time_step)
    }

    pub fn scan_grid(&self, species: Species) -> ScanGrid {
        let g = &self.scan;
        ScanGrid {
            species,
            tau_values: crate::ensemble::linspace(g.tau_min, g.tau_max, g.tau_steps),
            delta_values: crate::ensemble::linspace(g.delta_min * PI, g.delta_max * PI, g.delta_steps),
            amplitude: self.shaper.amplitude,
            p_total: self.shaper.p_total,
            coverage: self.shaper.coverage,
            temperature: self.temperature,
            target_n: self.target_n,
            n_max: self.n_max,
            thermal_floor: self.thermal_floor,
            signal_floor: self.signal_floor,
        }
    }

    /// SHA-256 over the physical content of the run: every setting except
    /// the output directory and worker count, plus the resolved species
    /// constants.
    pub fn config_hash(&self, species: &Species) -> String {
        #[derive(Serialize)]
        struct Hashed<'a> {
            config: &'a RunConfig,
            species: &'a Species,
        }
        let physics = RunConfig {
            output_dir: PathBuf::new(),
            workers: 0,
            species_file: None,
            ..self.clone()
        };
        let text = serde_json::to_string(&Hashed {
            config: &physics,
            species,
        })
        .expect("config serializes");
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn json_to_table(text: &str) -> Result<toml::Table> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(vec![format!("config: {e}")]))?;
    if let Some(inner) = value.get_mut("config") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| Error::Config(vec![format!("config: {e}")]))
}

fn read_table(path: &Path) -> Result<toml::Table> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let is_json = path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
    if is_json {
        json_to_table(&text)
    } else {
        toml::from_str(&text).map_err(|e| Error::Config(vec![format!("{}: {e}", path.display())]))
    }
}
