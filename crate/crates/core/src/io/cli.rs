// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit status: 0 success, 1 usage or configuration error, 2 numerical
//! failure (basis too small, failed self-test), 3 I/O error.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use super::config::{Overrides, RunConfig};
use super::export::{self, Document};
use super::format::format_number;
use super::selftest::{run_selftest, SelftestReport};
use crate::ensemble::{epsilon_symmetry_report, scan_with_progress, thermal_states};
use crate::error::Result;
use crate::rotor::build_basis;
use crate::train::{quarter_wave, synthesize_field, train_from_shaper, ShaperConfig};

#[derive(Debug, Parser)]
#[command(
    name = "chiraltrain",
    version,
    about = "Unidirectional molecular rotation by chiral pulse trains"
)]
pub struct Cli {
    /// Configuration file (TOML, or a metadata JSON from an earlier run).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Scan worker threads, 0 = one per core.
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    /// Rotational level read out by the probe.
    #[arg(long = "target-n", global = true, value_name = "N")]
    pub target_n: Option<u32>,
    /// Override one configuration key, e.g. `--set shaper.delta=0.5`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// No progress output on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Synthesize the shaped field, apply the quarter-wave plate and write
    /// the resulting kick train.
    Synth,
    /// Map S and ε over the (τ, δ) grid.
    Scan,
    /// Write the thermal level fractions of the initial ensemble.
    Thermal,
    /// Check production routines against reference implementations.
    Selftest,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            sets: self.set.clone(),
            output_dir: self.out.clone(),
            workers: self.workers,
            target_n: self.target_n,
        }
    }
}

/// Parse `args` (including the program name), run, and return the exit
/// status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides())?;
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Synth => {
            let out = cmd_synth(&cfg)?;
            let paths = export::write_documents(&cfg.output_dir, &out.documents)?;
            writeln!(stdout, "{}", out.summary).ok();
            report_paths(&mut stdout, &paths);
        }
        Command::Scan => {
            let out = cmd_scan(&cfg, !cli.quiet)?;
            let paths = export::write_documents(&cfg.output_dir, &out.documents)?;
            writeln!(stdout, "{}", out.summary).ok();
            report_paths(&mut stdout, &paths);
        }
        Command::Thermal => {
            let out = cmd_thermal(&cfg)?;
            let paths = export::write_documents(&cfg.output_dir, &out.documents)?;
            writeln!(stdout, "{}", out.summary).ok();
            report_paths(&mut stdout, &paths);
        }
        Command::Selftest => {
            let report = cmd_selftest(&cfg);
            write!(stdout, "{}", report.table()).ok();
            let failed = report.failures().count();
            if failed > 0 {
                writeln!(stdout, "selftest: {failed} of {} checks failed", report.checks.len()).ok();
                return Ok(2);
            }
            writeln!(stdout, "selftest: all {} checks passed", report.checks.len()).ok();
        }
    }
    Ok(0)
}

fn report_paths(out: &mut impl std::io::Write, paths: &[PathBuf]) {
    for p in paths {
        writeln!(out, "  wrote {}", p.display()).ok();
    }
}

/// Rendered outputs of one command, not yet written.
#[derive(Clone, Debug)]
pub struct CommandOutput {
    pub documents: Vec<Document>,
    /// One-paragraph human-readable summary.
    pub summary: String,
}

#[derive(Serialize)]
struct PulseReport {
    time_fs: f64,
    kick_strength: f64,
    /// Kick polarization relative to the input polarization, rad.
    pol_angle: f64,
    /// Measured on the synthesized field behind the quarter-wave plate,
    /// relative to the input polarization, rad in (−π/2, π/2].
    measured_angle: f64,
    ellipticity: f64,
    energy_fraction: f64,
    kick_fraction: f64,
}

fn wrap_half_turn(angle: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    let a = angle.rem_euclid(PI);
    if a > FRAC_PI_2 {
        a - PI
    } else {
        a
    }
}

pub fn cmd_synth(cfg: &RunConfig) -> Result<CommandOutput> {
    let species = cfg.resolve_species()?;
    let hash = cfg.config_hash(&species);
    let shaper: ShaperConfig = cfg.shaper_config()?;
    let s = &cfg.shaper;
    let train = train_from_shaper(s.amplitude, s.tau, cfg.delta_rad(), s.p_total, s.coverage)?;
    let grid = cfg.synth_grid(train.len() / 2)?;
    let shaped = synthesize_field(&shaper, &grid)?;
    let plate_axis = shaper.input_angle();
    let after = quarter_wave(&shaped, plate_axis);

    let stokes: Vec<_> = train
        .pulses()
        .iter()
        .map(|p| after.pulse_stokes(p.time, 0.5 * s.tau))
        .collect();
    let energy: f64 = stokes.iter().map(|st| st.energy()).sum();
    let pulses: Vec<PulseReport> = train
        .pulses()
        .iter()
        .zip(&stokes)
        .map(|(p, st)| PulseReport {
            time_fs: p.time,
            kick_strength: p.kick_strength,
            pol_angle: p.pol_angle,
            measured_angle: wrap_half_turn(st.angle() - plate_axis),
            ellipticity: st.ellipticity(),
            energy_fraction: if energy > 0.0 { st.energy() / energy } else { 0.0 },
            kick_fraction: if train.total_kick() > 0.0 {
                p.kick_strength / train.total_kick()
            } else {
                0.0
            },
        })
        .collect();

    let rotation_period = train.rotation_period();
    let field_meta = |stage: &str| {
        json!({
            "config_hash": hash,
            "config": cfg,
            "stage": stage,
            "shaper": shaper,
            "time_grid": grid,
            "quarter_wave_axis_rad": if stage == "quarter_wave" { Some(plate_axis) } else { None },
        })
    };
    let summary_doc = json!({
        "config_hash": hash,
        "version": crate::VERSION,
        "config": cfg,
        "species": species,
        "pulse_count": train.len(),
        "total_kick": train.total_kick(),
        "rotation_period_fs": rotation_period,
        "quarter_wave_axis_rad": plate_axis,
        "pulses": pulses,
    });
    let documents = vec![
        Document::new("field_shaper.csv", export::field_csv(&shaped, &hash)),
        Document::json("field_shaper.json", &field_meta("shaper")),
        Document::new("field_qwp.csv", export::field_csv(&after, &hash)),
        Document::json("field_qwp.json", &field_meta("quarter_wave")),
        Document::new("train.csv", export::train_csv(&train, &hash)),
        Document::json("synth.json", &summary_doc),
    ];
    let worst_ellipticity = pulses.iter().map(|p| p.ellipticity).fold(0.0, f64::max);
    let summary = format!(
        "synth: {} pulses, tau = {} fs, delta = {} rad, P_total = {}, rotation period = {} fs, \
         max ellipticity after plate = {:.2e}",
        train.len(),
        format_number(s.tau),
        format_number(cfg.delta_rad()),
        format_number(train.total_kick()),
        rotation_period.map_or_else(|| "none".to_owned(), format_number),
        worst_ellipticity
    );
    Ok(CommandOutput { documents, summary })
}

/// Run the oracle and guard checks; failures are reported, not returned.
pub fn cmd_selftest(cfg: &RunConfig) -> SelftestReport {
    run_selftest(cfg)
}

pub fn cmd_scan(cfg: &RunConfig, show_progress: bool) -> Result<CommandOutput> {
    let species = cfg.resolve_species()?;
    let hash = cfg.config_hash(&species);
    let grid = cfg.scan_grid(species.clone());

    let last_percent = AtomicUsize::new(0);
    let report = |done: usize, total: usize| {
        let percent = done * 100 / total.max(1);
        if percent >= last_percent.load(Ordering::Relaxed) + 5 || done == total {
            last_percent.store(percent, Ordering::Relaxed);
            eprintln!("scan: {done}/{total} cells ({percent}%)");
        }
    };
    let progress: Option<crate::ensemble::Progress<'_>> = if show_progress { Some(&report) } else { None };
    let result = scan_with_progress(&grid, cfg.workers, progress)?;
    let symmetry = epsilon_symmetry_report(&result).ok();

    let (pi, pj) = result.peak_signal();
    let peak_signal = json!({
        "tau_fs": grid.tau_values[pi],
        "delta_rad": grid.delta_values[pj],
        "s": result.s_map.get(pi, pj),
    });
    let peak_dir = result.peak_directionality().map(|(i, j)| {
        json!({
            "tau_fs": grid.tau_values[i],
            "delta_rad": grid.delta_values[j],
            "epsilon": result.epsilon_map.get(i, j),
        })
    });
    let meta = json!({
        "config_hash": hash,
        "version": crate::VERSION,
        "config": cfg,
        "species": species,
        "grid": {
            "tau_fs": grid.tau_values,
            "delta_rad": grid.delta_values,
        },
        "floors": {
            "thermal": grid.thermal_floor,
            "signal": grid.signal_floor,
        },
        "run": result.metadata,
        "peak_signal": peak_signal,
        "peak_directionality": peak_dir,
        "symmetry": symmetry,
        "files": ["s_map.csv", "epsilon_map.csv"],
    });
    let documents = vec![
        Document::new("s_map.csv", export::s_map_csv(&result, &hash)),
        Document::new("epsilon_map.csv", export::epsilon_map_csv(&result, &hash)),
        Document::json("scan_meta.json", &meta),
    ];
    let mut summary = format!(
        "scan: {} x {} cells, {} pulses per train, {} ensemble members, {:.1} s on {} workers\n  \
         peak S = {} at tau = {} fs, delta = {} rad",
        grid.tau_values.len(),
        grid.delta_values.len(),
        result.metadata.pulses_per_train,
        result.metadata.ensemble_size,
        result.metadata.elapsed_seconds,
        result.metadata.workers,
        format_number(result.s_map.get(pi, pj)),
        format_number(grid.tau_values[pi]),
        format_number(grid.delta_values[pj]),
    );
    if let Some((i, j)) = result.peak_directionality() {
        summary.push_str(&format!(
            "\n  peak |epsilon| = {} at tau = {} fs, delta = {} rad",
            format_number(result.epsilon_map.get(i, j).unwrap_or(0.0).abs()),
            format_number(grid.tau_values[i]),
            format_number(grid.delta_values[j]),
        ));
    }
    Ok(CommandOutput { documents, summary })
}

pub fn cmd_thermal(cfg: &RunConfig) -> Result<CommandOutput> {
    let species = cfg.resolve_species()?;
    let hash = cfg.config_hash(&species);
    let basis = build_basis(&species, cfg.n_max)?;
    let ensemble = thermal_states(&basis, cfg.temperature, cfg.thermal_floor)?;
    let fractions = ensemble.level_fractions();
    let meta = json!({
        "config_hash": hash,
        "version": crate::VERSION,
        "config": cfg,
        "species": species,
        "temperature_k": cfg.temperature,
        "thermal_floor": cfg.thermal_floor,
        "member_count": ensemble.len(),
        "fractions": fractions,
    });
    let listed: Vec<String> = fractions.iter().map(|(n, f)| format!("N={n}: {f:.6}")).collect();
    let summary = format!(
        "thermal: {} K, {} members kept, {}",
        format_number(cfg.temperature),
        ensemble.len(),
        listed.join(", ")
    );
    Ok(CommandOutput {
        documents: vec![
            Document::new("thermal.csv", export::thermal_csv(&ensemble, &hash)),
            Document::json("thermal.json", &meta),
        ],
        summary,
    })
}
