// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for chiraltrain.
//!
//! Objects are opaque handles created by `ct_*_new`-style functions and
//! released with the matching `ct_*_free`. Every fallible function returns
//! a [`CtStatus`]; on failure a description is available from
//! [`ct_last_error`] on the same thread until the next failing call.
//! Undefined directionality values are reported as NaN.
//!
//! Handles are immutable after creation and may be shared between threads.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use chiraltrain::rotor::{Parity, RotorBasis, Species, SpeciesRegistry};
use chiraltrain::{
    beat_period, build_basis, scan_with_workers, thermal_states, train_from_shaper, ChiralTrain, Error, Propagator,
    ScanGrid, ScanResult,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    BasisTooSmall = 3,
    Config = 4,
    Io = 5,
    IndexOutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtParity {
    All = 0,
    Even = 1,
    Odd = 2,
}

/// Rotational constants in cm⁻¹.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CtSpecies {
    pub b: f64,
    pub d: f64,
    pub parity: CtParity,
}

/// Thermally averaged readout of one level.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CtObservables {
    pub q_left: f64,
    pub q_right: f64,
    pub s_total: f64,
    /// NaN when `s_total` is below the signal floor.
    pub epsilon: f64,
}

/// Fixed parameters of a (τ, δ) scan; the axes are passed separately.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CtScanParams {
    pub species: CtSpecies,
    pub n_max: u32,
    pub target_n: u32,
    pub amplitude: f64,
    pub p_total: f64,
    pub coverage: f64,
    /// K.
    pub temperature: f64,
    pub thermal_floor: f64,
    pub signal_floor: f64,
}

/// Rotor basis with its cached kick operators.
pub struct CtBasis {
    basis: Arc<RotorBasis>,
    propagator: Propagator,
}

pub struct CtTrain(ChiralTrain);

pub struct CtScan(ScanResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CtStatus {
    match e {
        Error::InvalidArgument(_) => CtStatus::InvalidArgument,
        Error::BasisTooSmall { .. } => CtStatus::BasisTooSmall,
        Error::Config(_) => CtStatus::Config,
        Error::Io { .. } => CtStatus::Io,
        Error::ScanCell { source, .. } => status_of(source),
    }
}

/// Run `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (CtStatus, String)>) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CtStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_owned());
            CtStatus::Panic
        }
    }
}

fn lib(e: Error) -> (CtStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (CtStatus, String) {
    (CtStatus::NullPointer, format!("{name} is null"))
}

fn out_of_range(index: usize, len: usize) -> (CtStatus, String) {
    (
        CtStatus::IndexOutOfRange,
        format!("index {index} out of range for length {len}"),
    )
}

unsafe fn deref<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, (CtStatus, String)> {
    ptr.as_ref().ok_or_else(|| null(name))
}

unsafe fn write<T>(ptr: *mut T, value: T, name: &str) -> Result<(), (CtStatus, String)> {
    if ptr.is_null() {
        return Err(null(name));
    }
    ptr.write(value);
    Ok(())
}

fn to_species(s: &CtSpecies) -> Result<Species, (CtStatus, String)> {
    let parity = match s.parity {
        CtParity::All => Parity::All,
        CtParity::Even => Parity::Even,
        CtParity::Odd => Parity::Odd,
    };
    Species::new("custom", s.b, s.d, parity).map_err(lib)
}

fn from_species(s: &Species) -> CtSpecies {
    CtSpecies {
        b: s.b,
        d: s.d,
        parity: match s.parity {
            Parity::All => CtParity::All,
            Parity::Even => CtParity::Even,
            Parity::Odd => CtParity::Odd,
        },
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ct_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn ct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Constants of a species from the built-in registry, e.g. "O2".
#[no_mangle]
pub unsafe extern "C" fn ct_species_builtin(name: *const c_char, out: *mut CtSpecies) -> CtStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| (CtStatus::InvalidArgument, "name is not UTF-8".to_owned()))?;
        let species = SpeciesRegistry::builtin().lookup(name).map_err(lib)?;
        write(out, from_species(&species), "out")
    })
}

/// Quantum beat period between levels n and n−2, fs.
#[no_mangle]
pub unsafe extern "C" fn ct_beat_period(species: *const CtSpecies, n: u32, out: *mut f64) -> CtStatus {
    guard(|| {
        let species = to_species(deref(species, "species")?)?;
        write(out, beat_period(&species, n).map_err(lib)?, "out")
    })
}

/// Basis of all allowed levels up to `n_max`.
#[no_mangle]
pub unsafe extern "C" fn ct_basis_new(species: *const CtSpecies, n_max: u32, out: *mut *mut CtBasis) -> CtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let species = to_species(deref(species, "species")?)?;
        let basis = build_basis(&species, n_max).map_err(lib)?;
        let propagator = Propagator::new(&basis).map_err(lib)?;
        out.write(Box::into_raw(Box::new(CtBasis { basis, propagator })));
        Ok(())
    })
}

/// Number of |N, M⟩ states; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ct_basis_len(basis: *const CtBasis) -> usize {
    basis.as_ref().map_or(0, |b| b.basis.len())
}

#[no_mangle]
pub unsafe extern "C" fn ct_basis_free(basis: *mut CtBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// Kick train reduced from a chiral shaper setting (δ in rad, τ in fs).
#[no_mangle]
pub unsafe extern "C" fn ct_train_from_shaper(
    amplitude: f64,
    tau: f64,
    delta: f64,
    p_total: f64,
    coverage: f64,
    out: *mut *mut CtTrain,
) -> CtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let train = train_from_shaper(amplitude, tau, delta, p_total, coverage).map_err(lib)?;
        out.write(Box::into_raw(Box::new(CtTrain(train))));
        Ok(())
    })
}

/// Number of pulses; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ct_train_len(train: *const CtTrain) -> usize {
    train.as_ref().map_or(0, |t| t.0.len())
}

/// Pulse `index` in time order. Any output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn ct_train_pulse(
    train: *const CtTrain,
    index: usize,
    time: *mut f64,
    kick_strength: *mut f64,
    pol_angle: *mut f64,
) -> CtStatus {
    guard(|| {
        let train = &deref(train, "train")?.0;
        let pulse = train
            .pulses()
            .get(index)
            .ok_or_else(|| out_of_range(index, train.len()))?;
        for (ptr, value) in [
            (time, pulse.time),
            (kick_strength, pulse.kick_strength),
            (pol_angle, pulse.pol_angle),
        ] {
            if !ptr.is_null() {
                ptr.write(value);
            }
        }
        Ok(())
    })
}

/// Polarization rotation period 2πτ/δ, fs; InvalidArgument for δ = 0.
#[no_mangle]
pub unsafe extern "C" fn ct_train_rotation_period(train: *const CtTrain, out: *mut f64) -> CtStatus {
    guard(|| {
        let period = deref(train, "train")?
            .0
            .rotation_period()
            .ok_or_else(|| (CtStatus::InvalidArgument, "polarization does not rotate".to_owned()))?;
        write(out, period, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ct_train_free(train: *mut CtTrain) {
    if !train.is_null() {
        drop(Box::from_raw(train));
    }
}

/// Propagate a thermal ensemble through `train` and read out `target_n`.
#[no_mangle]
pub unsafe extern "C" fn ct_ensemble_observables(
    basis: *const CtBasis,
    train: *const CtTrain,
    temperature: f64,
    thermal_floor: f64,
    target_n: u32,
    signal_floor: f64,
    out: *mut CtObservables,
) -> CtStatus {
    guard(|| {
        let basis = deref(basis, "basis")?;
        let train = &deref(train, "train")?.0;
        let ensemble = thermal_states(&basis.basis, temperature, thermal_floor).map_err(lib)?;
        let obs = basis
            .propagator
            .ensemble_observables(&ensemble, train, target_n, signal_floor)
            .map_err(lib)?;
        write(
            out,
            CtObservables {
                q_left: obs.q_left,
                q_right: obs.q_right,
                s_total: obs.s_total,
                epsilon: obs.epsilon.unwrap_or(f64::NAN),
            },
            "out",
        )
    })
}

/// Default parameters: O₂, n_max 29, N = 3, A = 2, P = 7, coverage 0.99,
/// 8 K.
#[no_mangle]
pub unsafe extern "C" fn ct_scan_params_default(out: *mut CtScanParams) -> CtStatus {
    guard(|| {
        let g = ScanGrid::default_for(Species::oxygen(), 3);
        write(
            out,
            CtScanParams {
                species: from_species(&g.species),
                n_max: g.n_max,
                target_n: g.target_n,
                amplitude: g.amplitude,
                p_total: g.p_total,
                coverage: g.coverage,
                temperature: g.temperature,
                thermal_floor: g.thermal_floor,
                signal_floor: g.signal_floor,
            },
            "out",
        )
    })
}

unsafe fn axis(ptr: *const f64, len: usize, name: &str) -> Result<Vec<f64>, (CtStatus, String)> {
    if len == 0 {
        return Err((CtStatus::InvalidArgument, format!("{name} is empty")));
    }
    if ptr.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(ptr, len).to_vec())
}

/// Scan S and ε over `taus` (fs) × `deltas` (rad) on `workers` threads
/// (0 = one per core).
#[no_mangle]
pub unsafe extern "C" fn ct_scan(
    params: *const CtScanParams,
    taus: *const f64,
    n_tau: usize,
    deltas: *const f64,
    n_delta: usize,
    workers: usize,
    out: *mut *mut CtScan,
) -> CtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = deref(params, "params")?;
        let grid = ScanGrid {
            species: to_species(&p.species)?,
            tau_values: axis(taus, n_tau, "taus")?,
            delta_values: axis(deltas, n_delta, "deltas")?,
            amplitude: p.amplitude,
            p_total: p.p_total,
            coverage: p.coverage,
            temperature: p.temperature,
            target_n: p.target_n,
            n_max: p.n_max,
            thermal_floor: p.thermal_floor,
            signal_floor: p.signal_floor,
        };
        let result = scan_with_workers(&grid, workers).map_err(lib)?;
        out.write(Box::into_raw(Box::new(CtScan(result))));
        Ok(())
    })
}

/// Number of τ rows; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ct_scan_rows(scan: *const CtScan) -> usize {
    scan.as_ref().map_or(0, |s| s.0.s_map.rows())
}

/// Number of δ columns; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ct_scan_cols(scan: *const CtScan) -> usize {
    scan.as_ref().map_or(0, |s| s.0.s_map.cols())
}

unsafe fn cell<T>(
    scan: *const CtScan,
    row: usize,
    col: usize,
    pick: impl Fn(&ScanResult, usize, usize) -> T,
) -> Result<T, (CtStatus, String)> {
    let s = &deref(scan, "scan")?.0;
    if row >= s.s_map.rows() {
        return Err(out_of_range(row, s.s_map.rows()));
    }
    if col >= s.s_map.cols() {
        return Err(out_of_range(col, s.s_map.cols()));
    }
    Ok(pick(s, row, col))
}

#[no_mangle]
pub unsafe extern "C" fn ct_scan_signal(scan: *const CtScan, row: usize, col: usize, out: *mut f64) -> CtStatus {
    guard(|| write(out, cell(scan, row, col, |s, i, j| s.s_map.get(i, j))?, "out"))
}

/// ε at one cell; NaN where undefined.
#[no_mangle]
pub unsafe extern "C" fn ct_scan_epsilon(scan: *const CtScan, row: usize, col: usize, out: *mut f64) -> CtStatus {
    guard(|| {
        let e = cell(scan, row, col, |s, i, j| s.epsilon_map.get(i, j))?;
        write(out, e.unwrap_or(f64::NAN), "out")
    })
}

unsafe fn copy_map(
    scan: *const CtScan,
    buf: *mut f64,
    len: usize,
    values: impl Fn(&ScanResult) -> Vec<f64>,
) -> Result<(), (CtStatus, String)> {
    let s = &deref(scan, "scan")?.0;
    if buf.is_null() {
        return Err(null("buf"));
    }
    let v = values(s);
    if len < v.len() {
        return Err((
            CtStatus::InvalidArgument,
            format!("buffer holds {len} values, need {}", v.len()),
        ));
    }
    std::ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
    Ok(())
}

/// Copy S row-major (τ rows, δ columns) into `buf` of at least rows·cols.
#[no_mangle]
pub unsafe extern "C" fn ct_scan_copy_signal(scan: *const CtScan, buf: *mut f64, len: usize) -> CtStatus {
    guard(|| copy_map(scan, buf, len, |s| s.s_map.as_slice().to_vec()))
}

/// Copy ε row-major into `buf`, NaN where undefined.
#[no_mangle]
pub unsafe extern "C" fn ct_scan_copy_epsilon(scan: *const CtScan, buf: *mut f64, len: usize) -> CtStatus {
    guard(|| {
        copy_map(scan, buf, len, |s| {
            s.epsilon_map.as_slice().iter().map(|e| e.unwrap_or(f64::NAN)).collect()
        })
    })
}

#[no_mangle]
pub unsafe extern "C" fn ct_scan_free(scan: *mut CtScan) {
    if !scan.is_null() {
        drop(Box::from_raw(scan));
    }
}
