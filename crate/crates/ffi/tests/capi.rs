// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use chiraltrain_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ct_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn oxygen() -> CtSpecies {
    let name = CString::new("O2").unwrap();
    let mut s = CtSpecies {
        b: 0.0,
        d: 0.0,
        parity: CtParity::All,
    };
    assert_eq!(unsafe { ct_species_builtin(name.as_ptr(), &mut s) }, CtStatus::Ok);
    s
}

#[test]
fn version_and_species() {
    let v = unsafe { CStr::from_ptr(ct_version()) }.to_str().unwrap();
    assert_eq!(v, chiraltrain::VERSION);
    let s = oxygen();
    assert_eq!(s.parity, CtParity::Odd);
    let mut t = 0.0;
    assert_eq!(unsafe { ct_beat_period(&s, 3, &mut t) }, CtStatus::Ok);
    assert!((t - 2320.26).abs() < 0.01);

    let unknown = CString::new("XeF").unwrap();
    let mut out = s;
    assert_eq!(
        unsafe { ct_species_builtin(unknown.as_ptr(), &mut out) },
        CtStatus::Config
    );
    assert!(last_error().contains("XeF"));
    assert_eq!(unsafe { ct_beat_period(&s, 2, &mut t) }, CtStatus::InvalidArgument);
}

#[test]
fn train_handle() {
    let mut train = ptr::null_mut();
    let status = unsafe { ct_train_from_shaper(2.0, 1000.0, std::f64::consts::FRAC_PI_4, 7.0, 0.999, &mut train) };
    assert_eq!(status, CtStatus::Ok);
    assert_eq!(unsafe { ct_train_len(train) }, 9);
    let mut period = 0.0;
    assert_eq!(unsafe { ct_train_rotation_period(train, &mut period) }, CtStatus::Ok);
    assert_eq!(period, 8000.0);
    let (mut t, mut p, mut a) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { ct_train_pulse(train, 8, &mut t, &mut p, &mut a) },
        CtStatus::Ok
    );
    assert_eq!(t, 4000.0);
    assert!((a - std::f64::consts::PI).abs() < 1e-12);
    assert!(p > 0.0);
    assert_eq!(
        unsafe { ct_train_pulse(train, 9, &mut t, ptr::null_mut(), ptr::null_mut()) },
        CtStatus::IndexOutOfRange
    );
    unsafe { ct_train_free(train) };

    assert_eq!(
        unsafe { ct_train_from_shaper(2.0, -1.0, 0.0, 7.0, 0.99, &mut train) },
        CtStatus::InvalidArgument
    );
    assert!(!last_error().is_empty());
}

#[test]
fn observables_match_library() {
    let s = oxygen();
    let mut basis = ptr::null_mut();
    assert_eq!(unsafe { ct_basis_new(&s, 29, &mut basis) }, CtStatus::Ok);
    assert_eq!(unsafe { ct_basis_len(basis) }, 465);
    let mut train = ptr::null_mut();
    assert_eq!(
        unsafe { ct_train_from_shaper(2.0, 1500.0, 0.6, 7.0, 0.99, &mut train) },
        CtStatus::Ok
    );
    let mut obs = CtObservables {
        q_left: 0.0,
        q_right: 0.0,
        s_total: 0.0,
        epsilon: 0.0,
    };
    assert_eq!(
        unsafe { ct_ensemble_observables(basis, train, 8.0, 1e-4, 3, 1e-6, &mut obs) },
        CtStatus::Ok
    );

    let lib_basis = chiraltrain::build_basis(&chiraltrain::rotor::Species::oxygen(), 29).unwrap();
    let ensemble = chiraltrain::thermal_states(&lib_basis, 8.0, 1e-4).unwrap();
    let lib_train = chiraltrain::train_from_shaper(2.0, 1500.0, 0.6, 7.0, 0.99).unwrap();
    let expected = chiraltrain::ensemble_observables(&ensemble, &lib_train, 3).unwrap();
    assert_eq!(obs.s_total, expected.s_total);
    assert_eq!(obs.epsilon, expected.epsilon.unwrap());

    // a small basis is rejected with its own code
    let mut small = ptr::null_mut();
    assert_eq!(unsafe { ct_basis_new(&s, 9, &mut small) }, CtStatus::Ok);
    assert_eq!(
        unsafe { ct_ensemble_observables(small, train, 8.0, 1e-4, 3, 1e-6, &mut obs) },
        CtStatus::BasisTooSmall
    );
    assert!(last_error().contains("basis too small"));
    unsafe {
        ct_basis_free(small);
        ct_basis_free(basis);
        ct_train_free(train);
    }
}

#[test]
fn scan_maps_with_undefined_epsilon_as_nan() {
    let mut params = unsafe { std::mem::zeroed::<CtScanParams>() };
    assert_eq!(unsafe { ct_scan_params_default(&mut params) }, CtStatus::Ok);
    assert_eq!(params.n_max, 29);
    // a signal floor above 1 leaves ε undefined everywhere
    params.signal_floor = 2.0;
    let taus = [1000.0, 2000.0];
    let deltas = [0.0, 0.5, 1.0];
    let mut scan = ptr::null_mut();
    let status = unsafe { ct_scan(&params, taus.as_ptr(), 2, deltas.as_ptr(), 3, 1, &mut scan) };
    assert_eq!(status, CtStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { (ct_scan_rows(scan), ct_scan_cols(scan)) }, (2, 3));
    let mut eps = [0.0; 6];
    let mut sig = [0.0; 6];
    assert_eq!(unsafe { ct_scan_copy_epsilon(scan, eps.as_mut_ptr(), 6) }, CtStatus::Ok);
    assert_eq!(unsafe { ct_scan_copy_signal(scan, sig.as_mut_ptr(), 6) }, CtStatus::Ok);
    assert!(eps.iter().all(|e| e.is_nan()));
    assert!(sig.iter().all(|s| *s > 0.0));
    let mut one = 0.0;
    assert_eq!(unsafe { ct_scan_signal(scan, 1, 2, &mut one) }, CtStatus::Ok);
    assert_eq!(one, sig[5]);
    assert_eq!(
        unsafe { ct_scan_epsilon(scan, 2, 0, &mut one) },
        CtStatus::IndexOutOfRange
    );
    assert_eq!(
        unsafe { ct_scan_copy_signal(scan, sig.as_mut_ptr(), 5) },
        CtStatus::InvalidArgument
    );
    unsafe { ct_scan_free(scan) };
}

#[test]
fn null_pointers_are_reported() {
    let mut t = 0.0;
    assert_eq!(unsafe { ct_beat_period(ptr::null(), 3, &mut t) }, CtStatus::NullPointer);
    assert!(last_error().contains("species"));
    let s = oxygen();
    assert_eq!(unsafe { ct_beat_period(&s, 3, ptr::null_mut()) }, CtStatus::NullPointer);
    assert_eq!(unsafe { ct_train_len(ptr::null()) }, 0);
    unsafe {
        ct_train_free(ptr::null_mut());
        ct_basis_free(ptr::null_mut());
        ct_scan_free(ptr::null_mut());
    }
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/chiraltrain.h")).unwrap()
}

#[test]
fn header_declares_every_export() {
    let text = header();
    let source = include_str!("../src/lib.rs");
    let exported: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exported.len() >= 20);
    for name in exported {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    for ty in [
        "CtStatus",
        "CtSpecies",
        "CtScanParams",
        "CtObservables",
        "typedef struct CtScan CtScan",
    ] {
        assert!(text.contains(ty), "{ty} missing from header");
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"chiraltrain.h\"\nint main(void) { CtSpecies s; double t; \
         return ct_beat_period(&s, 3, &t) == CT_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(&include)
            .arg(&src)
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(_) => eprintln!("{compiler} not available, skipping"),
        }
    }
}
