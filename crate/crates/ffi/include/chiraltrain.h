/* Copyright 2026 The chiraltrain Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef CHIRALTRAIN_H
#define CHIRALTRAIN_H



#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum {
  CT_STATUS_OK = 0,
  CT_STATUS_INVALID_ARGUMENT = 1,
  CT_STATUS_NULL_POINTER = 2,
  CT_STATUS_BASIS_TOO_SMALL = 3,
  CT_STATUS_CONFIG = 4,
  CT_STATUS_IO = 5,
  CT_STATUS_INDEX_OUT_OF_RANGE = 6,
  CT_STATUS_PANIC = 7,
} CtStatus;

typedef enum {
  CT_PARITY_ALL = 0,
  CT_PARITY_EVEN = 1,
  CT_PARITY_ODD = 2,
} CtParity;

// Rotor basis with its cached kick operators.
typedef struct CtBasis CtBasis;

typedef struct CtScan CtScan;

typedef struct CtTrain CtTrain;

// Rotational constants in cm⁻¹.
typedef struct {
  double b;
  double d;
  CtParity parity;
} CtSpecies;

// Thermally averaged readout of one level.
typedef struct {
  double q_left;
  double q_right;
  double s_total;
  // NaN when `s_total` is below the signal floor.
  double epsilon;
} CtObservables;

// Fixed parameters of a (τ, δ) scan; the axes are passed separately.
typedef struct {
  CtSpecies species;
  uint32_t n_max;
  uint32_t target_n;
  double amplitude;
  double p_total;
  double coverage;
  // K.
  double temperature;
  double thermal_floor;
  double signal_floor;
} CtScanParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ct_version(void);

// Message of the last failure on this thread; empty if none. The pointer
// stays valid until the next failing call on this thread.
const char *ct_last_error(void);

// Constants of a species from the built-in registry, e.g. "O2".
CtStatus ct_species_builtin(const char *name, CtSpecies *out);

// Quantum beat period between levels n and n−2, fs.
CtStatus ct_beat_period(const CtSpecies *species, uint32_t n, double *out);

// Basis of all allowed levels up to `n_max`.
CtStatus ct_basis_new(const CtSpecies *species, uint32_t n_max, CtBasis **out);

// Number of |N, M⟩ states; 0 for a null handle.
size_t ct_basis_len(const CtBasis *basis);

void ct_basis_free(CtBasis *basis);

// Kick train reduced from a chiral shaper setting (δ in rad, τ in fs).
CtStatus ct_train_from_shaper(double amplitude,
                              double tau,
                              double delta,
                              double p_total,
                              double coverage,
                              CtTrain **out);

// Number of pulses; 0 for a null handle.
size_t ct_train_len(const CtTrain *train);

// Pulse `index` in time order. Any output pointer may be null.
CtStatus ct_train_pulse(const CtTrain *train,
                        size_t index,
                        double *time,
                        double *kick_strength,
                        double *pol_angle);

// Polarization rotation period 2πτ/δ, fs; InvalidArgument for δ = 0.
CtStatus ct_train_rotation_period(const CtTrain *train, double *out);

void ct_train_free(CtTrain *train);

// Propagate a thermal ensemble through `train` and read out `target_n`.
CtStatus ct_ensemble_observables(const CtBasis *basis,
                                 const CtTrain *train,
                                 double temperature,
                                 double thermal_floor,
                                 uint32_t target_n,
                                 double signal_floor,
                                 CtObservables *out);

// Default parameters: O₂, n_max 29, N = 3, A = 2, P = 7, coverage 0.99,
// 8 K.
CtStatus ct_scan_params_default(CtScanParams *out);

// Scan S and ε over `taus` (fs) × `deltas` (rad) on `workers` threads
// (0 = one per core).
CtStatus ct_scan(const CtScanParams *params,
                 const double *taus,
                 size_t n_tau,
                 const double *deltas,
                 size_t n_delta,
                 size_t workers,
                 CtScan **out);

// Number of τ rows; 0 for a null handle.
size_t ct_scan_rows(const CtScan *scan);

// Number of δ columns; 0 for a null handle.
size_t ct_scan_cols(const CtScan *scan);

CtStatus ct_scan_signal(const CtScan *scan, size_t row, size_t col, double *out);

// ε at one cell; NaN where undefined.
CtStatus ct_scan_epsilon(const CtScan *scan, size_t row, size_t col, double *out);

// Copy S row-major (τ rows, δ columns) into `buf` of at least rows·cols.
CtStatus ct_scan_copy_signal(const CtScan *scan, double *buf, size_t len);

// Copy ε row-major into `buf`, NaN where undefined.
CtStatus ct_scan_copy_epsilon(const CtScan *scan, double *buf, size_t len);

void ct_scan_free(CtScan *scan);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHIRALTRAIN_H */
