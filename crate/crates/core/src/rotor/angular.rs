// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Angular-momentum coupling coefficients.

use std::f64::consts::PI;

const MAX_FACTORIAL: usize = 170;

fn factorial(n: i64) -> f64 {
    debug_assert!(n >= 0 && (n as usize) <= MAX_FACTORIAL);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3) for integer arguments, via the
/// Racah formula.
pub fn wigner_3j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
    if m1 + m2 + m3 != 0 {
        return 0.0;
    }
    if j1 < 0 || j2 < 0 || j3 < 0 {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    if j3 < (j1 - j2).abs() || j3 > j1 + j2 {
        return 0.0;
    }
    let triangle =
        factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3) / factorial(j1 + j2 + j3 + 1);
    let norm = (triangle
        * factorial(j1 + m1)
        * factorial(j1 - m1)
        * factorial(j2 + m2)
        * factorial(j2 - m2)
        * factorial(j3 + m3)
        * factorial(j3 - m3))
    .sqrt();

    let k_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let k_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom = factorial(k)
            * factorial(j1 + j2 - j3 - k)
            * factorial(j1 - m1 - k)
            * factorial(j2 + m2 - k)
            * factorial(j3 - j2 + m1 + k)
            * factorial(j3 - j1 - m2 + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    let phase = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * norm * sum
}

/// ⟨l′ m′| Y_{2μ} |l m⟩ over the unit sphere, with μ = m′ − m.
pub fn gaunt_y2(l_bra: u32, m_bra: i32, l_ket: u32, m_ket: i32) -> f64 {
    let (lb, mb, lk, mk) = (i64::from(l_bra), i64::from(m_bra), i64::from(l_ket), i64::from(m_ket));
    let mu = mb - mk;
    if mu.abs() > 2 {
        return 0.0;
    }
    let prefactor = ((2 * lb + 1) as f64 * 5.0 * (2 * lk + 1) as f64 / (4.0 * PI)).sqrt();
    let phase = if mb.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * prefactor * wigner_3j(lb, 2, lk, 0, 0, 0) * wigner_3j(lb, 2, lk, -mb, mu, mk)
}
