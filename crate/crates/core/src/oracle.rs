// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Slow reference implementations that share no code path with the
//! production routines. Used by `selftest` and the test suites.
//!
//! * Bessel functions by their power series.
//! * Matrix elements by Gauss–Legendre × trapezoid quadrature of explicit
//!   spherical harmonics.
//! * Kick unitaries by a scaled and squared Taylor series.
//! * Train propagation as an explicit product of dense matrices.
//! * Thermal shell fractions by a direct partition sum.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::constants::{HC_OVER_KB_CM_K, SPEED_OF_LIGHT_CM_PER_FS};
use crate::rotor::Species;

/// J_n(x) from Σ_k (−1)^k (x/2)^{2k+n} / (k!(k+n)!).
pub fn bessel_series(n: i32, x: f64) -> f64 {
    let k_abs = n.unsigned_abs();
    let half = 0.5 * x;
    // first term (x/2)^n / n!
    let mut term = (1..=k_abs).fold(1.0, |acc, i| acc * half / f64::from(i));
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -half * half / (f64::from(k) * f64::from(k + k_abs));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 5 {
            break;
        }
        if k > 500 {
            break;
        }
    }
    if n < 0 && k_abs % 2 == 1 {
        -sum
    } else {
        sum
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(points: usize) -> Vec<(f64, f64)> {
    let n = points;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            derivative = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / derivative;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * derivative * derivative)));
    }
    out
}

/// Normalized spherical harmonic Y_lm(θ, φ), Condon–Shortley phase,
/// written as a function of cos θ.
pub fn spherical_harmonic(l: u32, m: i32, cos_theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    if am > l {
        return Complex64::new(0.0, 0.0);
    }
    let x = cos_theta;
    let s = (1.0 - x * x).max(0.0).sqrt();
    // P_am^am with the (−1)^m phase
    let mut pmm = 1.0;
    for k in 1..=am {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    let plm = if l == am {
        pmm
    } else {
        let mut prev = pmm;
        let mut cur = x * (2 * am + 1) as f64 * pmm;
        for ll in (am + 2)..=l {
            let next = ((2 * ll - 1) as f64 * x * cur - (ll + am - 1) as f64 * prev) / (ll - am) as f64;
            prev = cur;
            cur = next;
        }
        cur
    };
    let ratio = ((l - am + 1)..=(l + am)).fold(1.0, |acc, k| acc / k as f64);
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    let positive = Complex64::from_polar(norm * plm, f64::from(am as i32) * phi);
    if m >= 0 {
        positive
    } else {
        let sign = if am.is_multiple_of(2) { 1.0 } else { -1.0 };
        positive.conj() * sign
    }
}

/// ⟨l′m′| f(θ, φ) |l m⟩ by quadrature exact for band-limited integrands up to
/// total degree `2·theta_points − 1` in cos θ and `phi_points − 1` in φ.
pub fn sphere_matrix_element<F>(
    bra: (u32, i32),
    ket: (u32, i32),
    f: F,
    theta_points: usize,
    phi_points: usize,
) -> Complex64
where
    F: Fn(f64, f64) -> f64,
{
    let nodes = gauss_legendre(theta_points);
    let dphi = 2.0 * PI / phi_points as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for &(x, w) in &nodes {
        for k in 0..phi_points {
            let phi = k as f64 * dphi;
            let yb = spherical_harmonic(bra.0, bra.1, x, phi);
            let yk = spherical_harmonic(ket.0, ket.1, x, phi);
            sum += yb.conj() * yk * (f(x, phi) * w * dphi);
        }
    }
    sum
}

/// cos² of the angle between the molecular axis and a lab-plane direction at
/// `angle` from x̂: sin²θ·cos²(φ − angle).
pub fn cos2_in_plane(angle: f64) -> impl Fn(f64, f64) -> f64 + Copy {
    move |x, phi| (1.0 - x * x) * (phi - angle).cos().powi(2)
}

/// Dense operator ⟨i| f |j⟩ over a list of states by quadrature.
pub fn quadrature_operator<F>(states: &[(u32, i32)], f: F) -> DMatrix<Complex64>
where
    F: Fn(f64, f64) -> f64 + Copy,
{
    let l_max = states.iter().map(|s| s.0).max().unwrap_or(0) as usize;
    let theta_points = l_max + 4;
    let phi_points = 4 * l_max + 16;
    let n = states.len();
    DMatrix::from_fn(n, n, |i, j| {
        sphere_matrix_element(states[i], states[j], f, theta_points, phi_points)
    })
}

/// exp(i·P·A) by Taylor series with scaling and squaring.
pub fn expm_taylor(a: &DMatrix<Complex64>, p: f64) -> DMatrix<Complex64> {
    let n = a.nrows();
    let mut x = a * Complex64::new(0.0, p);
    let norm = x.iter().map(|z| z.norm()).sum::<f64>();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm / scale > 0.25 {
        scale *= 2.0;
        squarings += 1;
    }
    x /= Complex64::new(scale, 0.0);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=40 {
        term = &term * &x / Complex64::new(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Train propagation as a product of dense matrices:
/// K_last · F(τ) · … · F(τ) · K_first · ψ₀, where each kick
/// K = exp(i·P·C_φ) is built from the quadrature operator of the rotated
/// polarization and F is the diagonal free propagator.
///
/// `pulses` holds (time fs, kick strength, polarization angle).
pub fn dense_train_propagation(
    species: &Species,
    states: &[(u32, i32)],
    psi0: &DVector<Complex64>,
    pulses: &[(f64, f64, f64)],
) -> DVector<Complex64> {
    let n = states.len();
    let mut total = DMatrix::<Complex64>::identity(n, n);
    let mut clock = pulses.first().map_or(0.0, |p| p.0);
    for &(time, strength, angle) in pulses {
        let dt = time - clock;
        clock = time;
        let free = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                let nn = f64::from(states[i].0);
                let energy = species.b * nn * (nn + 1.0) - species.d * (nn * (nn + 1.0)).powi(2);
                Complex64::from_polar(1.0, -2.0 * PI * SPEED_OF_LIGHT_CM_PER_FS * energy * dt)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let kick = expm_taylor(&quadrature_operator(states, cos2_in_plane(angle)), strength);
        total = kick * free * total;
    }
    total * psi0
}

/// Fraction of molecules in each allowed level up to `n_limit`, from the
/// explicit partition sum over (2N+1)·exp(−E_N·hc/kT).
pub fn boltzmann_fractions(species: &Species, temperature: f64, n_limit: u32) -> Vec<(u32, f64)> {
    let terms: Vec<(u32, f64)> = (0..=n_limit)
        .filter(|&n| species.parity.allows(n))
        .map(|n| {
            let nn = f64::from(n);
            let energy = species.b * nn * (nn + 1.0) - species.d * nn * nn * (nn + 1.0) * (nn + 1.0);
            (n, (2.0 * nn + 1.0) * (-energy * HC_OVER_KB_CM_K / temperature).exp())
        })
        .collect();
    let z: f64 = terms.iter().map(|t| t.1).sum();
    terms.into_iter().map(|(n, w)| (n, w / z)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_weights_integrate_polynomials() {
        let nodes = gauss_legendre(8);
        let total: f64 = nodes.iter().map(|n| n.1).sum();
        assert!((total - 2.0).abs() < 1e-14);
        let x6: f64 = nodes.iter().map(|(x, w)| w * x.powi(6)).sum();
        assert!((x6 - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn harmonics_are_orthonormal() {
        let states = [(0, 0), (1, -1), (1, 0), (1, 1), (2, 2), (3, -2)];
        let gram = quadrature_operator(&states, |_, _| 1.0);
        for i in 0..states.len() {
            for j in 0..states.len() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - Complex64::new(expected, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn series_bessel_known_value() {
        assert!((bessel_series(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_series(-1, 1.0) + 0.440_050_585_744_933_5).abs() < 1e-15);
    }

    #[test]
    fn taylor_exponential_of_diagonal() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(0.3, 0.0),
            Complex64::new(-1.2, 0.0),
        ]));
        let u = expm_taylor(&a, 7.0);
        assert!((u[(0, 0)] - Complex64::from_polar(1.0, 2.1)).norm() < 1e-13);
        assert!((u[(1, 1)] - Complex64::from_polar(1.0, -8.4)).norm() < 1e-13);
    }
}
