// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::angular::gaunt_y2;
use super::basis::RotorBasis;
use crate::error::{Error, Result};

/// Tolerance on ‖A − A†‖_max for an operator flagged hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense operator on a rotor basis.
#[derive(Clone, Debug)]
pub struct Operator {
    basis: Arc<RotorBasis>,
    matrix: DMatrix<Complex64>,
    hermitian: bool,
}

/// Lab-frame axis of a linear polarization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Operator {
    /// Wrap a matrix. A `hermitian` flag is verified against the matrix.
    pub fn new(basis: Arc<RotorBasis>, matrix: DMatrix<Complex64>, hermitian: bool) -> Result<Self> {
        let n = basis.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::invalid(format!(
                "operator is {}x{}, basis has {n} states",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let op = Operator {
            basis,
            matrix,
            hermitian,
        };
        if hermitian && op.hermiticity_residual() > HERMITIAN_TOL {
            return Err(Error::invalid(format!(
                "operator flagged hermitian deviates from its adjoint by {:.3e}",
                op.hermiticity_residual()
            )));
        }
        Ok(op)
    }

    pub fn identity(basis: Arc<RotorBasis>) -> Self {
        let n = basis.len();
        Operator {
            basis,
            matrix: DMatrix::identity(n, n),
            hermitian: true,
        }
    }

    pub fn basis(&self) -> &Arc<RotorBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Element ⟨bra| A |ket⟩ by basis index.
    pub fn element(&self, bra: usize, ket: usize) -> Complex64 {
        self.matrix[(bra, ket)]
    }

    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    /// max |A − A†|.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// max |A†A − I|.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.matrix.nrows();
        let product = self.matrix.adjoint() * &self.matrix;
        (product - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    pub fn apply(&self, amplitudes: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * amplitudes
    }

    /// Conjugate by the z rotation R(angle) = exp(−i L_z angle): R A R†.
    pub fn rotated_z(&self, angle: f64) -> Operator {
        let phases: Vec<Complex64> = self
            .basis
            .states()
            .iter()
            .map(|&(_, m)| Complex64::from_polar(1.0, -f64::from(m) * angle))
            .collect();
        let n = phases.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| self.matrix[(i, j)] * phases[i] * phases[j].conj());
        Operator {
            basis: self.basis.clone(),
            matrix,
            hermitian: self.hermitian,
        }
    }
}

/// ⟨N′M′| cos²θ_axis |N M⟩, where θ_axis is the angle between the molecular
/// axis and the given lab axis.
///
/// Expanded in rank-2 spherical harmonics:
/// * x: sin²θ cos²φ = 1/3 − (1/3)√(4π/5) Y₂₀ + √(2π/15) (Y₂₂ + Y₂₋₂)
/// * y: sin²θ sin²φ = 1/3 − (1/3)√(4π/5) Y₂₀ − √(2π/15) (Y₂₂ + Y₂₋₂)
/// * z: cos²θ       = 1/3 + (2/3)√(4π/5) Y₂₀
///
/// Entries outside ΔN ∈ {0, ±2}, ΔM ∈ {0, ±2} are never written and stay
/// exactly zero.
pub fn cos2_matrix(basis: &Arc<RotorBasis>, axis: Axis) -> Operator {
    let y20 = (4.0 * PI / 5.0).sqrt();
    let y22 = (2.0 * PI / 15.0).sqrt();
    let (c0, c2) = match axis {
        Axis::X => (-y20 / 3.0, y22),
        Axis::Y => (-y20 / 3.0, -y22),
        Axis::Z => (2.0 * y20 / 3.0, 0.0),
    };

    let n = basis.len();
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for (ket, &(n_ket, m_ket)) in basis.states().iter().enumerate() {
        for dn in [-2i64, 0, 2] {
            let n_bra = i64::from(n_ket) + dn;
            if n_bra < 0 {
                continue;
            }
            let n_bra = n_bra as u32;
            for dm in [-2i32, 0, 2] {
                let m_bra = m_ket + dm;
                let Some(bra) = basis.index_of(n_bra, m_bra) else {
                    continue;
                };
                let coefficient = if dm == 0 { c0 } else { c2 };
                if coefficient == 0.0 {
                    continue;
                }
                let mut value = coefficient * gaunt_y2(n_bra, m_bra, n_ket, m_ket);
                if bra == ket {
                    value += 1.0 / 3.0;
                }
                matrix[(bra, ket)] = Complex64::new(value, 0.0);
            }
        }
    }
    // Symmetrize to remove last-bit asymmetries of the two 3j evaluations.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (matrix[(i, j)] + matrix[(j, i)]);
            matrix[(i, j)] = avg;
            matrix[(j, i)] = avg;
        }
    }
    Operator {
        basis: basis.clone(),
        matrix,
        hermitian: true,
    }
}

/// Interaction operator for linear polarization along lab x.
pub fn cos2_matrix_x(basis: &Arc<RotorBasis>) -> Operator {
    cos2_matrix(basis, Axis::X)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotor::basis::build_basis;
    use crate::rotor::species::{Parity, Species};

    fn all_basis(n_max: u32) -> Arc<RotorBasis> {
        build_basis(&Species::new("t", 1.0, 0.0, Parity::All).unwrap(), n_max).unwrap()
    }

    #[test]
    fn ground_state_expectation_is_one_third() {
        let b = all_basis(4);
        let op = cos2_matrix_x(&b);
        let i = b.index_of(0, 0).unwrap();
        assert!((op.element(i, i).re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn n1_m0_expectation_is_one_fifth() {
        let b = all_basis(4);
        let op = cos2_matrix_x(&b);
        let i = b.index_of(1, 0).unwrap();
        assert!((op.element(i, i).re - 0.2).abs() < 1e-15);
    }

    #[test]
    fn z_axis_known_diagonal() {
        // ⟨J M|cos²θ|J M⟩ = 1/3 + (2/3) (J(J+1) − 3M²)/((2J−1)(2J+3))
        let b = all_basis(6);
        let op = cos2_matrix(&b, Axis::Z);
        for &(n, m) in b.states() {
            if n == 0 {
                continue;
            }
            let (jf, mf) = (f64::from(n), f64::from(m));
            let expected =
                1.0 / 3.0 + 2.0 / 3.0 * (jf * (jf + 1.0) - 3.0 * mf * mf) / ((2.0 * jf - 1.0) * (2.0 * jf + 3.0));
            let i = b.index_of(n, m).unwrap();
            assert!((op.element(i, i).re - expected).abs() < 1e-14, "{n} {m}");
        }
    }

    #[test]
    fn structural_zeros() {
        let b = build_basis(&Species::oxygen(), 9).unwrap();
        let op = cos2_matrix_x(&b);
        for (i, &(n1, m1)) in b.states().iter().enumerate() {
            for (j, &(n2, m2)) in b.states().iter().enumerate() {
                let dn = (i64::from(n1) - i64::from(n2)).abs();
                let dm = (m1 - m2).abs();
                if !(dn == 0 || dn == 2) || !(dm == 0 || dm == 2) {
                    assert_eq!(op.element(i, j), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn operators_are_real_symmetric() {
        let b = build_basis(&Species::oxygen(), 11).unwrap();
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let op = cos2_matrix(&b, axis);
            assert!(op.is_real());
            assert_eq!(op.hermiticity_residual(), 0.0);
        }
    }

    #[test]
    fn rejects_false_hermitian_flag() {
        let b = all_basis(1);
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(Operator::new(b.clone(), m.clone(), true).is_err());
        assert!(Operator::new(b, m, false).is_ok());
    }
}
