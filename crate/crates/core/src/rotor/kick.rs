// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Impulsive kick propagators exp(i·P·A) for hermitian A.
//!
//! The operator is split into the connected components of its sparsity
//! pattern (for cos² operators: the two M-parity sectors) and each block is
//! diagonalized once. Unitaries for any kick strength are then assembled from
//! the stored spectrum, and components never mix, not even by rounding.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::basis::RotorBasis;
use super::operator::Operator;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct SpectralBlock {
    indices: Vec<usize>,
    values: DVector<f64>,
    vectors: DMatrix<Complex64>,
}

/// One invariant block of a unitary, stored as real and imaginary parts.
#[derive(Clone, Debug)]
pub struct UnitaryBlock {
    /// Basis indices spanned by the block, ascending.
    pub indices: Vec<usize>,
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

/// Block eigendecomposition of a hermitian operator.
#[derive(Clone, Debug)]
pub struct KickSpectrum {
    basis: Arc<RotorBasis>,
    blocks: Vec<SpectralBlock>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components of the nonzero pattern, each sorted, ordered by
/// their smallest index.
fn components(matrix: &DMatrix<Complex64>) -> Vec<Vec<usize>> {
    let n = matrix.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    for j in 0..n {
        for i in 0..j {
            if matrix[(i, j)] != Complex64::new(0.0, 0.0) || matrix[(j, i)] != Complex64::new(0.0, 0.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|g| g[0]);
    out
}

impl KickSpectrum {
    pub fn new(op: &Operator) -> Result<Self> {
        if !op.is_hermitian() {
            return Err(Error::invalid("kick operator must be hermitian"));
        }
        let matrix = op.matrix();
        let real = op.is_real();
        let blocks = components(matrix)
            .into_iter()
            .map(|indices| {
                let k = indices.len();
                if real {
                    let sub = DMatrix::from_fn(k, k, |a, b| matrix[(indices[a], indices[b])].re);
                    let eig = SymmetricEigen::new(sub);
                    SpectralBlock {
                        indices,
                        values: eig.eigenvalues,
                        vectors: eig.eigenvectors.map(|x| Complex64::new(x, 0.0)),
                    }
                } else {
                    let sub = DMatrix::from_fn(k, k, |a, b| matrix[(indices[a], indices[b])]);
                    let eig = SymmetricEigen::new(sub);
                    SpectralBlock {
                        indices,
                        values: eig.eigenvalues,
                        vectors: eig.eigenvectors,
                    }
                }
            })
            .collect();
        Ok(KickSpectrum {
            basis: op.basis().clone(),
            blocks,
        })
    }

    pub fn basis(&self) -> &Arc<RotorBasis> {
        &self.basis
    }

    /// Basis indices of each invariant block.
    pub fn block_indices(&self) -> impl Iterator<Item = &[usize]> {
        self.blocks.iter().map(|b| b.indices.as_slice())
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks of exp(i·P·A). P = 0 gives exact identity blocks.
    pub fn unitary_blocks(&self, p: f64) -> Vec<UnitaryBlock> {
        self.blocks
            .iter()
            .map(|block| {
                let k = block.indices.len();
                if p == 0.0 {
                    return UnitaryBlock {
                        indices: block.indices.clone(),
                        re: DMatrix::identity(k, k),
                        im: DMatrix::zeros(k, k),
                    };
                }
                let phases = block.values.map(|lambda| Complex64::from_polar(1.0, p * lambda));
                let mut scaled = block.vectors.clone();
                for (mut col, phase) in scaled.column_iter_mut().zip(phases.iter()) {
                    col *= *phase;
                }
                let u = scaled * block.vectors.adjoint();
                UnitaryBlock {
                    indices: block.indices.clone(),
                    re: u.map(|z| z.re),
                    im: u.map(|z| z.im),
                }
            })
            .collect()
    }

    /// Full matrix of exp(i·P·A).
    pub fn unitary(&self, p: f64) -> Operator {
        let n = self.basis.len();
        let mut matrix = DMatrix::<Complex64>::zeros(n, n);
        for block in self.unitary_blocks(p) {
            for (a, &i) in block.indices.iter().enumerate() {
                for (b, &j) in block.indices.iter().enumerate() {
                    matrix[(i, j)] = Complex64::new(block.re[(a, b)], block.im[(a, b)]);
                }
            }
        }
        Operator::new(self.basis.clone(), matrix, false).expect("dimensions match the basis")
    }
}

/// exp(i·P·A) for hermitian A, by eigendecomposition.
pub fn kick_unitary(op: &Operator, p: f64) -> Result<Operator> {
    if !p.is_finite() {
        return Err(Error::invalid(format!("kick strength must be finite, got {p}")));
    }
    let spectrum = KickSpectrum::new(op)?;
    Ok(spectrum.unitary(p))
}

/// Kick unitaries of one operator, keyed by kick strength.
///
/// Lookups take a read lock; a miss computes the unitary outside any lock and
/// inserts it. Warm the cache with [`KickCache::prepare`] before sharing it
/// across workers.
#[derive(Debug)]
pub struct KickCache {
    spectrum: KickSpectrum,
    entries: RwLock<HashMap<u64, Arc<[UnitaryBlock]>>>,
}

fn strength_key(p: f64) -> u64 {
    // +0.0 and -0.0 are the same kick
    if p == 0.0 {
        0
    } else {
        p.to_bits()
    }
}

impl KickCache {
    pub fn new(op: &Operator) -> Result<Self> {
        Ok(KickCache {
            spectrum: KickSpectrum::new(op)?,
            entries: RwLock::new(HashMap::new()),
        })
    }

    pub fn spectrum(&self) -> &KickSpectrum {
        &self.spectrum
    }

    pub fn basis(&self) -> &Arc<RotorBasis> {
        self.spectrum.basis()
    }

    pub fn get(&self, p: f64) -> Arc<[UnitaryBlock]> {
        let key = strength_key(p);
        if let Some(hit) = self.entries.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let blocks: Arc<[UnitaryBlock]> = self.spectrum.unitary_blocks(p).into();
        self.entries
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert(blocks)
            .clone()
    }

    pub fn prepare(&self, strengths: impl IntoIterator<Item = f64>) {
        for p in strengths {
            self.get(p);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotor::basis::build_basis;
    use crate::rotor::operator::cos2_matrix_x;
    use crate::rotor::species::{Parity, Species};

    #[test]
    fn zero_strength_is_exact_identity() {
        let b = build_basis(&Species::oxygen(), 7).unwrap();
        let u = kick_unitary(&cos2_matrix_x(&b), 0.0).unwrap();
        let n = b.len();
        assert_eq!(u.matrix(), &DMatrix::<Complex64>::identity(n, n));
    }

    #[test]
    fn small_strength_matches_first_order() {
        let b = build_basis(&Species::oxygen(), 9).unwrap();
        let op = cos2_matrix_x(&b);
        let p = 1e-3;
        let u = kick_unitary(&op, p).unwrap();
        let n = b.len();
        let linear = DMatrix::<Complex64>::identity(n, n) + op.matrix() * Complex64::new(0.0, p);
        let residual = (u.matrix() - linear).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        assert!(residual < p * p, "{residual}");
        assert!(residual > 1e-3 * p * p);
    }

    #[test]
    fn strong_kick_is_unitary() {
        let b = build_basis(&Species::oxygen(), 29).unwrap();
        let u = kick_unitary(&cos2_matrix_x(&b), 7.0).unwrap();
        assert!(u.unitarity_residual() < 1e-10);
    }

    #[test]
    fn cos2_x_splits_into_m_parity_blocks() {
        let b = build_basis(&Species::oxygen(), 7).unwrap();
        let spectrum = KickSpectrum::new(&cos2_matrix_x(&b)).unwrap();
        assert_eq!(spectrum.block_count(), 2);
        for block in spectrum.block_indices() {
            let parity = b.state(block[0]).1.rem_euclid(2);
            assert!(block.iter().all(|&i| b.state(i).1.rem_euclid(2) == parity));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let b = build_basis(&Species::new("t", 1.0, 0.0, Parity::All).unwrap(), 1).unwrap();
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        let op = Operator::new(b, m, false).unwrap();
        assert!(matches!(kick_unitary(&op, 1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn complex_hermitian_input() {
        let b = build_basis(&Species::oxygen(), 5).unwrap();
        let op = cos2_matrix_x(&b).rotated_z(0.3);
        assert!(!op.is_real());
        let u = kick_unitary(&op, 2.0).unwrap();
        assert!(u.unitarity_residual() < 1e-12);
        // rotating the kick equals rotating the unitary
        let reference = kick_unitary(&cos2_matrix_x(&b), 2.0).unwrap().rotated_z(0.3);
        let diff = (u.matrix() - reference.matrix())
            .iter()
            .fold(0.0f64, |a, z| a.max(z.norm()));
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn cache_reuses_entries() {
        let b = build_basis(&Species::oxygen(), 7).unwrap();
        let cache = KickCache::new(&cos2_matrix_x(&b)).unwrap();
        let a = cache.get(1.5);
        let again = cache.get(1.5);
        assert!(Arc::ptr_eq(&a, &again));
        cache.get(0.0);
        cache.get(-0.0);
        assert_eq!(cache.len(), 2);
    }
}
