//! Small dense complex matrices.
//!
//! These exist for verification only: gates are applied to states by index
//! transformation, and the dense form is used to check operator identities
//! (decomposition equivalence, inverses, commutation) on spaces of dimension
//! at most [`MAX_DENSE_DIM`].

use alloc::{format, vec, vec::Vec};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest composite dimension for which dense operators may be built.
pub const MAX_DENSE_DIM: usize = 4096;

/// A square, row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl SquareMatrix {
    /// All-zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::ZERO; dim * dim] }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::ONE);
        }
        m
    }

    /// Build from rows of real entries; handy for reference gates in checks.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "rows must form a square matrix");
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, C64::new(x, 0.0));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    /// Write `column` (length `dim`) into column `col`.
    pub fn set_column(&mut self, col: usize, column: &[C64]) {
        debug_assert_eq!(column.len(), self.dim);
        for (row, &v) in column.iter().enumerate() {
            self.set(row, col, v);
        }
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|row| self.get(row, col)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Naive matrix product; keep operands small.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension(format!(
                "matrix product of dimensions {} and {}",
                self.dim, rhs.dim
            )));
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == C64::ZERO {
                    continue;
                }
                for c in 0..d {
                    let v = out.get(r, c) + a * rhs.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// Kronecker product, `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let d = self.dim * rhs.dim;
        let mut out = Self::zeros(d);
        for ar in 0..self.dim {
            for ac in 0..self.dim {
                let a = self.get(ar, ac);
                if a == C64::ZERO {
                    continue;
                }
                for br in 0..rhs.dim {
                    for bc in 0..rhs.dim {
                        out.set(ar * rhs.dim + br, ac * rhs.dim + bc, a * rhs.get(br, bc));
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise modulus of `self − rhs`.
    pub fn max_entry_deviation(&self, rhs: &Self) -> Result<f64> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension(format!(
                "comparing matrices of dimensions {} and {}",
                self.dim, rhs.dim
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True if `self` deviates from the identity by less than `tol` entrywise.
    pub fn is_identity(&self, tol: f64) -> bool {
        self.max_entry_deviation(&Self::identity(self.dim))
            .map(|d| d < tol)
            .unwrap_or(false)
    }

    /// True if `U†U = I` within `tol`. Cost is `O(dim³)`; verification use only.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .mul(self)
            .map(|p| p.is_identity(tol))
            .unwrap_or(false)
    }

    /// True if every column holds exactly one nonzero entry, equal to 1.
    ///
    /// Together with column distinctness this certifies a permutation
    /// operator: basis states map to basis states with coefficient 1.
    pub fn is_permutation(&self, tol: f64) -> bool {
        let mut hit_rows = vec![false; self.dim];
        for c in 0..self.dim {
            let mut ones = 0usize;
            let mut one_row = 0usize;
            for r in 0..self.dim {
                let v = self.get(r, c);
                if (v - C64::ONE).norm() <= tol {
                    ones += 1;
                    one_row = r;
                } else if v.norm() > tol {
                    return false;
                }
            }
            if ones != 1 || hit_rows[one_row] {
                return false;
            }
            hit_rows[one_row] = true;
        }
        true
    }
}
