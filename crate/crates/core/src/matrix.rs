//! Dense row-major complex matrices and the few factorizations the crate needs.
//!
//! Singular value and QR decompositions are delegated to `nalgebra`; the
//! storage type stays row-major so it maps one-to-one onto the JSON schema.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Self { rows, cols, data }
    }

    /// Returns `None` when the rows are ragged.
    pub fn from_rows(rows: &[Vec<C64>], cols: usize) -> Option<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn scalar(z: C64) -> Self {
        Self::from_vec(1, 1, vec![z])
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn add_at(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] += z;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * z).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_F`; shapes must agree.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Copies `block` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &ComplexMatrix) {
        for i in 0..block.rows {
            let dst = (row + i) * self.cols + col;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            let src = (row + i) * self.cols + col;
            out.data[i * cols..(i + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn block_diagonal(a: &Self, b: &Self) -> Self {
        let mut out = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(a.rows, a.cols, b);
        out
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.data[i * m.ncols() + j] = m[(i, j)];
            }
        }
        out
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape());
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape());
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

pub fn vector_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨x, y⟩`, linear in the second argument.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Singular values of `a`, unordered.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.rows == 0 || a.cols == 0 {
        return Vec::new();
    }
    a.to_nalgebra()
        .singular_values_unordered()
        .iter()
        .copied()
        .collect()
}

/// Orthonormal basis of `{x : a x = 0}`.
///
/// Singular values at or below `rel_tol` times the largest one count as zero.
pub fn nullspace(a: &ComplexMatrix, rel_tol: f64) -> Vec<Vec<C64>> {
    nullspace_below(a, |largest| rel_tol * largest)
}

/// As [`nullspace`], with singular values at or below `threshold` counting as zero.
pub fn nullspace_abs(a: &ComplexMatrix, threshold: f64) -> Vec<Vec<C64>> {
    nullspace_below(a, |_| threshold)
}

fn nullspace_below(a: &ComplexMatrix, threshold: impl Fn(f64) -> f64) -> Vec<Vec<C64>> {
    let n = a.cols;
    if n == 0 {
        return Vec::new();
    }
    if a.rows == 0 || a.max_abs() == 0.0 {
        return (0..n)
            .map(|j| ComplexMatrix::identity(n).column(j))
            .collect();
    }
    // Pad with zero rows so the factorization returns all n right singular vectors.
    let padded = if a.rows < n {
        let mut p = ComplexMatrix::zeros(n, n);
        p.set_block(0, 0, a);
        p
    } else {
        a.clone()
    };
    let svd = padded.to_nalgebra().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let cut = threshold(svd.singular_values.iter().copied().fold(0.0, f64::max));
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s <= cut)
        .map(|(k, _)| (0..n).map(|j| v_t[(k, j)].conj()).collect())
        .collect()
}

/// Numerical rank with the same relative threshold convention as [`nullspace`].
pub fn rank(a: &ComplexMatrix, rel_tol: f64) -> usize {
    let s = singular_values(a);
    let scale = s.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * scale).count()
}

/// Orthonormalizes the columns of a tall matrix (thin Householder QR).
pub fn orthonormal_columns(a: &ComplexMatrix) -> ComplexMatrix {
    assert!(a.rows >= a.cols, "need at least as many rows as columns");
    if a.cols == 0 {
        return a.clone();
    }
    ComplexMatrix::from_nalgebra(&a.to_nalgebra().qr().q())
}

/// Incrementally grown orthonormal basis of a subspace of `C^dim`.
///
/// Candidates are reduced against the basis twice (classical Gram–Schmidt with
/// reorthogonalization); a candidate whose remainder falls to `rel_tol` times
/// its original norm is treated as dependent.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    dim: usize,
    rel_tol: f64,
    basis: Vec<Vec<C64>>,
}

impl SpanBasis {
    pub fn new(dim: usize, rel_tol: f64) -> Self {
        Self {
            dim,
            rel_tol,
            basis: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.basis
    }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[C64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let original = vector_norm(v);
        if original == 0.0 || self.is_full() {
            return false;
        }
        let mut w = v.to_vec();
        for _ in 0..2 {
            for b in &self.basis {
                let c = inner(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let rest = vector_norm(&w);
        if rest <= self.rel_tol * original {
            return false;
        }
        for x in &mut w {
            *x /= rest;
        }
        self.basis.push(w);
        true
    }
}
