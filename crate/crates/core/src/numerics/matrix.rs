use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use faer::linalg::matmul::matmul;
use faer::{Accum, MatMut, MatRef, Par};
use num_complex::Complex64;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// All-zero matrix.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    /// Builds a matrix from `f(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Wraps row-major data; `None` if the length is not a perfect square.
    pub fn from_row_major(data: Vec<Complex64>) -> Option<Self> {
        let dim = libm::sqrt(data.len() as f64) as usize;
        let dim = (dim.saturating_sub(1)..=dim + 1).find(|d| d * d == data.len())?;
        Some(Self { dim, data })
    }

    /// Number of rows (and columns).
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Mutable row-major entries.
    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Row `i` as a slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Row `i` as a mutable slice.
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Main diagonal.
    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).collect()
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.data[j * self.dim + i].conj())
    }

    /// `true` when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self − other`.
    ///
    /// # Panics
    /// If the dimensions differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|A_ij − δ_ij|`.
    pub fn distance_from_identity(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.data[i * n + j] - target).norm());
            }
        }
        worst
    }

    /// `Σ_ij A_ij B_ji`, i.e. `Tr[AB]`, without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let row = self.row(i);
            for (j, a) in row.iter().enumerate() {
                acc += a * other.data[j * n + i];
            }
        }
        acc
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = Self::zeros(self.dim);
        matmul(
            out.view_mut(),
            Accum::Replace,
            self.view(),
            rhs.view(),
            Complex64::new(1.0, 0.0),
            Par::Seq,
        );
        out
    }

    /// `self · rhs†`.
    pub fn matmul_adjoint(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = Self::zeros(self.dim);
        matmul(
            out.view_mut(),
            Accum::Replace,
            self.view(),
            rhs.view().adjoint(),
            Complex64::new(1.0, 0.0),
            Par::Seq,
        );
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Read-only view for the linear algebra backend.
    pub fn view(&self) -> MatRef<'_, Complex64> {
        MatRef::from_row_major_slice(&self.data, self.dim, self.dim)
    }

    /// Mutable view for the linear algebra backend.
    pub fn view_mut(&mut self) -> MatMut<'_, Complex64> {
        MatMut::from_row_major_slice_mut(&mut self.data, self.dim, self.dim)
    }

    /// Smallest `b` such that every entry with `|i − j| > b` has modulus at most `cutoff`.
    pub fn bandwidth(&self, cutoff: f64) -> usize {
        let n = self.dim;
        let mut band = 0;
        for i in 0..n {
            let row = self.row(i);
            if let Some(j) = (0..n).rev().find(|&j| row[j].norm() > cutoff) {
                band = band.max(j.abs_diff(i));
            }
            if let Some(j) = (0..n).find(|&j| row[j].norm() > cutoff) {
                band = band.max(j.abs_diff(i));
            }
        }
        band
    }

    /// `self · x · self†` treating `self` as banded with half-width `band`.
    ///
    /// Entries of `self` outside the band are ignored; with `band ≥ dim − 1`
    /// this is the dense product.
    pub fn conjugate_banded(&self, band: usize, x: &Self) -> Self {
        assert_eq!(self.dim, x.dim, "dimension mismatch");
        let n = self.dim;
        let block = 192usize;
        let one = Complex64::new(1.0, 0.0);
        let d = self.view();
        let mut y = Self::zeros(n);
        {
            let xv = x.view();
            let mut yv = y.view_mut();
            let mut r0 = 0;
            while r0 < n {
                let r1 = (r0 + block).min(n);
                let c0 = r0.saturating_sub(band);
                let c1 = (r1 + band).min(n);
                matmul(
                    yv.as_mut().submatrix_mut(r0, 0, r1 - r0, n),
                    Accum::Replace,
                    d.submatrix(r0, c0, r1 - r0, c1 - c0),
                    xv.submatrix(c0, 0, c1 - c0, n),
                    one,
                    Par::Seq,
                );
                r0 = r1;
            }
        }
        let mut z = Self::zeros(n);
        {
            let yv = y.view();
            let mut zv = z.view_mut();
            let mut r0 = 0;
            while r0 < n {
                let r1 = (r0 + block).min(n);
                let c0 = r0.saturating_sub(band);
                let c1 = (r1 + band).min(n);
                matmul(
                    zv.as_mut().submatrix_mut(0, r0, n, r1 - r0),
                    Accum::Replace,
                    yv.submatrix(0, c0, n, c1 - c0),
                    d.submatrix(r0, c0, r1 - r0, c1 - c0).adjoint(),
                    one,
                    Par::Seq,
                );
                r0 = r1;
            }
        }
        z
    }

    /// Replaces `A` by `(A + A†)/2`.
    pub fn hermitize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            let d = self.data[i * n + i];
            self.data[i * n + i] = Complex64::new(d.re, 0.0);
            for j in (i + 1)..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}
