//! Small dense matrices: just enough for Haar rotations and bilinear forms.

use std::ops::{Index, IndexMut};

use crate::error::{check_len, domain, Result};
use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Real> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[F]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_len(c, row.len())?;
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[F]) -> Result<Vec<F>> {
        check_len(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &Matrix<F>) -> Result<Self> {
        check_len(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == F::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs_diff(&self, other: &Matrix<F>) -> F {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(F::zero(), F::max)
    }

    pub fn is_symmetric(&self, tol: F) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[F], y: &[F]) -> Result<F> {
        check_len(self.rows, x.len())?;
        let ay = self.mul_vec(y)?;
        Ok(dot(x, &ay))
    }

    pub fn scale_column(&mut self, j: usize, s: F) {
        for i in 0..self.rows {
            self[(i, j)] *= s;
        }
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> Result<F> {
        if !self.is_square() {
            return domain("determinant of a non-square matrix");
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = F::one();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| {
                    a[(i, k)]
                        .abs()
                        .partial_cmp(&a[(j, k)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(k);
            if a[(pivot, k)] == F::zero() {
                return Ok(F::zero());
            }
            if pivot != k {
                for j in 0..n {
                    a.data.swap(k * n + j, pivot * n + j);
                }
                det = -det;
            }
            let d = a[(k, k)];
            det *= d;
            for i in (k + 1)..n {
                let f = a[(i, k)] / d;
                for j in (k + 1)..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        Ok(det)
    }

    /// Householder QR of a square matrix. Returns `(Q, diag(R))`.
    pub fn householder_qr(&self) -> Result<(Matrix<F>, Vec<F>)> {
        if !self.is_square() {
            return domain("householder_qr expects a square matrix");
        }
        let n = self.rows;
        let mut r = self.clone();
        let mut q = Matrix::identity(n);
        let mut v = vec![F::zero(); n];
        for k in 0..n.saturating_sub(1) {
            let norm = (k..n).map(|i| r[(i, k)] * r[(i, k)]).sum::<F>().sqrt();
            if norm == F::zero() {
                continue;
            }
            let alpha = if r[(k, k)] > F::zero() { -norm } else { norm };
            for i in 0..n {
                v[i] = if i < k { F::zero() } else { r[(i, k)] };
            }
            v[k] -= alpha;
            let vnorm2: F = (k..n).map(|i| v[i] * v[i]).sum();
            if vnorm2 == F::zero() {
                continue;
            }
            let two = F::lit(2.0);
            // R <- (I - 2vvᵀ/vᵀv) R
            for j in 0..n {
                let s: F = (k..n).map(|i| v[i] * r[(i, j)]).sum();
                let f = two * s / vnorm2;
                for i in k..n {
                    r[(i, j)] -= f * v[i];
                }
            }
            // Q <- Q (I - 2vvᵀ/vᵀv)
            for i in 0..n {
                let s: F = (k..n).map(|j| q[(i, j)] * v[j]).sum();
                let f = two * s / vnorm2;
                for j in k..n {
                    q[(i, j)] -= f * v[j];
                }
            }
        }
        let diag = (0..n).map(|i| r[(i, i)]).collect();
        Ok((q, diag))
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<F: Real>(x: &[F], y: &[F]) -> F {
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

pub fn norm2<F: Real>(x: &[F]) -> F {
    dot(x, x).sqrt()
}
