//! Small dense matrices (k×k projected problems).

use crate::error::{Error, Result};
use crate::linalg::operator::SymmetricOperator;

/// Row-major general dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `selfᵀ v`
    pub fn transpose_matvec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate().take(self.rows) {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(l, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Dense symmetric matrix; `set` writes both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetricMatrix {
    inner: DenseMatrix,
}

impl DenseSymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            inner: DenseMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DenseMatrix::identity(n),
        }
    }

    /// Builds from `f(i, j)` evaluated on the lower triangle.
    pub fn from_lower(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Accepts a square matrix whose entries are symmetric to `1e-12` relative.
    pub fn try_from_dense(m: DenseMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        for i in 0..m.rows() {
            for j in 0..i {
                if (m.get(i, j) - m.get(j, i)).abs() > 1e-12 * scale {
                    return Err(Error::invalid(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let mut out = Self::zeros(m.rows());
        for i in 0..m.rows() {
            for j in 0..=i {
                out.set(i, j, m.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn order(&self) -> usize {
        self.inner.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner.get(i, j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.inner.set(i, j, v);
        self.inner.set(j, i, v);
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        self.inner.matvec(v)
    }

    pub fn frobenius(&self) -> f64 {
        self.inner.frobenius()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }
}

impl SymmetricOperator for DenseSymmetricMatrix {
    fn dim(&self) -> usize {
        self.order()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.inner.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn apply_sub(&self, x: &[f64], s: f64, y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let ax: f64 = self.inner.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
            *yi = ax - s * *yi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_set_writes_both_triangles() {
        let mut m = DenseSymmetricMatrix::zeros(3);
        m.set(2, 0, 4.0);
        assert_eq!(m.get(0, 2), 4.0);
        assert_eq!(m.get(2, 0), 4.0);
    }

    #[test]
    fn try_from_dense_rejects_asymmetry() {
        let m = DenseMatrix::from_fn(2, 2, |i, j| (i * 2 + j) as f64);
        assert!(DenseSymmetricMatrix::try_from_dense(m).is_err());
        let s = DenseMatrix::from_fn(2, 2, |i, j| (i + j) as f64);
        assert!(DenseSymmetricMatrix::try_from_dense(s).is_ok());
    }

    #[test]
    fn products() {
        let a = DenseMatrix::from_fn(2, 3, |i, j| (i * 3 + j) as f64);
        let at = a.transpose();
        let g = at.matmul(&a);
        assert_eq!(g.get(0, 0), 9.0);
        assert_eq!(a.transpose_matvec(&[1.0, 1.0]), at.matvec(&[1.0, 1.0]));
    }
}
