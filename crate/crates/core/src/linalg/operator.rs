//! Symmetric linear operators accessed only through matrix-vector products.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::linalg::dense::DenseSymmetricMatrix;

/// A real symmetric linear map `x ↦ A x` of fixed dimension.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;

    /// `y ← A x`
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// `y ← A x − s·y`.
    ///
    /// The Lanczos short recurrence uses this to overwrite the previous basis
    /// vector in place. The default goes through a scratch buffer owned by
    /// the operator call; concrete operators override it to work in place.
    fn apply_sub(&self, x: &[f64], s: f64, y: &mut [f64]) {
        let mut ax = vec![0.0; self.dim()];
        self.apply(x, &mut ax);
        for (yi, ai) in y.iter_mut().zip(&ax) {
            *yi = ai - s * *yi;
        }
    }
}

impl<T: SymmetricOperator + ?Sized> SymmetricOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
    fn apply_sub(&self, x: &[f64], s: f64, y: &mut [f64]) {
        (**self).apply_sub(x, s, y)
    }
}

/// `A = diag(λ)`. Exact matrix functions are available entrywise.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    eigenvalues: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::invalid(
                "diagonal operator needs at least one eigenvalue",
            ));
        }
        if let Some(bad) = eigenvalues.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite eigenvalue {bad}")));
        }
        Ok(Self { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `[λ_min, λ_max]`
    pub fn extremes(&self) -> (f64, f64) {
        self.eigenvalues
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// `f(A) b` computed entrywise.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: b.len(),
            });
        }
        self.eigenvalues
            .iter()
            .zip(b)
            .map(|(&lam, &bi)| {
                let v = f(lam);
                if v.is_finite() {
                    Ok(v * bi)
                } else {
                    Err(Error::FunctionUndefined { at: lam })
                }
            })
            .collect()
    }
}

impl SymmetricOperator for DiagonalOperator {
    fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, xi), lam) in y.iter_mut().zip(x).zip(&self.eigenvalues) {
            *yi = lam * xi;
        }
    }

    fn apply_sub(&self, x: &[f64], s: f64, y: &mut [f64]) {
        for ((yi, xi), lam) in y.iter_mut().zip(x).zip(&self.eigenvalues) {
            *yi = lam * xi - s * *yi;
        }
    }
}

/// Sparse symmetric matrix stored as lower-triangle coordinate triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricOperator {
    dim: usize,
    triplets: Vec<(usize, usize, f64)>,
}

impl SparseSymmetricOperator {
    /// Entries above the diagonal are mirrored into the lower triangle;
    /// repeated coordinates are summed on application.
    pub fn from_triplets(dim: usize, triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("sparse operator dimension must be positive"));
        }
        let mut lower = Vec::with_capacity(triplets.len());
        for (i, j, v) in triplets {
            if i >= dim || j >= dim {
                return Err(Error::invalid(format!(
                    "entry ({i}, {j}) outside a {dim}x{dim} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::invalid(format!("non-finite entry at ({i}, {j})")));
            }
            lower.push(if i >= j { (i, j, v) } else { (j, i, v) });
        }
        Ok(Self {
            dim,
            triplets: lower,
        })
    }

    pub fn triplets(&self) -> &[(usize, usize, f64)] {
        &self.triplets
    }

    pub fn to_dense(&self) -> DenseSymmetricMatrix {
        let mut m = DenseSymmetricMatrix::zeros(self.dim);
        for &(i, j, v) in &self.triplets {
            let cur = m.get(i, j);
            m.set(i, j, cur + v);
        }
        m
    }
}

impl SymmetricOperator for SparseSymmetricOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        self.apply_sub(x, 0.0, y);
    }

    fn apply_sub(&self, x: &[f64], s: f64, y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v *= -s);
        for &(i, j, v) in &self.triplets {
            y[i] += v * x[j];
            if i != j {
                y[j] += v * x[i];
            }
        }
    }
}

/// `B = A² + c I`, applied as two products with `A`.
#[derive(Debug, Clone)]
pub struct SquaredShifted<Op> {
    inner: Op,
    shift: f64,
}

impl<Op: SymmetricOperator> SquaredShifted<Op> {
    pub fn new(inner: Op, shift: f64) -> Self {
        Self { inner, shift }
    }
}

impl<Op: SymmetricOperator> SymmetricOperator for SquaredShifted<Op> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut tmp = vec![0.0; self.dim()];
        self.inner.apply(x, &mut tmp);
        self.inner.apply(&tmp, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += self.shift * xi;
        }
    }
}

/// Wraps an operator and counts products with it.
#[derive(Debug)]
pub struct CountingOperator<Op> {
    inner: Op,
    count: Cell<usize>,
}

impl<Op> CountingOperator<Op> {
    pub fn new(inner: Op) -> Self {
        Self {
            inner,
            count: Cell::new(0),
        }
    }

    pub fn count(&self) -> usize {
        self.count.get()
    }
}

impl<Op: SymmetricOperator> SymmetricOperator for CountingOperator<Op> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.count.set(self.count.get() + 1);
        self.inner.apply(x, y)
    }
    fn apply_sub(&self, x: &[f64], s: f64, y: &mut [f64]) {
        self.count.set(self.count.get() + 1);
        self.inner.apply_sub(x, s, y)
    }
}
