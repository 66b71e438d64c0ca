//! Symmetric banded storage, diagonal-major.

use crate::linalg::dense::DenseSymmetricMatrix;

/// Symmetric `k×k` matrix with half-bandwidth `q`.
///
/// Diagonal `d` is stored in `diags[d]`, whose entry `j` is `(j + d, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetricMatrix {
    order: usize,
    diags: Vec<Vec<f64>>,
}

impl BandedSymmetricMatrix {
    pub fn zeros(order: usize, half_bandwidth: usize) -> Self {
        let diags = (0..=half_bandwidth)
            .map(|d| vec![0.0; order.saturating_sub(d)])
            .collect();
        Self { order, diags }
    }

    /// Symmetric tridiagonal from its diagonal and first off-diagonal.
    pub fn from_tridiagonal(alphas: &[f64], betas: &[f64]) -> Self {
        let k = alphas.len();
        let mut m = Self::zeros(k, 1);
        m.diags[0].copy_from_slice(alphas);
        let off = k.saturating_sub(1);
        m.diags[1].copy_from_slice(&betas[..off]);
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn half_bandwidth(&self) -> usize {
        self.diags.len() - 1
    }

    pub fn diagonal(&self, d: usize) -> &[f64] {
        &self.diags[d]
    }

    pub fn diagonal_mut(&mut self, d: usize) -> &mut [f64] {
        &mut self.diags[d]
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.half_bandwidth() || r >= self.order {
            0.0
        } else {
            self.diags[d][c]
        }
    }

    /// Sets `(i, j)` and its mirror.
    ///
    /// # Panics
    /// If `|i − j|` exceeds the half-bandwidth.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        assert!(
            d <= self.half_bandwidth(),
            "({i}, {j}) lies outside the band"
        );
        self.diags[d][c] = v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.diags[0].iter().zip(x).map(|(a, b)| a * b).collect();
        for (d, diag) in self.diags.iter().enumerate().skip(1) {
            for (c, &v) in diag.iter().enumerate() {
                y[c + d] += v * x[c];
                y[c] += v * x[c + d];
            }
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.diags
            .iter()
            .flatten()
            .fold(0.0, |m: f64, v| m.max(v.abs()))
    }
}

/// Dense copy of a banded matrix.
pub fn banded_to_dense(b: &BandedSymmetricMatrix) -> DenseSymmetricMatrix {
    let mut m = DenseSymmetricMatrix::zeros(b.order());
    for (d, diag) in b.diags.iter().enumerate() {
        for (c, &v) in diag.iter().enumerate() {
            m.set(c + d, c, v);
        }
    }
    m
}
