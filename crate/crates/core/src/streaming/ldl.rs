//! Banded LDLᵀ factorization, dense reference and streaming forms.

use crate::error::{Error, Result};
use crate::linalg::banded::BandedSymmetricMatrix;
use crate::linalg::dense::DenseSymmetricMatrix;

/// Relative pivot threshold against the largest input entry seen so far.
pub const PIVOT_TOL: f64 = 1e-14;

/// Which pivots are acceptable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotPolicy {
    /// Abort on any pivot `≤ tol` (definiteness certificate).
    Positive,
    /// Abort only on `|pivot| ≤ tol`.
    Nonzero,
}

impl PivotPolicy {
    fn accepts(self, pivot: f64, tol: f64) -> bool {
        match self {
            PivotPolicy::Positive => pivot > tol,
            PivotPolicy::Nonzero => pivot.abs() > tol,
        }
    }
}

/// `N = L D Lᵀ` with unit lower-triangular banded `L`.
///
/// `lower[j][d − 1]` holds `L_{j+d, j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LDLFactorization {
    half_bandwidth: usize,
    lower: Vec<Vec<f64>>,
    diag: Vec<f64>,
}

impl LDLFactorization {
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    pub fn d(&self) -> &[f64] {
        &self.diag
    }

    /// `L_{i,j}`, including the unit diagonal and zeros outside the band.
    pub fn l(&self, i: usize, j: usize) -> f64 {
        if i == j {
            1.0
        } else if i < j || i - j > self.half_bandwidth || i >= self.order() {
            0.0
        } else {
            self.lower[j][i - j - 1]
        }
    }

    /// Subdiagonal part of column `j`, `(L_{j+1,j}, …, L_{j+q,j})`.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.lower[j]
    }

    pub fn reconstruct(&self) -> DenseSymmetricMatrix {
        let k = self.order();
        let q = self.half_bandwidth;
        DenseSymmetricMatrix::from_lower(k, |i, j| {
            let lo = i.saturating_sub(q);
            (lo..=j)
                .map(|m| self.l(i, m) * self.diag[m] * self.l(j, m))
                .sum()
        })
    }

    /// Solves `N x = r`.
    pub fn solve(&self, r: &[f64]) -> Result<Vec<f64>> {
        let k = self.order();
        if r.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: r.len(),
            });
        }
        let mut x = r.to_vec();
        for j in 0..k {
            let xj = x[j];
            for (d, &l) in self.lower[j].iter().enumerate() {
                x[j + d + 1] -= l * xj;
            }
        }
        for (xj, dj) in x.iter_mut().zip(&self.diag) {
            *xj /= dj;
        }
        for j in (0..k).rev() {
            let s: f64 = self.lower[j]
                .iter()
                .enumerate()
                .map(|(d, &l)| l * x[j + d + 1])
                .sum();
            x[j] -= s;
        }
        Ok(x)
    }
}

fn pivot_failure(policy: PivotPolicy, operation: &'static str, index: usize, pivot: f64) -> Error {
    match policy {
        PivotPolicy::Positive => Error::NonPositivePivot {
            operation,
            index,
            pivot,
        },
        PivotPolicy::Nonzero => Error::Singular { operation },
    }
}

/// Reference banded LDLᵀ: whole-matrix elimination in column order.
pub fn dense_ldl(n: &BandedSymmetricMatrix, policy: PivotPolicy) -> Result<LDLFactorization> {
    let k = n.order();
    let q = n.half_bandwidth();
    let mut diag = vec![0.0; k];
    let mut lower: Vec<Vec<f64>> = (0..k).map(|j| vec![0.0; q.min(k - 1 - j)]).collect();
    let mut running_max = 0.0_f64;
    for j in 0..k {
        for i in j..k.min(j + q + 1) {
            running_max = running_max.max(n.get(i, j).abs());
        }
        let lo = j.saturating_sub(q);
        let mut dj = n.get(j, j);
        for m in lo..j {
            let ljm = lower[m][j - m - 1];
            dj -= ljm * ljm * diag[m];
        }
        if !policy.accepts(dj, PIVOT_TOL * running_max) {
            return Err(pivot_failure(policy, "banded LDL", j, dj));
        }
        diag[j] = dj;
        for i in j + 1..k.min(j + q + 1) {
            let mut s = n.get(i, j);
            for m in i.saturating_sub(q)..j {
                s -= lower[m][i - m - 1] * lower[m][j - m - 1] * diag[m];
            }
            lower[j][i - j - 1] = s / dj;
        }
    }
    Ok(LDLFactorization {
        half_bandwidth: q,
        lower,
        diag,
    })
}

/// Column-at-a-time LDLᵀ of a `k×k` matrix of half-bandwidth `q`.
///
/// Column `j` arrives in banded layout `(N_{j,j}, N_{j+1,j}, …, N_{j+q,j})`;
/// entries whose row is `≥ k` are ignored.
#[derive(Debug, Clone)]
pub struct StreamingLDLProcessor {
    order: usize,
    policy: PivotPolicy,
    factor: LDLFactorization,
    running_max: f64,
}

impl StreamingLDLProcessor {
    pub fn new(q: usize, k: usize, policy: PivotPolicy) -> Self {
        Self {
            order: k,
            policy,
            factor: LDLFactorization {
                half_bandwidth: q,
                lower: Vec::with_capacity(k),
                diag: Vec::with_capacity(k),
            },
            running_max: 0.0,
        }
    }

    /// Columns consumed so far.
    pub fn columns(&self) -> usize {
        self.factor.diag.len()
    }

    pub fn d(&self, j: usize) -> f64 {
        self.factor.diag[j]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        self.factor.column(j)
    }

    pub fn read_stream(&mut self, col: &[f64]) -> Result<()> {
        let q = self.factor.half_bandwidth;
        let j = self.columns();
        if j >= self.order {
            return Err(Error::Stream(format!(
                "LDL received column {j} of a {0}x{0} matrix",
                self.order
            )));
        }
        if col.len() < q + 1 {
            return Err(Error::DimensionMismatch {
                expected: q + 1,
                found: col.len(),
            });
        }
        let rows = (q + 1).min(self.order - j);
        let col = &col[..rows];
        self.running_max = col.iter().fold(self.running_max, |m, v| m.max(v.abs()));

        let f = &self.factor;
        let lo = j.saturating_sub(q);
        let mut dj = col[0];
        for m in lo..j {
            let ljm = f.lower[m][j - m - 1];
            dj -= ljm * ljm * f.diag[m];
        }
        if !self.policy.accepts(dj, PIVOT_TOL * self.running_max) {
            return Err(pivot_failure(self.policy, "streaming LDL", j, dj));
        }
        let mut lcol = vec![0.0; rows - 1];
        for (d, slot) in lcol.iter_mut().enumerate() {
            let i = j + d + 1;
            let mut s = col[d + 1];
            for m in i.saturating_sub(q)..j {
                s -= f.lower[m][i - m - 1] * f.lower[m][j - m - 1] * f.diag[m];
            }
            *slot = s / dj;
        }
        self.factor.diag.push(dj);
        self.factor.lower.push(lcol);
        Ok(())
    }

    /// The factorization of the leading block consumed so far.
    pub fn factorization(&self) -> &LDLFactorization {
        &self.factor
    }
}
