//! Streaming evaluation of `Q L⁻ᵀ D⁻¹ L⁻¹ y` from a sliding window of basis columns.

use std::collections::VecDeque;

use crate::audit::{BufferAudit, TrackedVec};
use crate::error::{Error, Result};
use crate::linalg::vector::axpy;

/// Accumulates `Q N⁻¹ y` for `N = L D Lᵀ` of half-bandwidth `q` and a
/// right-hand side `y` supported on its first `q + 1` entries.
///
/// The window holds `q + 1` partially reduced columns of `X = Q L⁻ᵀ`: at
/// step `p` its front is the finished column `X[:, p]` and entry `i` is
/// `Q[:, p+i]` minus the contributions of finished columns. The vector `ȳ`
/// plays the same role for `L⁻¹ y`.
#[derive(Debug)]
pub struct StreamingBandedProdProcessor {
    n: usize,
    q: usize,
    window: VecDeque<TrackedVec>,
    spare: Option<TrackedVec>,
    ybar: VecDeque<f64>,
    rhs_set: bool,
    out: TrackedVec,
    forward: Vec<f64>,
    audit: Option<BufferAudit>,
}

impl StreamingBandedProdProcessor {
    pub fn new(n: usize, q: usize, audit: Option<&BufferAudit>) -> Self {
        Self {
            n,
            q,
            window: VecDeque::with_capacity(q + 1),
            spare: None,
            ybar: VecDeque::with_capacity(q + 1),
            rhs_set: false,
            out: TrackedVec::zeros(n, audit),
            forward: Vec::new(),
            audit: audit.cloned(),
        }
    }

    /// Sets `y`; entries past `q` are ignored (they must be zero).
    pub fn set_rhs(&mut self, y: &[f64]) -> Result<()> {
        if self.rhs_set {
            return Err(Error::Stream("right-hand side already set".into()));
        }
        self.ybar = (0..=self.q)
            .map(|i| y.get(i).copied().unwrap_or(0.0))
            .collect();
        self.rhs_set = true;
        Ok(())
    }

    /// Window occupancy.
    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// Appends the next basis column; `None` appends a zero column.
    pub fn push_column(&mut self, col: Option<&[f64]>) -> Result<()> {
        if self.window.len() > self.q {
            return Err(Error::Stream("product window is full".into()));
        }
        let mut buf = self
            .spare
            .take()
            .unwrap_or_else(|| TrackedVec::zeros(self.n, self.audit.as_ref()));
        match col {
            Some(c) => {
                if c.len() != self.n {
                    return Err(Error::DimensionMismatch {
                        expected: self.n,
                        found: c.len(),
                    });
                }
                buf.copy_from_slice(c);
            }
            None => buf.iter_mut().for_each(|v| *v = 0.0),
        }
        self.window.push_back(buf);
        Ok(())
    }

    /// Finishes column `p` given `d_p` and `(L_{p+1,p}, …, L_{p+q,p})`
    /// (shorter near the end of the matrix; missing entries are zero).
    pub fn step(&mut self, d: f64, lcol: &[f64]) -> Result<()> {
        if !self.rhs_set {
            return Err(Error::Stream("product step before right-hand side".into()));
        }
        if self.window.len() != self.q + 1 {
            return Err(Error::Stream(format!(
                "product step needs {} window columns, have {}",
                self.q + 1,
                self.window.len()
            )));
        }
        let front = self.window.pop_front().expect("window checked nonempty");
        let y0 = self.ybar.pop_front().expect("ȳ has q + 1 entries");
        self.forward.push(y0);
        axpy(y0 / d, &front, &mut self.out);
        for (i, col) in self.window.iter_mut().enumerate() {
            let l = lcol.get(i).copied().unwrap_or(0.0);
            if l != 0.0 {
                axpy(-l, &front, col);
            }
        }
        for (i, yi) in self.ybar.iter_mut().enumerate() {
            *yi -= y0 * lcol.get(i).copied().unwrap_or(0.0);
        }
        self.ybar.push_back(0.0);
        self.spare = Some(front);
        Ok(())
    }

    /// Completed steps.
    pub fn steps(&self) -> usize {
        self.forward.len()
    }

    /// `(L⁻¹ y)_p` for every completed step `p`.
    pub fn forward_solution(&self) -> &[f64] {
        &self.forward
    }

    pub fn output(&self) -> &[f64] {
        &self.out
    }

    pub fn into_output(self) -> Vec<f64> {
        let Self { out, .. } = self;
        out.into_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::banded::BandedSymmetricMatrix;
    use crate::streaming::ldl::{dense_ldl, PivotPolicy};

    #[test]
    fn matches_dense_solve() {
        let k = 6;
        let q = 2;
        let n = 4;
        let mut m = BandedSymmetricMatrix::zeros(k, q);
        for j in 0..k {
            m.set(j, j, 6.0 + j as f64);
            if j + 1 < k {
                m.set(j + 1, j, 1.0 - 0.1 * j as f64);
            }
            if j + 2 < k {
                m.set(j + 2, j, 0.3);
            }
        }
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|j| (0..n).map(|i| ((i + 2 * j) % 5) as f64 - 2.0).collect())
            .collect();
        let y = [1.0, -0.5, 0.25];
        let f = dense_ldl(&m, PivotPolicy::Positive).unwrap();
        let mut yfull = vec![0.0; k];
        yfull[..3].copy_from_slice(&y);
        let c = f.solve(&yfull).unwrap();
        let mut expect = vec![0.0; n];
        for (col, cj) in cols.iter().zip(&c) {
            axpy(*cj, col, &mut expect);
        }

        let audit = BufferAudit::new();
        let mut p = StreamingBandedProdProcessor::new(n, q, Some(&audit));
        p.set_rhs(&y).unwrap();
        for t in 0..k + q {
            p.push_column(cols.get(t).map(Vec::as_slice)).unwrap();
            if t >= q {
                let j = t - q;
                p.step(f.d()[j], f.column(j)).unwrap();
            }
        }
        assert_eq!(p.steps(), k);
        assert!(audit.peak() <= q + 2);
        for (a, b) in p.output().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn protocol_errors() {
        let mut p = StreamingBandedProdProcessor::new(2, 1, None);
        p.push_column(Some(&[1.0, 0.0])).unwrap();
        p.push_column(Some(&[0.0, 1.0])).unwrap();
        assert!(p.step(1.0, &[0.0]).is_err());
        p.set_rhs(&[1.0]).unwrap();
        assert!(p.set_rhs(&[1.0]).is_err());
        assert!(p.push_column(None).is_err());
        p.step(2.0, &[0.0]).unwrap();
        assert_eq!(p.output(), &[0.5, 0.0]);
    }
}
