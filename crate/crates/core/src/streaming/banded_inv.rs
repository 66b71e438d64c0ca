//! Streaming `Q N⁻¹ y`: the LDL processor feeding the product processor.

use crate::audit::BufferAudit;
use crate::error::{Error, Result};
use crate::streaming::banded_prod::StreamingBandedProdProcessor;
use crate::streaming::ldl::{PivotPolicy, StreamingLDLProcessor};

/// Composes [`StreamingLDLProcessor`] and [`StreamingBandedProdProcessor`].
///
/// Read `t` supplies basis column `t` and column `t − 1` of `N` (one behind,
/// since a column of a polynomial in the tridiagonal matrix is only
/// complete once the next coefficients are known). Once `t ≥ q` the product
/// step for column `t − q` runs. After the last basis column, `q` trailing
/// reads without a basis column drain the window.
#[derive(Debug)]
pub struct StreamingBandedInvProcessor {
    q: usize,
    ldl: StreamingLDLProcessor,
    prod: StreamingBandedProdProcessor,
    reads: usize,
}

impl StreamingBandedInvProcessor {
    /// `N` is `k×k` with half-bandwidth `q ≥ 1`; vectors have length `n`.
    pub fn new(n: usize, q: usize, k: usize, audit: Option<&BufferAudit>) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("streaming inverse needs half-bandwidth ≥ 1"));
        }
        Ok(Self {
            q,
            ldl: StreamingLDLProcessor::new(q, k, PivotPolicy::Positive),
            prod: StreamingBandedProdProcessor::new(n, q, audit),
            reads: 0,
        })
    }

    pub fn set_rhs(&mut self, y: &[f64]) -> Result<()> {
        self.prod.set_rhs(y)
    }

    pub fn reads(&self) -> usize {
        self.reads
    }

    pub fn read_stream(&mut self, basis_col: Option<&[f64]>, n_col: Option<&[f64]>) -> Result<()> {
        if let Some(col) = n_col {
            self.ldl.read_stream(col)?;
        }
        self.prod.push_column(basis_col)?;
        if self.reads >= self.q {
            let p = self.reads - self.q;
            if self.ldl.columns() <= p {
                return Err(Error::Stream(format!(
                    "product step {p} before LDL column {p}"
                )));
            }
            self.prod.step(self.ldl.d(p), self.ldl.column(p))?;
        }
        self.reads += 1;
        Ok(())
    }

    pub fn ldl(&self) -> &StreamingLDLProcessor {
        &self.ldl
    }

    pub fn product(&self) -> &StreamingBandedProdProcessor {
        &self.prod
    }

    /// The accumulated vector; every LDL column must have been used.
    pub fn into_output(self) -> Result<Vec<f64>> {
        if self.prod.steps() != self.ldl.columns() {
            return Err(Error::Stream(format!(
                "{} product steps for {} LDL columns",
                self.prod.steps(),
                self.ldl.columns()
            )));
        }
        Ok(self.prod.into_output())
    }
}
