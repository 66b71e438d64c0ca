//! Low-memory Lanczos-OR and Lanczos-FA for pairs of degree at most two.

use crate::audit::BufferAudit;
use crate::error::{Error, Result};
use crate::lanczos::LanczosStepper;
use crate::linalg::operator::SymmetricOperator;
use crate::linalg::vector::axpy;
use crate::poly::PolynomialCoefficients;
use crate::rational::StabilizedPair;
use crate::streaming::banded_inv::StreamingBandedInvProcessor;
use crate::tridiag::{get_poly_window, StreamingTridiagonalSquare};

/// Half-bandwidth used by the streaming rational processor.
pub const STREAM_BANDWIDTH: usize = 2;

/// Streams `(q_j, α_j, β_j)` and accumulates
/// `‖b‖ · Q ([Ñ(T̂)]_{:k,:k})⁻¹ [M̃(T̂)]_{:k,:k} e₀`.
///
/// Lifecycle: at most `k` calls to [`read_stream`](Self::read_stream), one
/// [`finish_up`](Self::finish_up) (which performs the two trailing reads),
/// then [`into_output`](Self::into_output).
#[derive(Debug)]
pub struct BandedRationalProcessor {
    mtilde: PolynomialCoefficients,
    ntilde: PolynomialCoefficients,
    k: usize,
    b_norm: f64,
    square: StreamingTridiagonalSquare,
    inv: StreamingBandedInvProcessor,
    reads: usize,
    trailing_reads: usize,
    finished: bool,
}

impl BandedRationalProcessor {
    pub fn new(
        n: usize,
        k: usize,
        pair: &StabilizedPair,
        b_norm: f64,
        audit: Option<&BufferAudit>,
    ) -> Result<Self> {
        Self::from_polynomials(n, k, &pair.mtilde, &pair.ntilde, b_norm, audit)
    }

    pub fn from_polynomials(
        n: usize,
        k: usize,
        mtilde: &PolynomialCoefficients,
        ntilde: &PolynomialCoefficients,
        b_norm: f64,
        audit: Option<&BufferAudit>,
    ) -> Result<Self> {
        if mtilde.degree() > STREAM_BANDWIDTH || ntilde.degree() > STREAM_BANDWIDTH {
            return Err(Error::invalid(
                "streaming rational processor supports degree ≤ 2",
            ));
        }
        if k == 0 {
            return Err(Error::invalid("iteration count k must be at least 1"));
        }
        Ok(Self {
            mtilde: mtilde.clone(),
            ntilde: ntilde.clone(),
            k,
            b_norm,
            square: StreamingTridiagonalSquare::new(),
            inv: StreamingBandedInvProcessor::new(n, STREAM_BANDWIDTH, k, audit)?,
            reads: 0,
            trailing_reads: 0,
            finished: false,
        })
    }

    pub fn reads(&self) -> usize {
        self.reads
    }

    pub fn trailing_reads(&self) -> usize {
        self.trailing_reads
    }

    fn set_rhs(&mut self, k: usize) -> Result<()> {
        let mut y = get_poly_window(&self.mtilde, &self.square, 0, k)?;
        y.iter_mut().for_each(|v| *v *= self.b_norm);
        self.inv.set_rhs(&y)
    }

    pub fn read_stream(&mut self, q: &[f64], alpha: f64, beta: f64) -> Result<()> {
        if self.finished || self.reads >= self.k {
            return Err(Error::Stream(format!(
                "read {} beyond the {} planned",
                self.reads, self.k
            )));
        }
        let j = self.reads;
        self.square.read_stream(alpha, beta);
        let ncol = if j >= 1 {
            Some(get_poly_window(&self.ntilde, &self.square, j - 1, self.k)?)
        } else {
            None
        };
        if j == 1 {
            self.set_rhs(self.k)?;
        }
        self.inv
            .read_stream(Some(q), ncol.as_ref().map(|c| &c[..]))?;
        self.reads += 1;
        Ok(())
    }

    /// Completes the stream. If fewer than `k` reads arrived (the recurrence
    /// terminated), the window order is the number of reads.
    pub fn finish_up(&mut self) -> Result<()> {
        if self.finished {
            return Err(Error::Stream("finish_up called twice".into()));
        }
        let k = self.reads;
        if k == 0 {
            return Err(Error::Stream("finish_up before any read".into()));
        }
        if k == 1 {
            self.set_rhs(1)?;
        }
        let last = get_poly_window(&self.ntilde, &self.square, k - 1, k)?;
        self.inv.read_stream(None, Some(&last))?;
        self.trailing_reads += 1;
        for _ in 1..STREAM_BANDWIDTH {
            self.inv.read_stream(None, None)?;
            self.trailing_reads += 1;
        }
        self.finished = true;
        Ok(())
    }

    pub fn inverse(&self) -> &StreamingBandedInvProcessor {
        &self.inv
    }

    pub fn into_output(self) -> Result<Vec<f64>> {
        if !self.finished {
            return Err(Error::Stream("output requested before finish_up".into()));
        }
        self.inv.into_output()
    }
}

fn drive<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    b: &[f64],
    k: usize,
    pairs: &[&StabilizedPair],
    zero_last_beta: bool,
    audit: Option<&BufferAudit>,
) -> Result<Vec<Vec<f64>>> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "iteration count {k} outside 1..={n}"
        )));
    }
    let mut stepper = LanczosStepper::new(op, b, audit)?;
    let mut procs = pairs
        .iter()
        .map(|p| BandedRationalProcessor::new(n, k, p, stepper.b_norm, audit))
        .collect::<Result<Vec<_>>>()?;
    for j in 0..k {
        let (alpha, mut beta, breakdown) = stepper.step(None);
        if zero_last_beta && (j + 1 == k || breakdown) {
            beta = 0.0;
        }
        for (idx, p) in procs.iter_mut().enumerate() {
            p.read_stream(stepper.previous(), alpha, beta)
                .map_err(|e| term_error(pairs.len(), idx, e))?;
        }
        if breakdown {
            break;
        }
    }
    drop(stepper);
    procs
        .into_iter()
        .enumerate()
        .map(|(idx, mut p)| {
            p.finish_up()
                .and_then(|_| p.into_output())
                .map_err(|e| term_error(pairs.len(), idx, e))
        })
        .collect()
}

fn term_error(terms: usize, index: usize, e: Error) -> Error {
    if terms > 1 {
        Error::Term {
            index,
            source: Box::new(e),
        }
    } else {
        e
    }
}

/// Lanczos-OR with `O(n)` storage: the Lanczos run feeds a
/// [`BandedRationalProcessor`] and no basis is kept.
pub fn lanczos_or_lm<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    b: &[f64],
    k: usize,
    pair: &StabilizedPair,
) -> Result<Vec<f64>> {
    lanczos_or_lm_audited(op, b, k, pair, None)
}

/// [`lanczos_or_lm`] with its length-n buffers counted by `audit`.
pub fn lanczos_or_lm_audited<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    b: &[f64],
    k: usize,
    pair: &StabilizedPair,
    audit: Option<&BufferAudit>,
) -> Result<Vec<f64>> {
    Ok(drive(op, b, k, &[pair], false, audit)?
        .pop()
        .expect("one processor"))
}

/// Lanczos-FA of `M̃/Ñ` with `O(n)` storage: as [`lanczos_or_lm`] with the
/// final `β_{k−1}` replaced by zero, so every window is a polynomial in `T`.
pub fn lanczos_fa_lm<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    b: &[f64],
    k: usize,
    pair: &StabilizedPair,
) -> Result<Vec<f64>> {
    lanczos_fa_lm_audited(op, b, k, pair, None)
}

pub fn lanczos_fa_lm_audited<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    b: &[f64],
    k: usize,
    pair: &StabilizedPair,
    audit: Option<&BufferAudit>,
) -> Result<Vec<f64>> {
    Ok(drive(op, b, k, &[pair], true, audit)?
        .pop()
        .expect("one processor"))
}

/// `Σ_i weight_i · lan-OR_k(term_i)` from a single Lanczos run, one
/// processor per term.
pub fn termwise_or_lm<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    b: &[f64],
    k: usize,
    terms: &[(f64, StabilizedPair)],
) -> Result<Vec<f64>> {
    if terms.is_empty() {
        return Err(Error::invalid("termwise sum needs at least one term"));
    }
    let pairs: Vec<&StabilizedPair> = terms.iter().map(|(_, p)| p).collect();
    let outs = drive(op, b, k, &pairs, false, None)?;
    let mut sum = vec![0.0; op.dim()];
    for ((w, _), v) in terms.iter().zip(&outs) {
        axpy(*w, v, &mut sum);
    }
    Ok(sum)
}
