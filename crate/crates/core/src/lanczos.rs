//! The Lanczos three-term recurrence.

use crate::audit::{BufferAudit, TrackedVec};
use crate::error::{Error, Result};
use crate::linalg::operator::SymmetricOperator;
use crate::linalg::vector::{axpy, dot_unchecked, norm2};

/// Relative breakdown threshold on `β_j`.
pub const BREAKDOWN_TOL: f64 = 1e-14;

/// Coefficients of a Lanczos run, optionally with its orthonormal basis.
///
/// `betas[j]` couples `q_j` and `q_{j+1}`, so the last entry is the norm of
/// the unnormalized next vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LanczosRecurrence {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub basis: Option<Vec<Vec<f64>>>,
    pub next_vector: Option<Vec<f64>>,
    pub b_norm: f64,
    pub exhausted: bool,
}

impl LanczosRecurrence {
    /// A recurrence from given coefficients, without a basis.
    pub fn from_coefficients(alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if alphas.len() != betas.len() {
            return Err(Error::DimensionMismatch {
                expected: alphas.len(),
                found: betas.len(),
            });
        }
        if betas.iter().any(|&b| b < 0.0 || !b.is_finite()) || alphas.iter().any(|a| !a.is_finite())
        {
            return Err(Error::invalid(
                "coefficients must be finite with nonnegative betas",
            ));
        }
        Ok(Self {
            alphas,
            betas,
            basis: None,
            next_vector: None,
            b_norm: 1.0,
            exhausted: false,
        })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Diagonal and off-diagonal of the leading `k×k` block of `T`.
    pub fn tridiagonal(&self, k: usize) -> (&[f64], &[f64]) {
        (&self.alphas[..k], &self.betas[..k.saturating_sub(1)])
    }

    pub fn basis(&self) -> Option<&[Vec<f64>]> {
        self.basis.as_deref()
    }

    pub(crate) fn require_len(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::invalid("iteration count k must be at least 1"));
        }
        if self.len() < k {
            return Err(Error::RecurrenceTooShort {
                needed: k,
                available: self.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_basis(&self, k: usize) -> Result<&[Vec<f64>]> {
        self.require_len(k)?;
        match &self.basis {
            Some(q) if q.len() >= k => Ok(&q[..k]),
            _ => Err(Error::invalid("operation needs a stored Lanczos basis")),
        }
    }

    /// `Q c`, scaled by `‖b‖`, accumulated in column order.
    pub fn basis_combination(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        let q = self.require_basis(coeffs.len())?;
        let mut out = vec![0.0; q[0].len()];
        for (col, &c) in q.iter().zip(coeffs) {
            axpy(c * self.b_norm, col, &mut out);
        }
        Ok(out)
    }
}

/// Options for [`lanczos`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LanczosOptions {
    pub reorthogonalize: bool,
    pub store_basis: bool,
}

impl LanczosOptions {
    pub fn with_basis(reorthogonalize: bool) -> Self {
        Self {
            reorthogonalize,
            store_basis: true,
        }
    }

    pub fn streaming() -> Self {
        Self::default()
    }
}

/// Two-buffer Lanczos state. `cur` holds `q_j`, `prev` holds `q_{j−1}`.
pub(crate) struct LanczosStepper<'a, Op: SymmetricOperator + ?Sized> {
    op: &'a Op,
    prev: TrackedVec,
    cur: TrackedVec,
    beta_prev: f64,
    norm_est: f64,
    max_alpha: f64,
    max_beta: f64,
    pub(crate) b_norm: f64,
    steps: usize,
}

impl<'a, Op: SymmetricOperator + ?Sized> LanczosStepper<'a, Op> {
    pub(crate) fn new(op: &'a Op, b: &[f64], audit: Option<&BufferAudit>) -> Result<Self> {
        let n = op.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("input vector has non-finite entries"));
        }
        let b_norm = norm2(b);
        if b_norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let mut cur = TrackedVec::zeros(n, audit);
        for (c, bi) in cur.iter_mut().zip(b) {
            *c = bi / b_norm;
        }
        Ok(Self {
            op,
            prev: TrackedVec::zeros(n, audit),
            cur,
            beta_prev: 0.0,
            norm_est: 0.0,
            max_alpha: 0.0,
            max_beta: 0.0,
            b_norm,
            steps: 0,
        })
    }

    /// The vector the next [`step`](Self::step) will expand, `q_j`.
    pub(crate) fn current(&self) -> &[f64] {
        &self.cur
    }

    /// Advances one step. Returns `(α_j, β_j, breakdown)`; afterwards
    /// [`previous`](Self::previous) is `q_j` and [`current`](Self::current)
    /// is `q_{j+1}` (zero on breakdown).
    pub(crate) fn step(&mut self, reorth_against: Option<&[Vec<f64>]>) -> (f64, f64, bool) {
        // prev ← A q_j − β_{j−1} q_{j−1}
        self.op.apply_sub(&self.cur, self.beta_prev, &mut self.prev);
        let alpha = dot_unchecked(&self.prev, &self.cur);
        axpy(-alpha, &self.cur, &mut self.prev);
        if let Some(basis) = reorth_against {
            for _ in 0..2 {
                let coeffs: Vec<f64> = basis.iter().map(|q| dot_unchecked(q, &self.prev)).collect();
                for (q, c) in basis.iter().zip(coeffs) {
                    axpy(-c, q, &mut self.prev);
                }
            }
        }
        let mut beta = norm2(&self.prev);
        self.max_alpha = self.max_alpha.max(alpha.abs());
        self.max_beta = self.max_beta.max(beta);
        self.norm_est = self.max_alpha + 2.0 * self.max_beta;
        let breakdown = beta <= BREAKDOWN_TOL * self.norm_est || !beta.is_finite();
        if breakdown {
            beta = 0.0;
            self.prev.iter_mut().for_each(|v| *v = 0.0);
        } else {
            let inv = 1.0 / beta;
            self.prev.iter_mut().for_each(|v| *v *= inv);
        }
        std::mem::swap(&mut self.prev, &mut self.cur);
        self.beta_prev = beta;
        self.steps += 1;
        (alpha, beta, breakdown)
    }

    pub(crate) fn previous(&self) -> &[f64] {
        &self.prev
    }
}

/// Observer receiving `(q_j, α_j, β_j)` once per iteration.
pub type LanczosObserver<'o> = &'o mut dyn FnMut(&[f64], f64, f64);

/// Runs `k` Lanczos steps on `(A, b)`.
///
/// `b` is normalized internally; its norm is kept in
/// [`LanczosRecurrence::b_norm`]. On breakdown the run stops early and the
/// result is flagged `exhausted`.
pub fn lanczos<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    b: &[f64],
    k: usize,
    options: LanczosOptions,
    mut observer: Option<LanczosObserver<'_>>,
) -> Result<LanczosRecurrence> {
    let n = op.dim();
    if k == 0 {
        return Err(Error::invalid("iteration count k must be at least 1"));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "iteration count {k} exceeds dimension {n}"
        )));
    }
    if options.reorthogonalize && !options.store_basis {
        return Err(Error::invalid(
            "reorthogonalization requires a stored basis",
        ));
    }
    let mut stepper = LanczosStepper::new(op, b, None)?;
    let mut alphas = Vec::with_capacity(k);
    let mut betas = Vec::with_capacity(k);
    let mut basis: Option<Vec<Vec<f64>>> = options.store_basis.then(|| Vec::with_capacity(k));
    let mut exhausted = false;

    for _ in 0..k {
        if let Some(q) = basis.as_mut() {
            q.push(stepper.current().to_vec());
        }
        let reorth = if options.reorthogonalize {
            basis.as_deref()
        } else {
            None
        };
        let (alpha, beta, breakdown) = stepper.step(reorth);
        alphas.push(alpha);
        betas.push(beta);
        if let Some(obs) = observer.as_mut() {
            obs(stepper.previous(), alpha, beta);
        }
        if breakdown {
            exhausted = true;
            break;
        }
    }
    let next_vector = options.store_basis.then(|| stepper.current().to_vec());
    Ok(LanczosRecurrence {
        alphas,
        betas,
        basis,
        next_vector,
        b_norm: stepper.b_norm,
        exhausted,
    })
}

/// The recurrence of `(A − zI, b)`: same basis, diagonal shifted by `−z`.
pub fn shift_recurrence(rec: &LanczosRecurrence, z: f64) -> LanczosRecurrence {
    let mut out = rec.clone();
    out.alphas.iter_mut().for_each(|a| *a -= z);
    out
}
