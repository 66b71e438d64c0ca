//! Polynomials and functions of the Lanczos tridiagonal matrix.

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::lanczos::LanczosRecurrence;
use crate::linalg::banded::BandedSymmetricMatrix;
use crate::linalg::eigen::{eval_on_spectrum, tridiag_eigendecomposition};
use crate::poly::PolynomialCoefficients;

/// Number of recurrence steps needed for the leading `k×k` window of a
/// degree-`degree` polynomial of the extended tridiagonal matrix.
pub fn window_requirement(k: usize, degree: usize) -> usize {
    if degree == 0 {
        k
    } else {
        k + (degree - 1) / 2
    }
}

/// Powers `T̂^0 e_c, …, T̂^h e_c` on the index window `[c − h, c + h]`.
struct ColumnPowers {
    lo: isize,
    powers: Vec<Vec<f64>>,
}

impl ColumnPowers {
    fn new(
        c: usize,
        h: usize,
        alpha: &impl Fn(usize) -> f64,
        beta: &impl Fn(usize) -> f64,
    ) -> Self {
        let width = 2 * h + 1;
        let lo = c as isize - h as isize;
        let mut v = vec![0.0; width];
        v[h] = 1.0;
        let mut powers = vec![v];
        for _ in 0..h {
            let prev = powers.last().unwrap();
            let mut next = vec![0.0; width];
            for (w, out) in next.iter_mut().enumerate() {
                let i = lo + w as isize;
                if i < 0 {
                    continue;
                }
                let i = i as usize;
                let mut s = alpha(i) * prev[w];
                if w > 0 && i > 0 {
                    s += beta(i - 1) * prev[w - 1];
                }
                if w + 1 < width {
                    s += beta(i) * prev[w + 1];
                }
                *out = s;
            }
            powers.push(next);
        }
        Self { lo, powers }
    }
}

fn window_dot(a: &ColumnPowers, pa: usize, c: &ColumnPowers, pc: usize) -> f64 {
    let (va, vc) = (&a.powers[pa], &c.powers[pc]);
    let lo = a.lo.max(c.lo);
    let hi = (a.lo + va.len() as isize).min(c.lo + vc.len() as isize);
    (lo..hi)
        .map(|i| va[(i - a.lo) as usize] * vc[(i - c.lo) as usize])
        .sum()
}

/// `[p(T̂)]_{:k,:k}` in banded form, from the recurrence coefficients.
///
/// Entry `(a, c)` of `T̂^m` is `⟨T̂^⌊m/2⌋ e_a, T̂^⌈m/2⌉ e_c⟩`, and the vectors
/// `T̂^j e_c` have support of width `2j + 1`, so the work is `O(k·deg²)`.
/// An exhausted recurrence is extended by zeros.
pub fn truncated_poly_of_extended(
    rec: &LanczosRecurrence,
    p: &PolynomialCoefficients,
    k: usize,
) -> Result<BandedSymmetricMatrix> {
    if k == 0 {
        return Err(Error::invalid("window order k must be at least 1"));
    }
    let q = p.degree();
    let needed = window_requirement(k, q);
    if rec.len() < needed && !rec.exhausted {
        return Err(Error::RecurrenceTooShort {
            needed,
            available: rec.len(),
        });
    }
    let len = rec.len();
    let alpha = |i: usize| if i < len { rec.alphas[i] } else { 0.0 };
    let beta = |i: usize| if i < len { rec.betas[i] } else { 0.0 };
    let h = q.div_ceil(2);
    let cols: Vec<ColumnPowers> = (0..k)
        .map(|c| ColumnPowers::new(c, h, &alpha, &beta))
        .collect();

    let mut out = BandedSymmetricMatrix::zeros(k, q);
    for c in 0..k {
        for a in c..k.min(c + q + 1) {
            let mut s = 0.0;
            for m in (a - c)..=q {
                let coeff = p.coeff(m);
                if coeff != 0.0 {
                    s += coeff * window_dot(&cols[a], m / 2, &cols[c], m.div_ceil(2));
                }
            }
            out.set(a, c, s);
        }
    }
    Ok(out)
}

/// Streams `(α_j, β_j)` and assembles the lower band of `T̂²`.
///
/// After read `j` the diagonal entry `(j, j)` is final, as are the
/// off-diagonal entries `(j, j−1)` and `(j+1, j−1)` of column `j − 1`.
#[derive(Debug, Clone, Default)]
pub struct StreamingTridiagonalSquare {
    alphas: Vec<f64>,
    betas: Vec<f64>,
    sq_diag: Vec<f64>,
    sq_off1: Vec<f64>,
    sq_off2: Vec<f64>,
}

impl StreamingTridiagonalSquare {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reads(&self) -> usize {
        self.alphas.len()
    }

    pub fn read_stream(&mut self, alpha: f64, beta: f64) {
        let j = self.alphas.len();
        let beta_prev = if j > 0 { self.betas[j - 1] } else { 0.0 };
        self.alphas.push(alpha);
        self.betas.push(beta);
        self.sq_diag
            .push(beta_prev * beta_prev + alpha * alpha + beta * beta);
        if j > 0 {
            self.sq_off1.push((self.alphas[j - 1] + alpha) * beta_prev);
            self.sq_off2.push(beta_prev * beta);
        }
    }

    pub fn alpha(&self, j: usize) -> f64 {
        self.alphas[j]
    }

    pub fn beta(&self, j: usize) -> f64 {
        self.betas[j]
    }

    /// `[T̂²]_{j+d, j}` for `d ∈ {0, 1, 2}`, if already determined.
    pub fn square_entry(&self, j: usize, d: usize) -> Option<f64> {
        match d {
            0 => self.sq_diag.get(j).copied(),
            1 => self.sq_off1.get(j).copied(),
            2 => self.sq_off2.get(j).copied(),
            _ => Some(0.0),
        }
    }
}

/// Column `j` of `c₂T̂² + c₁T̂ + c₀I` in banded layout (diagonal first).
pub fn get_poly(
    p: &PolynomialCoefficients,
    sq: &StreamingTridiagonalSquare,
    j: usize,
) -> Result<[f64; 3]> {
    get_poly_window(p, sq, j, usize::MAX)
}

/// As [`get_poly`], with rows at or past `k` treated as outside the window.
pub fn get_poly_window(
    p: &PolynomialCoefficients,
    sq: &StreamingTridiagonalSquare,
    j: usize,
    k: usize,
) -> Result<[f64; 3]> {
    if p.degree() > 2 {
        return Err(Error::invalid(
            "streaming polynomial columns support degree ≤ 2",
        ));
    }
    if j >= sq.reads() {
        return Err(Error::Stream(format!(
            "column {j} requested after {} reads",
            sq.reads()
        )));
    }
    let (c0, c1, c2) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let mut col = [0.0; 3];
    for (d, slot) in col.iter_mut().enumerate() {
        if j.saturating_add(d) >= k {
            break;
        }
        let mut v = match d {
            0 => c0 + c1 * sq.alpha(j),
            1 => c1 * sq.beta(j),
            _ => 0.0,
        };
        if c2 != 0.0 {
            let s = sq.square_entry(j, d).ok_or_else(|| {
                Error::Stream(format!(
                    "entry ({}, {j}) of the square not yet available",
                    j + d
                ))
            })?;
            v += c2 * s;
        }
        *slot = v;
    }
    Ok(col)
}

/// `f(T) e₀` for the leading `k×k` tridiagonal block.
pub fn tridiag_function_apply<F: ScalarFunction + ?Sized>(
    rec: &LanczosRecurrence,
    f: &F,
    k: usize,
) -> Result<Vec<f64>> {
    rec.require_len(k)?;
    let (alphas, betas) = rec.tridiagonal(k);
    let eig = tridiag_eigendecomposition(alphas, betas)?;
    let fvals = eval_on_spectrum(f, &eig.eigenvalues)?;
    let mut e0 = vec![0.0; k];
    e0[0] = 1.0;
    Ok(eig.apply_spectral(&fvals, &e0))
}
