//! Matrix-function algorithms built on the optimal rational iterates: the
//! sign function, harmonic Ritz values, quadrature proxies for the sign
//! function, term-wise sums of rational functions and spectrum CDFs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::{ScalarFunction, Sign};
use crate::lanczos::{shift_recurrence, LanczosRecurrence};
use crate::linalg::banded::banded_to_dense;
use crate::linalg::dense::{DenseMatrix, DenseSymmetricMatrix};
use crate::linalg::eigen::{
    dense_sym_eigendecomposition, eval_on_spectrum, tridiag_eigendecomposition, SymmetricEigen,
};
use crate::poly::PolynomialCoefficients;
use crate::rational::{
    effective_k, lanczos_or_coefficients, stabilize, RationalFunctionSpec, SpectrumInterval,
};
use crate::streaming::ldl::{dense_ldl, LDLFactorization, PivotPolicy};
use crate::tridiag::truncated_poly_of_extended;

/// Relative eigenvalue threshold below which a window counts as singular.
const SINGULAR_TOL: f64 = 1e-14;

fn square_window_eigen(rec: &LanczosRecurrence, k: usize) -> Result<SymmetricEigen> {
    let w = truncated_poly_of_extended(rec, &PolynomialCoefficients::monomial(2), k)?;
    let eig = dense_sym_eigendecomposition(&banded_to_dense(&w))?;
    let top = *eig.eigenvalues.last().unwrap();
    if !(eig.eigenvalues[0] > SINGULAR_TOL * top) {
        return Err(Error::Singular {
            operation: "squared tridiagonal window",
        });
    }
    Ok(eig)
}

fn t_e0(rec: &LanczosRecurrence, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[0] = rec.alphas[0];
    if k > 1 {
        v[1] = rec.betas[0];
    }
    v
}

/// Coefficients `([T̂_c²]_{:k,:k})^{−1/2} T_c e₀` of the sign iterate, with
/// `T_c` the tridiagonal of the recurrence shifted by `c`.
pub fn sign_or_coefficients(rec: &LanczosRecurrence, k: usize, c: f64) -> Result<Vec<f64>> {
    let k = effective_k(rec, k)?;
    let shifted = shift_recurrence(rec, c);
    let eig = square_window_eigen(&shifted, k)?;
    let fvals: Vec<f64> = eig.eigenvalues.iter().map(|l| 1.0 / l.sqrt()).collect();
    Ok(eig.apply_spectral(&fvals, &t_e0(&shifted, k)))
}

/// `Q ([T̂_c²]_{:k,:k})^{−1/2} T_c e₀ ‖b‖ ≈ sign(A − cI) b`.
pub fn sign_or_iterate(rec: &LanczosRecurrence, k: usize, c: f64) -> Result<Vec<f64>> {
    let coeffs = sign_or_coefficients(rec, k, c)?;
    rec.basis_combination(&coeffs)
}

/// `(‖lan-FA_k(sign) − sign-OR_k‖₂, β²_{k−1} σ_max(T) / (2 σ_min(T)³))` for a
/// unit starting vector. A singular `T` gives `(∞, ∞)`.
pub fn sign_coalescence_gap(rec: &LanczosRecurrence, k: usize) -> Result<(f64, f64)> {
    let k = effective_k(rec, k)?;
    let beta = rec.betas[k - 1];
    if beta == 0.0 {
        return Ok((0.0, 0.0));
    }
    let (alphas, betas) = rec.tridiagonal(k);
    let eig = tridiag_eigendecomposition(alphas, betas)?;
    let smax = eig.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let smin = eig
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |m, l| m.min(l.abs()));
    if !(smin > SINGULAR_TOL * smax) {
        return Ok((f64::INFINITY, f64::INFINITY));
    }
    let mut e0 = vec![0.0; k];
    e0[0] = 1.0;
    let signs: Vec<f64> = eig.eigenvalues.iter().map(|l| l.signum()).collect();
    let fa = eig.apply_spectral(&signs, &e0);
    let or = match sign_or_coefficients(rec, k, 0.0) {
        Ok(c) => c,
        Err(Error::Singular { .. }) => return Ok((f64::INFINITY, f64::INFINITY)),
        Err(e) => return Err(e),
    };
    let gap = fa
        .iter()
        .zip(&or)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let bound = beta * beta * smax / (2.0 * smin.powi(3));
    Ok((gap, bound))
}

/// The pencil `([T̂²]_{:k,:k}, T)` reduced to a symmetric matrix: with
/// `W = [T̂²]_{:k,:k} = C Cᵀ`, `C = L D^{1/2}`, the eigenvalues `μ` of
/// `M = C⁻¹ T C⁻ᵀ` are the reciprocals of the harmonic Ritz values.
struct HarmonicPencil {
    ldl: LDLFactorization,
    sqrt_d: Vec<f64>,
    eig: SymmetricEigen,
}

impl HarmonicPencil {
    fn new(rec: &LanczosRecurrence, k: usize) -> Result<Self> {
        let w = truncated_poly_of_extended(rec, &PolynomialCoefficients::monomial(2), k)?;
        let ldl = dense_ldl(&w, PivotPolicy::Positive).map_err(|_| Error::Singular {
            operation: "harmonic Ritz window",
        })?;
        let sqrt_d: Vec<f64> = ldl.d().iter().map(|d| d.sqrt()).collect();
        let mut pencil = Self {
            ldl,
            sqrt_d,
            eig: SymmetricEigen {
                eigenvalues: vec![],
                eigenvectors: DenseMatrix::zeros(0, 0),
            },
        };
        let (alphas, betas) = rec.tridiagonal(k);
        // Columns of C⁻¹ T, then rows of (C⁻¹ T) C⁻ᵀ through the same solve.
        let mut ct = DenseMatrix::zeros(k, k);
        for j in 0..k {
            let mut col = vec![0.0; k];
            col[j] = alphas[j];
            if j > 0 {
                col[j - 1] = betas[j - 1];
            }
            if j + 1 < k {
                col[j + 1] = betas[j];
            }
            pencil.solve_c(&mut col);
            for (i, v) in col.into_iter().enumerate() {
                ct.set(i, j, v);
            }
        }
        let mut m = DenseSymmetricMatrix::zeros(k);
        for i in 0..k {
            let mut row = ct.row(i).to_vec();
            pencil.solve_c(&mut row);
            for (j, &v) in row.iter().enumerate().take(i + 1) {
                m.set(i, j, v);
            }
        }
        pencil.eig = dense_sym_eigendecomposition(&m)?;
        let top = pencil
            .eig
            .eigenvalues
            .iter()
            .fold(0.0_f64, |a, v| a.max(v.abs()));
        if pencil
            .eig
            .eigenvalues
            .iter()
            .any(|mu| !(mu.abs() > SINGULAR_TOL * top))
        {
            return Err(Error::Singular {
                operation: "harmonic Ritz problem (singular T)",
            });
        }
        Ok(pencil)
    }

    /// `v ← C⁻¹ v`.
    fn solve_c(&self, v: &mut [f64]) {
        for j in 0..v.len() {
            let vj = v[j];
            for (d, &l) in self.ldl.column(j).iter().enumerate() {
                v[j + d + 1] -= l * vj;
            }
        }
        for (vi, s) in v.iter_mut().zip(&self.sqrt_d) {
            *vi /= s;
        }
    }

    /// `v ← C⁻ᵀ v`.
    fn solve_ct(&self, v: &mut [f64]) {
        for (vi, s) in v.iter_mut().zip(&self.sqrt_d) {
            *vi /= s;
        }
        for j in (0..v.len()).rev() {
            let mut s = v[j];
            for (d, &l) in self.ldl.column(j).iter().enumerate() {
                s -= l * v[j + d + 1];
            }
            v[j] = s;
        }
    }

    fn values(&self) -> Vec<f64> {
        let mut theta: Vec<f64> = self.eig.eigenvalues.iter().map(|mu| 1.0 / mu).collect();
        theta.sort_by(f64::total_cmp);
        theta
    }

    /// `p(T) e₀` for the degree-`(k−1)` interpolant `p` of `f` at the
    /// harmonic Ritz values.
    ///
    /// `H = T⁻¹ W = T + β²_{k−1} T⁻¹ e_{k−1} e_{k−1}ᵀ` agrees with `T` on
    /// `e₀, …, T^{k−2} e₀`, so `p(T) e₀ = p(H) e₀ = f(H) e₀`, and
    /// `H = C⁻ᵀ M⁻¹ Cᵀ` gives `f(H) e₀ = C⁻ᵀ V f(1/μ) Vᵀ Cᵀ e₀`.
    fn interpolant_apply(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let k = self.sqrt_d.len();
        let mut ce0 = vec![0.0; k];
        ce0[0] = self.sqrt_d[0];
        let fvals: Vec<f64> = self.eig.eigenvalues.iter().map(|mu| f(1.0 / mu)).collect();
        let mut out = self.eig.apply_spectral(&fvals, &ce0);
        self.solve_ct(&mut out);
        out
    }
}

/// Rejects node sets with two values closer than `1e-10` relative.
fn check_distinct(sorted: &[f64]) -> Result<()> {
    let scale = sorted.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for w in sorted.windows(2) {
        if (w[1] - w[0]).abs() <= 1e-10 * scale {
            return Err(Error::CoincidentNodes(w[0], w[1]));
        }
    }
    Ok(())
}

/// Generalized eigenvalues `θ` of `[T̂²]_{:k,:k} y = θ T y`, ascending.
pub fn harmonic_ritz_values(rec: &LanczosRecurrence, k: usize) -> Result<Vec<f64>> {
    let k = effective_k(rec, k)?;
    Ok(HarmonicPencil::new(rec, k)?.values())
}

/// Coefficients `p(T) e₀` with `p` the degree-`(k−1)` interpolant of `f` at
/// the harmonic Ritz values. Coincident nodes are an error.
pub fn harmonic_interpolant_coefficients(
    rec: &LanczosRecurrence,
    k: usize,
    f: impl Fn(f64) -> f64,
) -> Result<Vec<f64>> {
    let k = effective_k(rec, k)?;
    let pencil = HarmonicPencil::new(rec, k)?;
    check_distinct(&pencil.values())?;
    Ok(pencil.interpolant_apply(f))
}

/// `Q p(T_c) e₀ ‖b‖` with `p` the degree-`(k−1)` interpolant of the sign
/// function at the harmonic Ritz values of `T_c`.
pub fn sign_harmonic_iterate(rec: &LanczosRecurrence, k: usize, c: f64) -> Result<Vec<f64>> {
    let shifted = shift_recurrence(rec, c);
    let coeffs = harmonic_interpolant_coefficients(&shifted, k, f64::signum)?;
    rec.basis_combination(&coeffs)
}

/// Nodes `z_i > 0` and weights `ω_i > 0` with
/// `sign(x) ≈ Σ ω_i x / (x² + z_i²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes ascending.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The scalar proxy `Σ ω_i x / (x² + z_i²)`.
    pub fn sign_proxy(&self, x: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| w * x / (x * x + z * z))
            .sum()
    }

    /// Applied to the constant function: `Σ ω_i / (1 + z_i²)` with the
    /// substitution scale folded in.
    pub fn total_mass(&self, scale: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| w * scale / (scale * scale + z * z))
            .sum()
    }

    /// The proxy as a list of partial-fraction terms `ω_i x / (x² + z_i²)`.
    pub fn terms(&self) -> Vec<PartialFractionTerm> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| PartialFractionTerm::new(0.0, w, 0.0, 1.0, 0.0, z * z))
            .collect()
    }

    /// `max |sign(λ) − proxy(λ)|` over the given points.
    pub fn sup_error(&self, points: &[f64]) -> f64 {
        points
            .iter()
            .map(|&x| (x.signum() - self.sign_proxy(x)).abs())
            .fold(0.0, f64::max)
    }
}

/// `m`-point rule from `(2/π)∫₀^∞ x/(x² + z²) dz` with `z = tan θ` and
/// Gauss–Legendre on `θ ∈ (0, π/2)`.
pub fn build_sign_quadrature(m: usize) -> Result<QuadratureRule> {
    build_sign_quadrature_scaled(m, 1.0)
}

/// As [`build_sign_quadrature`] with `z = s·tan θ`, which centres the rule
/// at `|x| ≈ s` (take `s` near the geometric mean of the spectrum's extreme
/// magnitudes).
pub fn build_sign_quadrature_scaled(m: usize, s: f64) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::invalid("quadrature needs at least one node"));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::invalid("quadrature scale must be positive"));
    }
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for (x, w) in gauss_legendre(m) {
        let theta = PI / 4.0 * (x + 1.0);
        let sec = 1.0 / theta.cos();
        nodes.push(s * theta.tan());
        weights.push(2.0 / PI * (PI / 4.0 * w) * s * sec * sec);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `(A x² + B x + C) / (a x² + b x + c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialFractionTerm {
    pub num: [f64; 3],
    pub den: [f64; 3],
}

impl PartialFractionTerm {
    /// Arguments in the order `A, B, C, a, b, c`.
    pub fn new(a2: f64, a1: f64, a0: f64, d2: f64, d1: f64, d0: f64) -> Self {
        Self {
            num: [a2, a1, a0],
            den: [d2, d1, d0],
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let [a2, a1, a0] = self.num;
        let [d2, d1, d0] = self.den;
        (a2 * x * x + a1 * x + a0) / (d2 * x * x + d1 * x + d0)
    }

    /// The term with a monic, factored denominator.
    pub fn to_spec(&self) -> Result<RationalFunctionSpec> {
        let [a2, a1, a0] = self.num;
        let [d2, d1, d0] = self.den;
        let (lead, real_roots, complex_pairs) = if d2 != 0.0 {
            let (p, q) = (d1 / d2, d0 / d2);
            let disc = p * p / 4.0 - q;
            if disc < 0.0 {
                (
                    d2,
                    vec![],
                    vec![(Complex64::new(-p / 2.0, (-disc).sqrt()), 1)],
                )
            } else if disc == 0.0 {
                (d2, vec![(-p / 2.0, 2)], vec![])
            } else {
                let r = disc.sqrt();
                // Avoid cancellation in the smaller root.
                let big = -p / 2.0 - r.copysign(p);
                let small = if big != 0.0 { q / big } else { p / 2.0 - r };
                (d2, vec![(big, 1), (small, 1)], vec![])
            }
        } else if d1 != 0.0 {
            (d1, vec![(-d0 / d1, 1)], vec![])
        } else if d0 != 0.0 {
            (d0, vec![], vec![])
        } else {
            return Err(Error::invalid(
                "partial fraction term with zero denominator",
            ));
        };
        RationalFunctionSpec::new(
            PolynomialCoefficients::new(vec![a0 / lead, a1 / lead, a2 / lead]),
            real_roots,
            complex_pairs,
        )
    }
}

/// `Σ_i lan-OR_k(term_i)` from one shared recurrence. A failing term is
/// reported with its index.
pub fn rational_termwise_or(
    rec: &LanczosRecurrence,
    k: usize,
    terms: &[PartialFractionTerm],
    interval: SpectrumInterval,
) -> Result<Vec<f64>> {
    let coeffs = rational_termwise_coefficients(rec, k, terms, interval)?;
    rec.basis_combination(&coeffs)
}

/// Coefficient vector of [`rational_termwise_or`].
pub fn rational_termwise_coefficients(
    rec: &LanczosRecurrence,
    k: usize,
    terms: &[PartialFractionTerm],
    interval: SpectrumInterval,
) -> Result<Vec<f64>> {
    if terms.is_empty() {
        return Err(Error::invalid("termwise sum needs at least one term"));
    }
    let k = effective_k(rec, k)?;
    let mut sum = vec![0.0; k];
    for (index, term) in terms.iter().enumerate() {
        let wrap = |e: Error| Error::Term {
            index,
            source: Box::new(e),
        };
        let spec = term.to_spec().map_err(wrap)?;
        let pair = stabilize(&spec, interval).map_err(wrap)?;
        let c = lanczos_or_coefficients(rec, k, &pair).map_err(wrap)?;
        for (s, ci) in sum.iter_mut().zip(c) {
            *s += ci;
        }
    }
    Ok(sum)
}

/// Estimates of the weighted fraction of eigenvalues `≤ c` for each
/// threshold, `(1 − e₀ᵀ([T̂_c²]_{:k,:k})^{−1/2} T_c e₀) / 2`, from one
/// recurrence. Thresholds where the shifted window is singular give `None`.
pub fn spectrum_cdf(
    rec: &LanczosRecurrence,
    k: usize,
    thresholds: &[f64],
) -> Result<Vec<Option<f64>>> {
    let k = effective_k(rec, k)?;
    thresholds
        .iter()
        .map(|&c| match sign_or_coefficients(rec, k, c) {
            Ok(v) => Ok(Some((1.0 - v[0]) / 2.0)),
            Err(Error::Singular { .. }) | Err(Error::NotConverged { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// The Gauss-quadrature CDF `(1 − e₀ᵀ sign(T − cI) e₀) / 2`: a step
/// function with jumps at the Ritz values.
pub fn spectrum_cdf_fa(rec: &LanczosRecurrence, k: usize, thresholds: &[f64]) -> Result<Vec<f64>> {
    let k = effective_k(rec, k)?;
    let (alphas, betas) = rec.tridiagonal(k);
    let eig = tridiag_eigendecomposition(alphas, betas)?;
    let w: Vec<f64> = (0..k).map(|j| eig.eigenvectors.get(0, j).powi(2)).collect();
    Ok(thresholds
        .iter()
        .map(|&c| {
            let s: f64 = eig
                .eigenvalues
                .iter()
                .zip(&w)
                .map(|(&l, &wj)| wj * Sign::new(c).eval(l))
                .sum();
            (1.0 - s) / 2.0
        })
        .collect())
}

/// `sign(T − cI)` applied through the tridiagonal eigendecomposition, failing
/// when a Ritz value sits on `c`.
pub fn sign_fa_coefficients(rec: &LanczosRecurrence, k: usize, c: f64) -> Result<Vec<f64>> {
    let k = effective_k(rec, k)?;
    let (alphas, betas) = rec.tridiagonal(k);
    let eig = tridiag_eigendecomposition(alphas, betas)?;
    let shifted: Vec<f64> = eig.eigenvalues.iter().map(|l| l - c).collect();
    let vals = eval_on_spectrum(&Sign::new(0.0), &shifted)?;
    let mut e0 = vec![0.0; k];
    e0[0] = 1.0;
    Ok(eig.apply_spectral(&vals, &e0))
}
