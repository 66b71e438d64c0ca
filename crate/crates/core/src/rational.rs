//! Rational functions `r = M/N`, their stabilization against a spectrum
//! interval, and the dense-path optimal and function-approximation iterates.

use num_complex::Complex64;

use crate::audit::BufferAudit;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::lanczos::{lanczos, LanczosOptions, LanczosRecurrence, LanczosStepper};
use crate::linalg::eigen::tridiag_eigendecomposition;
use crate::linalg::operator::SymmetricOperator;
use crate::linalg::vector::axpy;
use crate::poly::PolynomialCoefficients;
use crate::streaming::ldl::{dense_ldl, PivotPolicy};
use crate::tridiag::{tridiag_function_apply, truncated_poly_of_extended};

/// Closed interval `[lower, upper]` containing the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumInterval {
    pub lower: f64,
    pub upper: f64,
}

impl SpectrumInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower > upper {
            return Err(Error::invalid(format!(
                "invalid interval [{lower}, {upper}]"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// Smallest interval containing every value.
    pub fn hull(values: &[f64]) -> Result<Self> {
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Self::new(lo, hi)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Estimates an interval containing the spectrum of `A` from the extreme
/// Ritz values of `2k` Lanczos steps, widened by 5% of its width on each side.
pub fn estimate_spectrum_interval<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    b: &[f64],
    k: usize,
) -> Result<SpectrumInterval> {
    let steps = (2 * k).clamp(1, op.dim());
    let rec = lanczos(op, b, steps, LanczosOptions::with_basis(true), None)?;
    let (alphas, betas) = rec.tridiagonal(rec.len());
    let eig = tridiag_eigendecomposition(alphas, betas)?;
    let lo = eig.eigenvalues[0];
    let hi = *eig.eigenvalues.last().unwrap();
    let pad = 0.05 * (hi - lo).max(f64::EPSILON * hi.abs().max(lo.abs()).max(1.0));
    SpectrumInterval::new(lo - pad, hi + pad)
}

/// `r(x) = M(x) / N(x)` with `N` monic and given by its roots.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunctionSpec {
    numerator: PolynomialCoefficients,
    real_roots: Vec<(f64, usize)>,
    complex_pairs: Vec<(Complex64, usize)>,
}

impl RationalFunctionSpec {
    /// Complex roots are given by their member with positive imaginary part.
    pub fn new(
        numerator: PolynomialCoefficients,
        real_roots: Vec<(f64, usize)>,
        complex_pairs: Vec<(Complex64, usize)>,
    ) -> Result<Self> {
        for (i, &(z, m)) in real_roots.iter().enumerate() {
            if !z.is_finite() || m == 0 {
                return Err(Error::invalid(format!(
                    "bad real root {z} with multiplicity {m}"
                )));
            }
            if real_roots[..i].iter().any(|&(w, _)| w == z) {
                return Err(Error::invalid(format!("real root {z} listed twice")));
            }
        }
        for &(z, m) in &complex_pairs {
            if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() || m == 0 {
                return Err(Error::invalid(format!(
                    "complex root {z} needs positive imaginary part and multiplicity ≥ 1"
                )));
            }
        }
        let spec = Self {
            numerator: numerator.trimmed(),
            real_roots,
            complex_pairs,
        };
        if spec.numerator.degree() > spec.denominator().degree() {
            return Err(Error::invalid(
                "numerator degree exceeds denominator degree",
            ));
        }
        Ok(spec)
    }

    /// `1 / x`
    pub fn inverse() -> Self {
        Self::new(
            PolynomialCoefficients::constant(1.0),
            vec![(0.0, 1)],
            vec![],
        )
        .unwrap()
    }

    /// `1 / x²`
    pub fn inverse_square() -> Self {
        Self::new(
            PolynomialCoefficients::constant(1.0),
            vec![(0.0, 2)],
            vec![],
        )
        .unwrap()
    }

    /// `1 / (x − z)` for real `z`.
    pub fn shifted_inverse(z: f64) -> Self {
        Self::new(PolynomialCoefficients::constant(1.0), vec![(z, 1)], vec![]).unwrap()
    }

    /// `1 / (x² + c)` for `c > 0`.
    pub fn inverse_shifted_square(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::invalid("shift must be positive"));
        }
        Self::new(
            PolynomialCoefficients::constant(1.0),
            vec![],
            vec![(Complex64::new(0.0, c.sqrt()), 1)],
        )
    }

    /// `x / (x² + z²)` for `z > 0`, one term of the sign-function proxy.
    pub fn sign_resolvent(z: f64) -> Result<Self> {
        if !(z > 0.0) {
            return Err(Error::invalid("resolvent node must be positive"));
        }
        Self::new(
            PolynomialCoefficients::monomial(1),
            vec![],
            vec![(Complex64::new(0.0, z), 1)],
        )
    }

    pub fn numerator(&self) -> &PolynomialCoefficients {
        &self.numerator
    }

    pub fn real_roots(&self) -> &[(f64, usize)] {
        &self.real_roots
    }

    pub fn complex_pairs(&self) -> &[(Complex64, usize)] {
        &self.complex_pairs
    }

    pub fn denominator(&self) -> PolynomialCoefficients {
        let mut n = PolynomialCoefficients::constant(1.0);
        for &(z, m) in &self.real_roots {
            let f = PolynomialCoefficients::new(vec![-z, 1.0]);
            for _ in 0..m {
                n = n.mul(&f);
            }
        }
        for &(z, m) in &self.complex_pairs {
            let f = PolynomialCoefficients::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0]);
            for _ in 0..m {
                n = n.mul(&f);
            }
        }
        n
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.numerator.eval(x) / self.denominator().eval(x)
    }
}

impl ScalarFunction for RationalFunctionSpec {
    fn eval(&self, x: f64) -> f64 {
        RationalFunctionSpec::eval(self, x)
    }

    fn singularities(&self) -> Vec<f64> {
        self.real_roots.iter().map(|&(z, _)| z).collect()
    }
}

/// `(M̃, Ñ) = ξ·R·(M, N)` with `Ñ ≥ 0` on the stabilizing interval.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizedPair {
    pub mtilde: PolynomialCoefficients,
    pub ntilde: PolynomialCoefficients,
    pub xi: f64,
    /// Roots of `R`.
    pub stabilizer_roots: Vec<f64>,
    spec: RationalFunctionSpec,
}

impl StabilizedPair {
    /// Half-bandwidth of the windows built from this pair.
    pub fn degree(&self) -> usize {
        self.mtilde.degree().max(self.ntilde.degree())
    }

    pub fn spec(&self) -> &RationalFunctionSpec {
        &self.spec
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.mtilde.eval(x) / self.ntilde.eval(x)
    }

    /// `M̃ / Ñ` written as a spec with monic denominator `R·N`.
    pub fn as_spec(&self) -> RationalFunctionSpec {
        let mut real_roots = self.spec.real_roots.clone();
        for &z in &self.stabilizer_roots {
            if let Some(entry) = real_roots.iter_mut().find(|(w, _)| *w == z) {
                entry.1 += 1;
            }
        }
        RationalFunctionSpec {
            numerator: self.mtilde.scale(self.xi),
            real_roots,
            complex_pairs: self.spec.complex_pairs.clone(),
        }
    }
}

/// Multiplies `M` and `N` by the product of `(x − z)` over real roots of
/// odd multiplicity strictly inside the interval, then fixes the sign so
/// that `Ñ(lower) ≥ 0`.
pub fn stabilize(
    spec: &RationalFunctionSpec,
    interval: SpectrumInterval,
) -> Result<StabilizedPair> {
    let slack = 1e-12 * interval.width();
    let mut stabilizer_roots = Vec::new();
    for &(z, m) in &spec.real_roots {
        if (z - interval.lower).abs() <= slack || (z - interval.upper).abs() <= slack {
            return Err(Error::RootAtEndpoint { root: z });
        }
        if interval.contains(z) && m % 2 == 1 {
            stabilizer_roots.push(z);
        }
    }
    let r = PolynomialCoefficients::from_roots(&stabilizer_roots);
    let mut mtilde = r.mul(&spec.numerator);
    let mut ntilde = r.mul(&spec.denominator());
    let mut xi = 1.0;
    if ntilde.eval(interval.lower) < 0.0 {
        xi = -1.0;
        mtilde = mtilde.scale(-1.0);
        ntilde = ntilde.scale(-1.0);
    }
    Ok(StabilizedPair {
        mtilde,
        ntilde,
        xi,
        stabilizer_roots,
        spec: spec.clone(),
    })
}

/// Window order to use: `k`, or the full recurrence if it terminated first.
pub(crate) fn effective_k(rec: &LanczosRecurrence, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::invalid("iteration count k must be at least 1"));
    }
    if rec.exhausted && k > rec.len() {
        Ok(rec.len())
    } else {
        rec.require_len(k)?;
        Ok(k)
    }
}

/// Coefficients `c` with `lan-OR_k = ‖b‖·Q c`.
pub fn lanczos_or_coefficients(
    rec: &LanczosRecurrence,
    k: usize,
    pair: &StabilizedPair,
) -> Result<Vec<f64>> {
    let k = effective_k(rec, k)?;
    let nwin = truncated_poly_of_extended(rec, &pair.ntilde, k)?;
    let mwin = truncated_poly_of_extended(rec, &pair.mtilde, k)?;
    let rhs: Vec<f64> = (0..k).map(|i| mwin.get(i, 0)).collect();
    let ldl = dense_ldl(&nwin, PivotPolicy::Positive)?;
    ldl.solve(&rhs)
}

/// The optimal iterate `Q ([Ñ(T̂)]_{:k,:k})⁻¹ [M̃(T̂)]_{:k,:k} e₀ ‖b‖`.
pub fn lanczos_or_iterate(
    rec: &LanczosRecurrence,
    k: usize,
    pair: &StabilizedPair,
) -> Result<Vec<f64>> {
    let c = lanczos_or_coefficients(rec, k, pair)?;
    rec.basis_combination(&c)
}

/// `Q f(T) e₀ ‖b‖`.
pub fn lanczos_fa_iterate<F: ScalarFunction + ?Sized>(
    rec: &LanczosRecurrence,
    k: usize,
    f: &F,
) -> Result<Vec<f64>> {
    let k = effective_k(rec, k)?;
    let c = tridiag_function_apply(rec, f, k)?;
    rec.basis_combination(&c)
}

/// Lanczos-FA without storing the basis: one pass for the coefficients,
/// a second pass regenerating the basis to form the combination.
pub fn two_pass_lanczos_fa<Op, F>(op: &Op, b: &[f64], k: usize, f: &F) -> Result<Vec<f64>>
where
    Op: SymmetricOperator + ?Sized,
    F: ScalarFunction + ?Sized,
{
    two_pass_lanczos_fa_audited(op, b, k, f, None)
}

/// [`two_pass_lanczos_fa`] with its length-n buffers counted by `audit`.
pub fn two_pass_lanczos_fa_audited<Op, F>(
    op: &Op,
    b: &[f64],
    k: usize,
    f: &F,
    audit: Option<&BufferAudit>,
) -> Result<Vec<f64>>
where
    Op: SymmetricOperator + ?Sized,
    F: ScalarFunction + ?Sized,
{
    if k == 0 || k > op.dim() {
        return Err(Error::invalid(format!(
            "iteration count {k} outside 1..={}",
            op.dim()
        )));
    }
    let mut alphas = Vec::with_capacity(k);
    let mut betas = Vec::with_capacity(k);
    {
        let mut stepper = LanczosStepper::new(op, b, audit)?;
        for _ in 0..k {
            let (a, be, breakdown) = stepper.step(None);
            alphas.push(a);
            betas.push(be);
            if breakdown {
                break;
            }
        }
    }
    let steps = alphas.len();
    let rec = LanczosRecurrence::from_coefficients(alphas, betas)?;
    let coeffs = tridiag_function_apply(&rec, f, steps)?;

    let mut stepper = LanczosStepper::new(op, b, audit)?;
    let mut out = crate::audit::TrackedVec::zeros(op.dim(), audit);
    let b_norm = stepper.b_norm;
    for (j, &c) in coeffs.iter().enumerate() {
        axpy(c * b_norm, stepper.current(), &mut out);
        if j + 1 < steps {
            stepper.step(None);
        }
    }
    drop(stepper);
    Ok(out.into_vec())
}

/// `(lhs, rhs)` of the a priori bound
/// `‖lan-OR_k − r(A)b‖_H / ‖b‖_H ≤ max_λ |r(λ) − p(λ)|`, `H = Ñ(A)`,
/// for `A = diag(eigenvalues)` in the coordinates of the recurrence.
pub fn polynomial_bound_certificate(
    pair: &StabilizedPair,
    rec: &LanczosRecurrence,
    k: usize,
    p: &PolynomialCoefficients,
    eigenvalues: &[f64],
) -> Result<(f64, f64)> {
    let basis = rec.require_basis(1)?;
    if basis[0].len() != eigenvalues.len() {
        return Err(Error::DimensionMismatch {
            expected: basis[0].len(),
            found: eigenvalues.len(),
        });
    }
    let b: Vec<f64> = basis[0].iter().map(|v| v * rec.b_norm).collect();
    let x = lanczos_or_iterate(rec, k, pair)?;
    let mut err2 = 0.0;
    let mut b2 = 0.0;
    let mut rhs = 0.0_f64;
    for ((&lam, &bi), &xi) in eigenvalues.iter().zip(&b).zip(&x) {
        let h = pair.ntilde.eval(lam);
        let r = pair.spec().eval(lam);
        let e = xi - r * bi;
        err2 += h * e * e;
        b2 += h * bi * bi;
        rhs = rhs.max((r - p.eval(lam)).abs());
    }
    Ok(((err2 / b2).sqrt(), rhs))
}
