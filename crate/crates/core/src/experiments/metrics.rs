//! Ground truth and error norms for diagonal test problems.

use std::fmt;

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::eigen::eval_on_spectrum;
use crate::linalg::operator::{DiagonalOperator, SymmetricOperator};
use crate::poly::PolynomialCoefficients;

/// `f(A) b` for diagonal `A`, entry by entry.
pub fn exact_matrix_function<F: ScalarFunction + ?Sized>(
    a: &DiagonalOperator,
    f: &F,
    b: &[f64],
) -> Result<Vec<f64>> {
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.len(),
        });
    }
    let fv = eval_on_spectrum(f, a.eigenvalues())?;
    Ok(fv.iter().zip(b).map(|(f, b)| f * b).collect())
}

/// The norm an error is measured in, as a function of the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    Euclidean,
    A,
    /// `(A − cI)²`.
    ASquared {
        shift: f64,
    },
    /// `A² + cI`.
    ASquaredPlus {
        c: f64,
    },
    /// `h(A)` for a polynomial `h` positive on the spectrum.
    Polynomial(PolynomialCoefficients),
}

impl NormSpec {
    pub fn weight(&self, lambda: f64) -> f64 {
        match self {
            NormSpec::Euclidean => 1.0,
            NormSpec::A => lambda,
            NormSpec::ASquared { shift } => (lambda - shift).powi(2),
            NormSpec::ASquaredPlus { c } => lambda * lambda + c,
            NormSpec::Polynomial(p) => p.eval(lambda),
        }
    }

    /// Short label used in reports: `l2`, `A`, `A2`, `A2+cI` or `H`.
    pub fn label(&self) -> &'static str {
        match self {
            NormSpec::Euclidean => "l2",
            NormSpec::A => "A",
            NormSpec::ASquared { .. } => "A2",
            NormSpec::ASquaredPlus { .. } => "A2+cI",
            NormSpec::Polynomial(_) => "H",
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `√(vᵀ H v)` with `H` diagonal in the eigenbasis.
pub fn weighted_norm(v: &[f64], eigenvalues: &[f64], norm: &NormSpec) -> f64 {
    v.iter()
        .zip(eigenvalues)
        .map(|(x, &l)| norm.weight(l) * x * x)
        .sum::<f64>()
        .sqrt()
}

/// `√((x − exact)ᵀ H (x − exact))`.
pub fn weighted_error(x: &[f64], exact: &[f64], eigenvalues: &[f64], norm: &NormSpec) -> f64 {
    x.iter()
        .zip(exact)
        .zip(eigenvalues)
        .map(|((a, b), &l)| norm.weight(l) * (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}
