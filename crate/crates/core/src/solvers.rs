//! Krylov projection solvers expressed through the Lanczos recurrence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lanczos::{lanczos, LanczosOptions, LanczosRecurrence};
use crate::linalg::banded::BandedSymmetricMatrix;
use crate::linalg::operator::SymmetricOperator;
use crate::linalg::vector::{axpy, dot_unchecked, norm2};
use crate::poly::PolynomialCoefficients;
use crate::rational::effective_k;
use crate::streaming::ldl::{dense_ldl, PivotPolicy};
use crate::tridiag::truncated_poly_of_extended;

fn e0_scaled(k: usize, s: f64) -> Vec<f64> {
    let mut e = vec![0.0; k];
    e[0] = s;
    e
}

/// `T e₀` truncated to length `k`.
fn t_e0(rec: &LanczosRecurrence, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[0] = rec.alphas[0];
    if k > 1 {
        v[1] = rec.betas[0];
    }
    v
}

/// Coefficients of the CG iterate, `T⁻¹ e₀`.
pub fn cg_coefficients(rec: &LanczosRecurrence, k: usize) -> Result<Vec<f64>> {
    let k = effective_k(rec, k)?;
    let (alphas, betas) = rec.tridiagonal(k);
    let t = BandedSymmetricMatrix::from_tridiagonal(alphas, betas);
    let ldl = dense_ldl(&t, PivotPolicy::Nonzero).map_err(|_| Error::Singular {
        operation: "CG tridiagonal solve",
    })?;
    ldl.solve(&e0_scaled(k, 1.0))
}

/// `Q T⁻¹ e₀ ‖b‖`, the A-norm optimal iterate for positive definite `A`.
pub fn cg_iterate(rec: &LanczosRecurrence, k: usize) -> Result<Vec<f64>> {
    let c = cg_coefficients(rec, k)?;
    rec.basis_combination(&c)
}

/// Coefficients of the MINRES iterate, `([T̂²]_{:k,:k})⁻¹ T e₀`.
pub fn minres_coefficients(rec: &LanczosRecurrence, k: usize) -> Result<Vec<f64>> {
    let k = effective_k(rec, k)?;
    let w = truncated_poly_of_extended(rec, &PolynomialCoefficients::monomial(2), k)?;
    let ldl = dense_ldl(&w, PivotPolicy::Positive).map_err(|_| Error::Singular {
        operation: "MINRES window solve",
    })?;
    ldl.solve(&t_e0(rec, k))
}

/// `Q ([T̂²]_{:k,:k})⁻¹ T e₀ ‖b‖`, minimizing the residual 2-norm.
pub fn minres_iterate(rec: &LanczosRecurrence, k: usize) -> Result<Vec<f64>> {
    let c = minres_coefficients(rec, k)?;
    rec.basis_combination(&c)
}

/// `Q ([T̂²]_{:k,:k} + |z|² I)⁻¹ (T − z̄ I) e₀ ‖b‖`, the
/// `(A² + |z|² I)`-norm optimal approximation to `(A − zI)⁻¹ b`.
///
/// The system matrix is real, so the real and imaginary parts of the
/// right-hand side are solved separately.
pub fn qmr_shifted_iterate(
    rec: &LanczosRecurrence,
    k: usize,
    z: Complex64,
) -> Result<Vec<Complex64>> {
    let k = effective_k(rec, k)?;
    let p = PolynomialCoefficients::new(vec![z.norm_sqr(), 0.0, 1.0]);
    let w = truncated_poly_of_extended(rec, &p, k)?;
    let ldl = dense_ldl(&w, PivotPolicy::Positive).map_err(|_| Error::Singular {
        operation: "shifted QMR window solve",
    })?;
    let mut re = t_e0(rec, k);
    re[0] -= z.re;
    let im = e0_scaled(k, z.im);
    let cr = ldl.solve(&re)?;
    let ci = ldl.solve(&im)?;
    let xr = rec.basis_combination(&cr)?;
    let xi = rec.basis_combination(&ci)?;
    Ok(xr
        .into_iter()
        .zip(xi)
        .map(|(a, b)| Complex64::new(a, b))
        .collect())
}

/// `Q (Qᵀ H Q)⁻¹ Qᵀ H f`: the H-norm closest point of `span(Q)` to `f`.
pub fn hnorm_projection_oracle<H: SymmetricOperator + ?Sized>(
    h: &H,
    basis: &[Vec<f64>],
    target: &[f64],
) -> Result<Vec<f64>> {
    let k = basis.len();
    if k == 0 {
        return Err(Error::invalid("projection needs at least one basis vector"));
    }
    let n = h.dim();
    if target.len() != n || basis.iter().any(|q| q.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: target.len(),
        });
    }
    let hq: Vec<Vec<f64>> = basis
        .iter()
        .map(|q| {
            let mut y = vec![0.0; n];
            h.apply(q, &mut y);
            y
        })
        .collect();
    let mut gram = BandedSymmetricMatrix::zeros(k, k - 1);
    for i in 0..k {
        for j in 0..=i {
            gram.set(i, j, dot_unchecked(&basis[i], &hq[j]));
        }
    }
    let rhs: Vec<f64> = hq.iter().map(|v| dot_unchecked(v, target)).collect();
    let ldl = dense_ldl(&gram, PivotPolicy::Positive).map_err(|_| Error::Singular {
        operation: "projection Gram matrix",
    })?;
    let c = ldl.solve(&rhs)?;
    let mut out = vec![0.0; n];
    for (q, ci) in basis.iter().zip(c) {
        axpy(ci, q, &mut out);
    }
    Ok(out)
}

/// Restarted CG for positive definite `A`: every `restart` matrix-vector
/// products the Lanczos recurrence is restarted from the current residual.
/// `None` never restarts.
///
/// Returns the iterate after each matrix-vector product; entry `i` used
/// `i + 1` products. Each cycle runs with full reorthogonalization, and the
/// residual carried into the next cycle comes from the recurrence,
/// `r = −‖r₀‖ β_{m−1} [T⁻¹e₀]_{m−1} q_m`, at no extra product.
pub fn restarted_cg<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    b: &[f64],
    restart: Option<usize>,
    max_matvecs: usize,
) -> Result<Vec<Vec<f64>>> {
    let n = op.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    if restart == Some(0) {
        return Err(Error::invalid("restart length must be positive"));
    }
    let mut history = Vec::with_capacity(max_matvecs);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    while history.len() < max_matvecs {
        if norm2(&r) == 0.0 {
            break;
        }
        let remaining = max_matvecs - history.len();
        let len = restart.unwrap_or(usize::MAX).min(remaining).min(n);
        let rec = lanczos(op, &r, len, LanczosOptions::with_basis(true), None)?;
        let basis = rec.basis().expect("basis requested");
        let steps = rec.len();
        let mut last = Vec::new();
        for j in 1..=steps {
            let c = cg_coefficients(&rec, j).map_err(|_| Error::Singular {
                operation: "restarted CG cycle",
            })?;
            let mut xj = x.clone();
            for (q, &cj) in basis.iter().zip(&c) {
                axpy(cj * rec.b_norm, q, &mut xj);
            }
            history.push(xj);
            last = c;
        }
        x = history.last().expect("cycle produced iterates").clone();
        if rec.exhausted {
            break;
        }
        let next = rec.next_vector.as_ref().expect("basis requested");
        let s = -rec.b_norm * rec.betas[steps - 1] * last[steps - 1];
        r = next.iter().map(|v| s * v).collect();
    }
    Ok(history)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator::{DiagonalOperator, SquaredShifted};

    fn dist(a: &[f64], b: &[f64]) -> f64 {
        crate::linalg::vector::distance(a, b)
    }

    #[test]
    fn cg_examples() {
        let a = DiagonalOperator::new(vec![1.0, 2.0, 3.0]).unwrap();
        let b = vec![1.0 / 3f64.sqrt(); 3];
        let rec = lanczos(&a, &b, 3, LanczosOptions::with_basis(true), None).unwrap();
        let x1 = cg_iterate(&rec, 1).unwrap();
        assert!(dist(&x1, &b.iter().map(|v| v / 2.0).collect::<Vec<_>>()) < 1e-15);
        let x3 = cg_iterate(&rec, 3).unwrap();
        let exact: Vec<f64> = b.iter().zip([1.0, 2.0, 3.0]).map(|(v, l)| v / l).collect();
        assert!(dist(&x3, &exact) < 1e-8 * norm2(&exact));

        let id = DiagonalOperator::new(vec![1.0; 3]).unwrap();
        let b = vec![1.0, 2.0, 3.0];
        let rec = lanczos(&id, &b, 1, LanczosOptions::with_basis(true), None).unwrap();
        assert!(dist(&cg_iterate(&rec, 1).unwrap(), &b) < 1e-14);
    }

    #[test]
    fn minres_examples() {
        let a = DiagonalOperator::new(vec![1.0, -2.0]).unwrap();
        let b = vec![1.0 / 2f64.sqrt(); 2];
        let rec = lanczos(&a, &b, 1, LanczosOptions::with_basis(true), None).unwrap();
        assert!((rec.alphas[0] + 0.5).abs() < 1e-15);
        assert!((rec.betas[0] - 1.5).abs() < 1e-15);
        let x = minres_iterate(&rec, 1).unwrap();
        assert!(dist(&x, &b.iter().map(|v| -0.2 * v).collect::<Vec<_>>()) < 1e-15);

        let id = DiagonalOperator::new(vec![1.0; 2]).unwrap();
        let rec = lanczos(&id, &b, 1, LanczosOptions::with_basis(true), None).unwrap();
        assert!(dist(&minres_iterate(&rec, 1).unwrap(), &b) < 1e-15);
    }

    #[test]
    fn qmr_examples() {
        let id = DiagonalOperator::new(vec![1.0; 2]).unwrap();
        let b = vec![0.6, 0.8];
        let rec = lanczos(&id, &b, 1, LanczosOptions::with_basis(true), None).unwrap();
        let x = qmr_shifted_iterate(&rec, 1, Complex64::new(0.0, 2.0)).unwrap();
        for (xi, bi) in x.iter().zip(&b) {
            let expect = Complex64::new(1.0, 2.0) / 5.0 * bi;
            assert!((xi - expect).norm() < 1e-15);
        }

        let a = DiagonalOperator::new(vec![1.0, -2.0, 3.0, -0.5]).unwrap();
        let b = vec![0.5; 4];
        let rec = lanczos(&a, &b, 3, LanczosOptions::with_basis(true), None).unwrap();
        let q = qmr_shifted_iterate(&rec, 3, Complex64::new(0.0, 0.0)).unwrap();
        let m = minres_iterate(&rec, 3).unwrap();
        for (qi, mi) in q.iter().zip(&m) {
            assert!((qi.re - mi).abs() < 1e-14 && qi.im == 0.0);
        }
    }

    #[test]
    fn oracle_examples() {
        let h = DiagonalOperator::new(vec![1.0, 4.0, 9.0]).unwrap();
        let basis = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let inside = vec![2.0, -3.0, 0.0];
        assert!(
            dist(
                &hnorm_projection_oracle(&h, &basis, &inside).unwrap(),
                &inside
            ) < 1e-15
        );
        let id = DiagonalOperator::new(vec![1.0; 3]).unwrap();
        let p = hnorm_projection_oracle(&id, &basis, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p, vec![1.0, 2.0, 0.0]);

        let skew = vec![vec![1.0, 1.0, 1.0], vec![0.0, 1.0, -1.0]];
        let f = [0.3, -1.0, 2.0];
        let p = hnorm_projection_oracle(&h, &skew, &f).unwrap();
        let e: Vec<f64> = f.iter().zip(&p).map(|(a, b)| a - b).collect();
        let mut he = vec![0.0; 3];
        h.apply(&e, &mut he);
        let mut hf = vec![0.0; 3];
        h.apply(&f, &mut hf);
        for q in &skew {
            assert!(dot_unchecked(&he, q).abs() <= 1e-10 * norm2(&hf));
        }
    }

    #[test]
    fn minres_is_a_squared_projection() {
        let a = DiagonalOperator::new(vec![-3.0, -1.0, 0.5, 2.0, 4.0, 7.0]).unwrap();
        let b = vec![1.0, 0.5, -1.0, 2.0, 0.3, 1.0];
        let rec = lanczos(&a, &b, 4, LanczosOptions::with_basis(true), None).unwrap();
        let target: Vec<f64> = b.iter().zip(a.eigenvalues()).map(|(v, l)| v / l).collect();
        let h = SquaredShifted::new(&a, 0.0);
        for k in 1..=4 {
            let oracle = hnorm_projection_oracle(&h, &rec.basis().unwrap()[..k], &target).unwrap();
            let m = minres_iterate(&rec, k).unwrap();
            assert!(dist(&oracle, &m) <= 1e-10 * norm2(&target));
        }
    }

    #[test]
    fn restart_longer_than_dimension_is_plain_cg() {
        let lams: Vec<f64> = (1..=8).map(|i| (i * i) as f64).collect();
        let a = DiagonalOperator::new(lams).unwrap();
        let b = vec![1.0; 8];
        let hist = restarted_cg(&a, &b, Some(50), 8).unwrap();
        let rec = lanczos(&a, &b, 8, LanczosOptions::with_basis(true), None).unwrap();
        for (k, x) in hist.iter().enumerate() {
            assert!(dist(x, &cg_iterate(&rec, k + 1).unwrap()) < 1e-12);
        }
        let plain = restarted_cg(&a, &b, None, 8).unwrap();
        assert_eq!(plain, hist);
    }

    #[test]
    fn restart_one_decreases_energy_error() {
        let lams: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let a = DiagonalOperator::new(lams.clone()).unwrap();
        let b = vec![1.0; 10];
        let exact: Vec<f64> = lams.iter().map(|l| 1.0 / l).collect();
        let hist = restarted_cg(&a, &b, Some(1), 30).unwrap();
        let anorm = |x: &[f64]| {
            x.iter()
                .zip(&exact)
                .zip(&lams)
                .map(|((xi, ei), l)| l * (xi - ei) * (xi - ei))
                .sum::<f64>()
                .sqrt()
        };
        let errs: Vec<f64> = hist.iter().map(|x| anorm(x)).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
    }
}
