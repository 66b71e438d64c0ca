//! Symmetric eigensolvers for the small projected problems.

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::dense::{DenseMatrix, DenseSymmetricMatrix};

/// Eigenvalues in ascending order, eigenvectors as the matching columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

impl SymmetricEigen {
    /// `V f(Λ) Vᵀ v`; the function values are supplied per eigenvalue.
    pub fn apply_spectral(&self, fvals: &[f64], v: &[f64]) -> Vec<f64> {
        let mut w = self.eigenvectors.transpose_matvec(v);
        for (wi, fi) in w.iter_mut().zip(fvals) {
            *wi *= fi;
        }
        self.eigenvectors.matvec(&w)
    }

    fn sorted(eigenvalues: Vec<f64>, vectors: DenseMatrix) -> Self {
        let n = eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let eigenvectors = DenseMatrix::from_fn(vectors.rows(), n, |i, j| vectors.get(i, order[j]));
        Self {
            eigenvalues: order.iter().map(|&i| eigenvalues[i]).collect(),
            eigenvectors,
        }
    }
}

/// Eigendecomposition of the symmetric tridiagonal matrix with diagonal
/// `alphas` and off-diagonal `betas` (implicit QL, Wilkinson shifts).
pub fn tridiag_eigendecomposition(alphas: &[f64], betas: &[f64]) -> Result<SymmetricEigen> {
    let n = alphas.len();
    if n == 0 {
        return Err(Error::invalid("empty tridiagonal matrix"));
    }
    if betas.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: betas.len(),
        });
    }
    let mut d = alphas.to_vec();
    let mut e = betas.to_vec();
    e.push(0.0);
    let mut z = DenseMatrix::identity(n);
    let cap = 30 * n;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > cap {
                return Err(Error::NotConverged {
                    operation: "tridiagonal eigensolver",
                    iterations: cap,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zk1 = z.get(k, i + 1);
                    let zk = z.get(k, i);
                    z.set(k, i + 1, s * zk + c * zk1);
                    z.set(k, i, c * zk - s * zk1);
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(SymmetricEigen::sorted(d, z))
}

/// Eigendecomposition of a dense symmetric matrix by cyclic Jacobi rotations.
pub fn dense_sym_eigendecomposition(m: &DenseSymmetricMatrix) -> Result<SymmetricEigen> {
    const MAX_SWEEPS: usize = 100;
    let n = m.order();
    let mut a = m.as_dense().clone();
    let mut v = DenseMatrix::identity(n);
    let target = 1e-14 * m.frobenius();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a.get(i, j) * a.get(i, j))
            .sum::<f64>()
            .sqrt();
        if off <= target {
            let eigenvalues = (0..n).map(|i| a.get(i, i)).collect();
            return Ok(SymmetricEigen::sorted(eigenvalues, v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a.get(p, p), a.get(q, q));
                // Negligible against both diagonal entries: drop it.
                if app.abs() + 100.0 * apq.abs() == app.abs()
                    && aqq.abs() + 100.0 * apq.abs() == aqq.abs()
                {
                    a.set(p, q, 0.0);
                    a.set(q, p, 0.0);
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = 1.0_f64.copysign(theta) / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for r in 0..n {
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    a.set(r, p, c * arp - s * arq);
                    a.set(r, q, s * arp + c * arq);
                }
                for r in 0..n {
                    let apr = a.get(p, r);
                    let aqr = a.get(q, r);
                    a.set(p, r, c * apr - s * aqr);
                    a.set(q, r, s * apr + c * aqr);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for r in 0..n {
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, c * vrp - s * vrq);
                    v.set(r, q, s * vrp + c * vrq);
                }
            }
        }
    }
    Err(Error::NotConverged {
        operation: "Jacobi eigensolver",
        iterations: MAX_SWEEPS,
    })
}

/// Evaluates `f` on a computed spectrum, rejecting eigenvalues that sit on a
/// declared singularity of `f` (relative to the spectral radius) or produce
/// non-finite values.
pub(crate) fn eval_on_spectrum<F: ScalarFunction + ?Sized>(
    f: &F,
    eigenvalues: &[f64],
) -> Result<Vec<f64>> {
    let radius = eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * radius.max(f64::MIN_POSITIVE);
    let singular = f.singularities();
    eigenvalues
        .iter()
        .map(|&lam| {
            if singular.iter().any(|s| (lam - s).abs() <= tol) {
                return Err(Error::FunctionUndefined { at: lam });
            }
            let y = f.eval(lam);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::FunctionUndefined { at: lam })
            }
        })
        .collect()
}

/// `f(M) v` through the eigendecomposition of `M`.
pub fn apply_matrix_function_small<F: ScalarFunction + ?Sized>(
    m: &DenseSymmetricMatrix,
    f: &F,
    v: &[f64],
) -> Result<Vec<f64>> {
    if v.len() != m.order() {
        return Err(Error::DimensionMismatch {
            expected: m.order(),
            found: v.len(),
        });
    }
    let eig = dense_sym_eigendecomposition(m)?;
    let fvals = eval_on_spectrum(f, &eig.eigenvalues)?;
    Ok(eig.apply_spectral(&fvals, v))
}
