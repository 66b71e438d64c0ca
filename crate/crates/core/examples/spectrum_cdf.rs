//! Estimating the cumulative spectral distribution `Σ_{λ ≤ c} w_λ` from a
//! short Lanczos run, with the step-function Gauss quadrature estimate for
//! comparison.

use krylov_or::experiments::{Problem, SpectrumSpec};
use krylov_or::matfun::{spectrum_cdf, spectrum_cdf_fa};

fn main() -> krylov_or::Result<()> {
    let eigs = SpectrumSpec::chi2_quantiles()?.eigenvalues()?;
    let problem = Problem::new(eigs.clone())?;
    let k = 10;
    let rec = problem.recurrence(k + 1, true)?;

    let thresholds: Vec<f64> = (0..=12).map(|i| 2.0 * i as f64).collect();
    let or = spectrum_cdf(&rec, k, &thresholds)?;
    let fa = spectrum_cdf_fa(&rec, k, &thresholds)?;
    let n = eigs.len() as f64;
    println!("   c    exact   OR       Gauss");
    for ((c, o), g) in thresholds.iter().zip(&or).zip(&fa) {
        let exact = eigs.iter().filter(|&&l| l <= *c).count() as f64 / n;
        let o = o.map_or("  gap  ".to_string(), |v| format!("{v:.4}"));
        println!("{c:5.1}   {exact:.4}  {o}   {g:.4}");
    }
    Ok(())
}
