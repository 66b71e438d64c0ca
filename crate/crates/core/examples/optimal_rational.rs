//! Lanczos-OR for a rational function with poles inside the spectrum,
//! next to Lanczos-FA and the a priori polynomial bound.

use krylov_or::lanczos::{lanczos, LanczosOptions};
use krylov_or::linalg::DiagonalOperator;
use krylov_or::poly::PolynomialCoefficients;
use krylov_or::rational::{
    lanczos_fa_iterate, lanczos_or_iterate, polynomial_bound_certificate, stabilize,
    RationalFunctionSpec, SpectrumInterval,
};
use num_complex::Complex64;

fn main() -> krylov_or::Result<()> {
    let eigs: Vec<f64> = (0..120)
        .map(|i| -4.0 + i as f64 * (8.0 / 119.0))
        .filter(|l: &f64| l.abs() > 0.2)
        .collect();
    let n = eigs.len();
    let a = DiagonalOperator::new(eigs.clone())?;
    let b = vec![1.0; n];

    // r(x) = (x + 1) / ((x − 0.1)(x² + 2x + 5)): one real pole between
    // eigenvalues, one complex pair.
    let spec = RationalFunctionSpec::new(
        PolynomialCoefficients::new(vec![1.0, 1.0]),
        vec![(0.1, 1)],
        vec![(Complex64::new(-1.0, 2.0), 1)],
    )?;
    let pair = stabilize(&spec, SpectrumInterval::hull(&eigs)?)?;
    println!(
        "stabilized: deg Ñ = {}, roots added {:?}",
        pair.ntilde.degree(),
        pair.stabilizer_roots
    );

    let exact: Vec<f64> = b
        .iter()
        .zip(&eigs)
        .map(|(bi, &l)| spec.eval(l) * bi)
        .collect();
    let h: Vec<f64> = eigs.iter().map(|&l| pair.ntilde.eval(l)).collect();
    let h_err = |x: &[f64]| -> f64 {
        x.iter()
            .zip(&exact)
            .zip(&h)
            .map(|((p, q), w)| w * (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()
    };
    let rec = lanczos(&a, &b, 42, LanczosOptions::with_basis(true), None)?;
    println!(" k   OR error (H)   FA error (H)");
    for k in (4..=40).step_by(4) {
        let or = lanczos_or_iterate(&rec, k, &pair)?;
        let fa = lanczos_fa_iterate(&rec, k, &spec)
            .map(|x| format!("{:.3e}", h_err(&x)))
            .unwrap_or_else(|e| format!("({e})"));
        println!("{k:>2}   {:.3e}      {fa}", h_err(&or));
    }

    let (lhs, rhs) = polynomial_bound_certificate(
        &pair,
        &rec,
        10,
        &PolynomialCoefficients::constant(0.0),
        &eigs,
    )?;
    println!("bound at k=10 with p = 0: {lhs:.3e} ≤ {rhs:.3e}");
    Ok(())
}
