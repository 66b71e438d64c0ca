//! Load a sparse matrix from a MatrixMarket file and approximate `A⁻¹b`
//! with Lanczos-OR, using a spectrum interval estimated from Ritz values.
//!
//! cargo run --example matrix_market [-- path/to/file.mtx]

use krylov_or::lanczos::{lanczos, LanczosOptions};
use krylov_or::linalg::matrix_market::read_matrix_market_file;
use krylov_or::linalg::{norm2, SymmetricOperator};
use krylov_or::rational::{
    estimate_spectrum_interval, lanczos_or_iterate, stabilize, RationalFunctionSpec,
    SpectrumInterval,
};
use krylov_or::solvers::cg_iterate;

fn main() -> krylov_or::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/laplace1d_40.mtx").into());
    let a = read_matrix_market_file(&path)?;
    let n = a.dim();
    println!("{path}: {n}x{n}, {} stored entries", a.triplets().len());

    let b = vec![1.0; n];
    let estimate = estimate_spectrum_interval(&a, &b, 10)?;
    // The matrix is positive definite, so the padding below zero is dropped
    // and the pole of 1/x stays outside the interval.
    let interval = SpectrumInterval::new(estimate.lower.max(1e-3), estimate.upper)?;
    println!(
        "estimated spectrum interval [{:.4}, {:.4}]",
        interval.lower, interval.upper
    );

    let pair = stabilize(&RationalFunctionSpec::inverse(), interval)?;
    let rec = lanczos(&a, &b, n.min(30), LanczosOptions::with_basis(true), None)?;
    for k in [5, 10, 20, 30].into_iter().filter(|&k| k <= rec.len()) {
        let x = lanczos_or_iterate(&rec, k, &pair)?;
        let mut ax = vec![0.0; n];
        a.apply(&x, &mut ax);
        let res: Vec<f64> = ax.iter().zip(&b).map(|(p, q)| q - p).collect();
        let cg = cg_iterate(&rec, k)?;
        let diff: f64 = x
            .iter()
            .zip(&cg)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        println!(
            "k={k:>2}  residual {:.3e}  max |OR − CG| {diff:.1e}",
            norm2(&res) / norm2(&b)
        );
    }
    Ok(())
}
