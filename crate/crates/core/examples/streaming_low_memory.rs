//! Lanczos-OR without storing the Krylov basis. The audit counts live
//! length-n buffers; the peak stays fixed as k grows.

use krylov_or::audit::BufferAudit;
use krylov_or::lanczos::{lanczos, LanczosOptions};
use krylov_or::linalg::vector::distance;
use krylov_or::linalg::DiagonalOperator;
use krylov_or::rational::{lanczos_or_iterate, stabilize, RationalFunctionSpec, SpectrumInterval};
use krylov_or::streaming::{lanczos_fa_lm, lanczos_or_lm_audited};

fn main() -> krylov_or::Result<()> {
    let n = 2000;
    let eigs: Vec<f64> = (0..n)
        .map(|i| 1.0 + 9.0 * i as f64 / (n - 1) as f64)
        .collect();
    let a = DiagonalOperator::new(eigs.clone())?;
    let b = vec![1.0; n];
    let spec = RationalFunctionSpec::inverse_shifted_square(0.05)?;
    let pair = stabilize(&spec, SpectrumInterval::hull(&eigs)?)?;

    for k in [10, 50, 200] {
        let audit = BufferAudit::new();
        let x = lanczos_or_lm_audited(&a, &b, k, &pair, Some(&audit))?;
        let fa = lanczos_fa_lm(&a, &b, k, &pair)?;
        let rec = lanczos(&a, &b, k + 1, LanczosOptions::with_basis(false), None)?;
        let dense = lanczos_or_iterate(&rec, k, &pair)?;
        println!(
            "k={k:>3}: peak {} vectors of length {n}; |lm − dense| = {:.1e}; |OR − FA| = {:.1e}",
            audit.peak(),
            distance(&x, &dense),
            distance(&x, &fa)
        );
    }
    Ok(())
}
