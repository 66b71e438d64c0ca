//! The Lanczos recurrence in its two forms: with a stored, reorthogonalized
//! basis, and streamed through an observer with two length-n buffers.

use krylov_or::lanczos::{lanczos, LanczosOptions};
use krylov_or::linalg::{dot, DiagonalOperator};

fn main() -> krylov_or::Result<()> {
    let n = 200;
    let a = DiagonalOperator::new((0..n).map(|i| 1.0 + i as f64 * 0.05).collect())?;
    let b = vec![1.0; n];
    let k = 12;

    let stored = lanczos(&a, &b, k, LanczosOptions::with_basis(true), None)?;
    let q = stored.basis().expect("basis stored");
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot(&q[i], &q[j])? - target).abs());
        }
    }
    println!("‖b‖ = {:.4}, max |QᵀQ − I| = {worst:.1e}", stored.b_norm);

    let mut rows = Vec::new();
    let mut observer = |qj: &[f64], alpha: f64, beta: f64| rows.push((qj[0], alpha, beta));
    let streamed = lanczos(&a, &b, k, LanczosOptions::streaming(), Some(&mut observer))?;
    println!(" j   alpha      beta       q_j[0]");
    for (j, (q0, alpha, beta)) in rows.iter().enumerate() {
        println!("{j:>2}  {alpha:9.5}  {beta:9.5}  {q0:9.5}");
    }
    println!("streamed run has no basis: {}", streamed.basis().is_none());

    // A shift moves every alpha and leaves the betas alone.
    let shifted = DiagonalOperator::new(a.eigenvalues().iter().map(|l| l - 2.0).collect())?;
    let moved = lanczos(&shifted, &b, k, LanczosOptions::streaming(), None)?;
    let shift_err = moved
        .alphas
        .iter()
        .zip(&streamed.alphas)
        .map(|(x, y)| (x - (y - 2.0)).abs())
        .fold(0.0, f64::max);
    println!("shifted alphas off by at most {shift_err:.1e}");
    Ok(())
}
