//! CG, MINRES and shifted QMR from one Lanczos run, and restarted CG.

use krylov_or::lanczos::{lanczos, LanczosOptions};
use krylov_or::linalg::vector::distance;
use krylov_or::linalg::{norm2, DiagonalOperator};
use krylov_or::solvers::{cg_iterate, minres_iterate, qmr_shifted_iterate, restarted_cg};
use num_complex::Complex64;

fn main() -> krylov_or::Result<()> {
    let n = 300;
    let eigs: Vec<f64> = (0..n).map(|i| 0.5 + i as f64 * 0.03).collect();
    let a = DiagonalOperator::new(eigs.clone())?;
    let b = vec![1.0 / (n as f64).sqrt(); n];
    let exact: Vec<f64> = b.iter().zip(&eigs).map(|(bi, l)| bi / l).collect();
    let rec = lanczos(&a, &b, 40, LanczosOptions::with_basis(true), None)?;

    println!(" k   CG error    MINRES error");
    for k in [5, 10, 20, 40] {
        let cg = cg_iterate(&rec, k)?;
        let mr = minres_iterate(&rec, k)?;
        println!(
            "{k:>2}   {:.3e}   {:.3e}",
            distance(&cg, &exact),
            distance(&mr, &exact)
        );
    }

    let z = Complex64::new(0.0, 1.5);
    let x = qmr_shifted_iterate(&rec, 40, z)?;
    let err: f64 = x
        .iter()
        .zip(&b)
        .zip(&eigs)
        .map(|((xi, bi), l)| (xi - bi / (Complex64::new(*l, 0.0) - z)).norm_sqr())
        .sum::<f64>()
        .sqrt();
    println!("QMR for (A − 1.5i)⁻¹b at k=40: error {err:.3e}");

    for m in [Some(10), Some(20), None] {
        let iterates = restarted_cg(&a, &b, m, 60)?;
        let last = iterates.last().expect("60 products");
        let label = m.map_or("∞".to_string(), |m| m.to_string());
        println!(
            "restarted CG m={label:>2}: error after 60 products {:.3e}",
            distance(last, &exact) / norm2(&exact)
        );
    }
    Ok(())
}
