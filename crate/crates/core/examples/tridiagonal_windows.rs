//! Windows of polynomials in the extended tridiagonal matrix: the leading
//! `k×k` block of `p(T̂)` needs only a few recurrence entries past `k`.

use krylov_or::lanczos::LanczosRecurrence;
use krylov_or::poly::PolynomialCoefficients;
use krylov_or::tridiag::{
    get_poly, truncated_poly_of_extended, window_requirement, StreamingTridiagonalSquare,
};

fn main() -> krylov_or::Result<()> {
    let alphas = vec![2.0, 1.0, 3.0, 0.5, 1.5, 2.5];
    let betas = vec![1.0, 0.5, 0.25, 0.75, 1.0, 0.5];
    let rec = LanczosRecurrence::from_coefficients(alphas.clone(), betas.clone())?;

    let p = PolynomialCoefficients::new(vec![1.0, -1.0, 0.5, 0.0, 0.1]);
    let k = 4;
    println!(
        "window of degree {} at k={k} reads {} recurrence entries",
        p.degree(),
        window_requirement(k, p.degree())
    );
    let w = truncated_poly_of_extended(&rec, &p, k)?;
    for i in 0..k {
        let row: Vec<String> = (0..k).map(|j| format!("{:8.4}", w.get(i, j))).collect();
        println!("  [{}]", row.join(" "));
    }

    // The square streamed one coefficient pair at a time.
    let c = PolynomialCoefficients::new(vec![0.5, 0.0, 1.0]);
    let mut sq = StreamingTridiagonalSquare::new();
    for j in 0..alphas.len() {
        sq.read_stream(alphas[j], betas[j]);
        if j >= 1 {
            let col = get_poly(&c, &sq, j - 1)?;
            println!("column {} of T̂² + 0.5 I: {:?}", j - 1, col);
        }
    }
    Ok(())
}
