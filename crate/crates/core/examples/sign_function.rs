//! Three Krylov approximations to `sign(A)b` on an indefinite spectrum:
//! sign-OR, Lanczos-FA and harmonic Ritz interpolation, with the bound on
//! the distance between sign-OR and Lanczos-FA.

use krylov_or::experiments::{NormSpec, Problem, SpectrumSpec};
use krylov_or::function::Sign;
use krylov_or::matfun::{sign_coalescence_gap, sign_harmonic_iterate, sign_or_iterate};
use krylov_or::rational::lanczos_fa_iterate;

fn main() -> krylov_or::Result<()> {
    let eigs = SpectrumSpec::two_sided_model().eigenvalues()?;
    let problem = Problem::new(eigs)?;
    let exact = problem.exact(&Sign::new(0.0))?;
    let norm = NormSpec::ASquared { shift: 0.0 };
    let rec = problem.recurrence(41, true)?;

    let fmt = |r: krylov_or::Result<Vec<f64>>| match r {
        Ok(x) => format!("{:.3e}", problem.relative_error(&x, &exact, &norm)),
        Err(_) => "   n/a    ".to_string(),
    };
    println!(" k   sign-OR     FA          harmonic    gap / bound");
    for k in (5..=40).step_by(5) {
        let (gap, bound) = sign_coalescence_gap(&rec, k)?;
        println!(
            "{k:>2}   {}   {}   {}   {gap:.1e} / {bound:.1e}",
            fmt(sign_or_iterate(&rec, k, 0.0)),
            fmt(lanczos_fa_iterate(&rec, k, &Sign::new(0.0))),
            fmt(sign_harmonic_iterate(&rec, k, 0.0)),
        );
    }
    Ok(())
}
