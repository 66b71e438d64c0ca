//! A rational proxy for the sign function from Gauss–Legendre quadrature,
//! applied term by term with Lanczos-OR from a single Lanczos run.

use krylov_or::experiments::{NormSpec, Problem, SpectrumSpec};
use krylov_or::function::Sign;
use krylov_or::linalg::DiagonalOperator;
use krylov_or::matfun::{build_sign_quadrature_scaled, rational_termwise_or};
use krylov_or::rational::{stabilize, SpectrumInterval};
use krylov_or::streaming::termwise_or_lm;

fn main() -> krylov_or::Result<()> {
    let eigs = SpectrumSpec::two_sided_model().eigenvalues()?;
    let problem = Problem::new(eigs.clone())?;
    let exact = problem.exact(&Sign::new(0.0))?;
    let interval = SpectrumInterval::hull(&eigs)?;
    let norm = NormSpec::ASquared { shift: 0.0 };

    let (lo, hi) = eigs.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), l| {
        (lo.min(l.abs()), hi.max(l.abs()))
    });
    let scale = (lo * hi).sqrt();
    for m in [8, 16, 32] {
        let rule = build_sign_quadrature_scaled(m, scale)?;
        println!(
            "{m:>2} nodes: max |sign − proxy| on the spectrum {:.2e}",
            rule.sup_error(&eigs)
        );
    }

    let rule = build_sign_quadrature_scaled(16, scale)?;
    let terms = rule.terms();
    let rec = problem.recurrence(61, true)?;
    for k in (10..=60).step_by(10) {
        let x = rational_termwise_or(&rec, k, &terms, interval)?;
        println!(
            "k={k:>2}: relative A²-error {:.3e}",
            problem.relative_error(&x, &exact, &norm)
        );
    }

    // The same sum without a stored basis: one processor per term, all fed
    // by one Lanczos run.
    let pairs = terms
        .iter()
        .map(|t| Ok((1.0, stabilize(&t.to_spec()?, interval)?)))
        .collect::<krylov_or::Result<Vec<_>>>()?;
    let a = DiagonalOperator::new(eigs)?;
    let b = vec![1.0 / (a.eigenvalues().len() as f64).sqrt(); a.eigenvalues().len()];
    let x = termwise_or_lm(&a, &b, 60, &pairs)?;
    println!(
        "streamed k=60 (no reorthogonalization): relative A²-error {:.3e}",
        problem.relative_error(&x, &exact, &norm)
    );
    Ok(())
}
