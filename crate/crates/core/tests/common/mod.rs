#![allow(dead_code)]

use krylov_or::lanczos::{lanczos, LanczosOptions, LanczosRecurrence};
use krylov_or::linalg::DiagonalOperator;
use krylov_or::poly::PolynomialCoefficients;
use krylov_or::rational::RationalFunctionSpec;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` eigenvalues drawn uniformly from `[lo, hi]`, sorted.
pub fn uniform_spectrum(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| r.gen_range(lo..hi)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues on both sides of zero, at least `gap` away from it.
pub fn indefinite_spectrum(r: &mut ChaCha8Rng, n: usize, gap: f64, reach: f64) -> Vec<f64> {
    let neg = r.gen_range(1..n);
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let m = r.gen_range(gap..reach);
            if i < neg {
                -m
            } else {
                m
            }
        })
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn random_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

pub fn recurrence(eigs: &[f64], b: &[f64], k: usize, reorth: bool) -> LanczosRecurrence {
    let a = DiagonalOperator::new(eigs.to_vec()).unwrap();
    lanczos(&a, b, k, LanczosOptions::with_basis(reorth), None).unwrap()
}

/// A point of `[lo, hi]` at least `margin` from every eigenvalue, if the
/// random draws find one.
pub fn point_between(
    r: &mut ChaCha8Rng,
    eigs: &[f64],
    lo: f64,
    hi: f64,
    margin: f64,
) -> Option<f64> {
    for _ in 0..200 {
        let z = r.gen_range(lo..hi);
        if eigs.iter().all(|&l| (l - z).abs() >= margin) {
            return Some(z);
        }
    }
    None
}

/// A random rational function whose stabilized denominator has degree at
/// most `max_den`. Real poles inside `[lo, hi]` keep `margin` from the
/// eigenvalues; other poles are complex or lie outside.
pub fn random_rational(
    r: &mut ChaCha8Rng,
    eigs: &[f64],
    max_den: usize,
    allow_inside: bool,
) -> RationalFunctionSpec {
    let lo = eigs[0];
    let hi = *eigs.last().unwrap();
    let width = hi - lo;
    loop {
        let mut real = Vec::new();
        let mut complex = Vec::new();
        let mut deg = 0;
        let target = r.gen_range(1..=max_den);
        while deg < target {
            let room = max_den - deg;
            match r.gen_range(0..3) {
                0 if room >= 2 => {
                    let re = r.gen_range(lo - 0.2 * width..hi + 0.2 * width);
                    let im = r.gen_range(0.05..0.5) * width;
                    complex.push((Complex64::new(re, im), 1));
                    deg += 2;
                }
                1 if allow_inside && room >= 2 => {
                    if let Some(z) = point_between(r, eigs, lo, hi, 0.02 * width) {
                        real.push((z, 1));
                        deg += 2;
                    }
                }
                _ => {
                    let z = if r.gen_bool(0.5) {
                        lo - r.gen_range(0.05..0.5) * width
                    } else {
                        hi + r.gen_range(0.05..0.5) * width
                    };
                    real.push((z, 1));
                    deg += 1;
                }
            }
        }
        let num_deg = r.gen_range(0..=(real.len() + 2 * complex.len()));
        let num: Vec<f64> = (0..=num_deg).map(|_| r.gen_range(-1.0..1.0)).collect();
        if let Ok(spec) = RationalFunctionSpec::new(PolynomialCoefficients::new(num), real, complex)
        {
            if !spec.numerator().is_zero() {
                return spec;
            }
        }
    }
}

/// Degree-`d` interpolant of `f` at Chebyshev points of `[lo, hi]`, in
/// monomial coefficients (Newton form expanded).
pub fn chebyshev_interpolant(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    d: usize,
) -> PolynomialCoefficients {
    let m = d + 1;
    let nodes: Vec<f64> = (0..m)
        .map(|j| {
            let t = ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos();
            0.5 * (lo + hi) + 0.5 * (hi - lo) * t
        })
        .collect();
    let mut dd: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }
    let mut p = PolynomialCoefficients::constant(0.0);
    let mut basis = PolynomialCoefficients::constant(1.0);
    for i in 0..m {
        p = p.add(&basis.scale(dd[i]));
        basis = basis.mul(&PolynomialCoefficients::from_roots(&[nodes[i]]));
    }
    p
}

pub fn rel_diff(x: &[f64], y: &[f64]) -> f64 {
    let num: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let den: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    num / den.max(f64::MIN_POSITIVE)
}
