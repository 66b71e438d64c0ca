//! The experiment drivers behind the command-line tool.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiments::metrics::{exact_matrix_function, weighted_error, weighted_norm, NormSpec};
use crate::experiments::report::{render_svg, to_csv_string, ExperimentReport};
use crate::experiments::spectrum::{uniform_weight_vector, SpectrumSpec};
use crate::function::{InverseShiftedSquare, InverseSquare, ScalarFunction, Sign};
use crate::lanczos::{lanczos, shift_recurrence, LanczosOptions, LanczosRecurrence};
use crate::linalg::operator::{DiagonalOperator, SquaredShifted};
use crate::linalg::vector::{dot, norm2};
use crate::matfun::{
    build_sign_quadrature_scaled, rational_termwise_coefficients, sign_coalescence_gap,
    sign_harmonic_iterate, sign_or_iterate, spectrum_cdf, spectrum_cdf_fa,
};
use crate::rational::{
    lanczos_fa_iterate, lanczos_or_iterate, stabilize, RationalFunctionSpec, SpectrumInterval,
};
use crate::solvers::{cg_iterate, hnorm_projection_oracle, restarted_cg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SignCompare,
    SpectrumCdf,
    ProxyRational,
    SquaredSystem,
    RestartCompare,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::SignCompare,
        Experiment::SpectrumCdf,
        Experiment::ProxyRational,
        Experiment::SquaredSystem,
        Experiment::RestartCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SignCompare => "sign-compare",
            Experiment::SpectrumCdf => "spectrum-cdf",
            Experiment::ProxyRational => "proxy-rational",
            Experiment::SquaredSystem => "squared-system",
            Experiment::RestartCompare => "restart-compare",
        }
    }

    fn default_k_max(self) -> usize {
        match self {
            Experiment::SignCompare | Experiment::ProxyRational => 60,
            Experiment::SpectrumCdf => 10,
            Experiment::SquaredSystem => 100,
            Experiment::RestartCompare => 150,
        }
    }

    fn default_reorth(self) -> bool {
        !matches!(self, Experiment::SquaredSystem)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                Error::invalid(format!(
                    "unknown experiment '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Settings shared by all experiments. `None` picks the experiment's own
/// default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub n: Option<usize>,
    pub kappa: Option<f64>,
    pub rho: Option<f64>,
    pub spectrum: Option<SpectrumSpec>,
    pub k_max: Option<usize>,
    pub c: Option<f64>,
    pub quad_points: Option<usize>,
    /// `None` entries mean no restarting.
    pub restart_lengths: Option<Vec<Option<usize>>>,
    pub reorth: Option<bool>,
    /// Accepted for interface stability; every experiment is deterministic.
    pub seed: u64,
}

impl ExperimentConfig {
    fn spectrum_for(&self, exp: Experiment) -> Result<SpectrumSpec> {
        if let Some(s) = &self.spectrum {
            return Ok(s.clone());
        }
        if self.n.is_some() || self.kappa.is_some() || self.rho.is_some() {
            return Ok(self.model());
        }
        Ok(match exp {
            Experiment::SignCompare | Experiment::ProxyRational => SpectrumSpec::two_sided_model(),
            Experiment::SpectrumCdf => SpectrumSpec::chi2_quantiles()?,
            Experiment::SquaredSystem => "1:10:step=0.005".parse()?,
            Experiment::RestartCompare => SpectrumSpec::model(1000, 5e3, 0.8),
        })
    }

    /// The model spectrum from `n`, `κ` and `ρ`, defaulting to
    /// `n = 1000, κ = 5e3, ρ = 0.8`.
    pub fn model(&self) -> SpectrumSpec {
        SpectrumSpec::model(
            self.n.unwrap_or(1000),
            self.kappa.unwrap_or(5e3),
            self.rho.unwrap_or(0.8),
        )
    }
}

/// Reports plus any additional files an experiment produces.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub experiment: Experiment,
    pub reports: Vec<ExperimentReport>,
    pub extra_files: Vec<(String, String)>,
}

impl ExperimentOutput {
    pub fn report(&self, method: &str) -> Option<&ExperimentReport> {
        self.reports.iter().find(|r| r.method == method)
    }

    pub fn csv(&self) -> Result<String> {
        to_csv_string(&self.reports)
    }

    pub fn svg(&self) -> String {
        render_svg(self.experiment.name(), &self.reports)
    }

    /// Writes `<experiment>.csv`, `<experiment>.svg` and the extra files.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let name = self.experiment.name();
        fs::write(dir.join(format!("{name}.csv")), self.csv()?)?;
        fs::write(dir.join(format!("{name}.svg")), self.svg())?;
        for (file, body) in &self.extra_files {
            fs::write(dir.join(file), body)?;
        }
        Ok(())
    }
}

pub fn run_experiment(name: &str, config: &ExperimentConfig) -> Result<ExperimentOutput> {
    run(name.parse()?, config)
}

pub fn run(exp: Experiment, config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let eigs = config.spectrum_for(exp)?.eigenvalues()?;
    let problem = Problem::new(eigs)?;
    let k_max = config.k_max.unwrap_or(exp.default_k_max());
    if k_max == 0 {
        return Err(Error::invalid("--k-max must be at least 1"));
    }
    let k_max = k_max.min(problem.n());
    let reorth = config.reorth.unwrap_or(exp.default_reorth());
    let (reports, extra_files) = match exp {
        Experiment::SignCompare => (
            sign_compare(&problem, k_max, config.c.unwrap_or(0.0), reorth)?,
            vec![],
        ),
        Experiment::SpectrumCdf => spectrum_cdf_experiment(&problem, k_max, reorth)?,
        Experiment::ProxyRational => (
            proxy_rational(&problem, k_max, config.quad_points.unwrap_or(20), reorth)?,
            vec![],
        ),
        Experiment::SquaredSystem => (
            squared_system(&problem, k_max, config.c.unwrap_or(0.05), reorth)?,
            vec![],
        ),
        Experiment::RestartCompare => {
            let lengths = config
                .restart_lengths
                .clone()
                .unwrap_or_else(|| vec![Some(10), Some(20), Some(30), Some(38), Some(43), None]);
            (restart_compare(&problem, k_max, &lengths)?, vec![])
        }
    };
    Ok(ExperimentOutput {
        experiment: exp,
        reports,
        extra_files,
    })
}

/// A diagonal operator with the uniform-weight right-hand side.
pub struct Problem {
    pub a: DiagonalOperator,
    pub b: Vec<f64>,
}

impl Problem {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        let n = eigenvalues.len();
        Ok(Self {
            a: DiagonalOperator::new(eigenvalues)?,
            b: uniform_weight_vector(n),
        })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.a.eigenvalues()
    }

    pub fn recurrence(&self, k: usize, reorth: bool) -> Result<LanczosRecurrence> {
        let options = LanczosOptions {
            reorthogonalize: reorth,
            store_basis: true,
        };
        lanczos(&self.a, &self.b, k, options, None)
    }

    pub fn exact<F: ScalarFunction + ?Sized>(&self, f: &F) -> Result<Vec<f64>> {
        exact_matrix_function(&self.a, f, &self.b)
    }

    /// `‖x − exact‖_H / ‖b‖_H`.
    pub fn relative_error(&self, x: &[f64], exact: &[f64], norm: &NormSpec) -> f64 {
        weighted_error(x, exact, self.eigenvalues(), norm)
            / weighted_norm(&self.b, self.eigenvalues(), norm)
    }
}

/// Iterations actually available: a terminated recurrence stops early.
fn available(rec: &LanczosRecurrence, k_max: usize) -> usize {
    k_max.min(rec.len())
}

/// A comparison method's value at one `k`; a failed evaluation (a Ritz value
/// on a singularity, coincident interpolation nodes) is shown as an infinite
/// error rather than ending the run.
fn or_infinite(
    r: Result<Vec<f64>>,
    problem: &Problem,
    exact: &[f64],
    norm: &NormSpec,
) -> Result<f64> {
    match r {
        Ok(x) => Ok(problem.relative_error(&x, exact, norm)),
        Err(e) if e.is_numerical() => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

fn sign_compare(
    problem: &Problem,
    k_max: usize,
    c: f64,
    reorth: bool,
) -> Result<Vec<ExperimentReport>> {
    let rec = problem.recurrence(k_max, reorth)?;
    let kk = available(&rec, k_max);
    let sign = Sign::new(c);
    let exact = problem.exact(&sign)?;
    let norm = NormSpec::ASquared { shift: c };
    let label = norm.label();
    let h = DiagonalOperator::new(
        problem
            .eigenvalues()
            .iter()
            .map(|l| (l - c).powi(2))
            .collect(),
    )?;
    let basis = rec.basis().expect("basis stored");
    let shifted = shift_recurrence(&rec, c);

    let mut or = ExperimentReport::new("lanczos-or", label);
    let mut fa = ExperimentReport::new("lanczos-fa", label);
    let mut harmonic = ExperimentReport::new("harmonic-ritz", label);
    let mut optimal = ExperimentReport::new("optimal", label);
    let mut gap = ExperimentReport::new("fa-or-gap", "l2");
    let mut bound = ExperimentReport::new("fa-or-gap-bound", "l2");
    for k in 1..=kk {
        or.push(
            k,
            k,
            problem.relative_error(&sign_or_iterate(&rec, k, c)?, &exact, &norm),
        );
        fa.push(
            k,
            k,
            or_infinite(lanczos_fa_iterate(&rec, k, &sign), problem, &exact, &norm)?,
        );
        harmonic.push(
            k,
            k,
            or_infinite(sign_harmonic_iterate(&rec, k, c), problem, &exact, &norm)?,
        );
        optimal.push(
            k,
            k,
            or_infinite(
                hnorm_projection_oracle(&h, &basis[..k], &exact),
                problem,
                &exact,
                &norm,
            )?,
        );
        let (g, bd) = sign_coalescence_gap(&shifted, k)?;
        gap.push(k, k, g);
        bound.push(k, k, bd);
    }
    Ok(vec![or, fa, harmonic, optimal, gap, bound])
}

/// Evenly spaced thresholds spanning the spectrum.
pub fn threshold_grid(eigenvalues: &[f64], count: usize) -> Vec<f64> {
    let lo = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if count == 1 {
        return vec![(lo + hi) / 2.0];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// `bᵀ 1[A ≤ c] b / ‖b‖²` for diagonal `A`.
pub fn exact_cdf(eigenvalues: &[f64], b: &[f64], thresholds: &[f64]) -> Vec<f64> {
    let total: f64 = b.iter().map(|v| v * v).sum();
    thresholds
        .iter()
        .map(|&c| {
            eigenvalues
                .iter()
                .zip(b)
                .filter(|(&l, _)| l <= c)
                .map(|(_, v)| v * v)
                .sum::<f64>()
                / total
        })
        .collect()
}

/// The harmonic-Ritz CDF estimate `(1 − bᵀ p(A) b / ‖b‖²) / 2`, missing where
/// the interpolation fails.
pub fn harmonic_cdf(
    rec: &LanczosRecurrence,
    k: usize,
    b: &[f64],
    thresholds: &[f64],
) -> Result<Vec<Option<f64>>> {
    let bb = dot(b, b)?;
    thresholds
        .iter()
        .map(|&c| match sign_harmonic_iterate(rec, k, c) {
            Ok(x) => Ok(Some((1.0 - dot(b, &x)? / bb) / 2.0)),
            Err(e) if e.is_numerical() => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// Mean absolute deviation over the thresholds where an estimate exists.
pub fn mean_abs_deviation(estimate: &[Option<f64>], exact: &[f64]) -> f64 {
    let (sum, count) = estimate
        .iter()
        .zip(exact)
        .filter_map(|(e, x)| e.map(|e| (e - x).abs()))
        .fold((0.0, 0usize), |(s, c), d| (s + d, c + 1));
    if count == 0 {
        f64::INFINITY
    } else {
        sum / count as f64
    }
}

type Extra = Vec<(String, String)>;

fn spectrum_cdf_experiment(
    problem: &Problem,
    k_max: usize,
    reorth: bool,
) -> Result<(Vec<ExperimentReport>, Extra)> {
    let rec = problem.recurrence(k_max, reorth)?;
    let kk = available(&rec, k_max);
    let grid = threshold_grid(problem.eigenvalues(), 100);
    let exact = exact_cdf(problem.eigenvalues(), &problem.b, &grid);
    let mut or = ExperimentReport::new("lanczos-or", "cdf-mad");
    let mut fa = ExperimentReport::new("lanczos-fa", "cdf-mad");
    let mut harmonic = ExperimentReport::new("harmonic-ritz", "cdf-mad");
    let mut last = None;
    for k in 1..=kk {
        let o = spectrum_cdf(&rec, k, &grid)?;
        let f: Vec<Option<f64>> = spectrum_cdf_fa(&rec, k, &grid)?
            .into_iter()
            .map(Some)
            .collect();
        let h = harmonic_cdf(&rec, k, &problem.b, &grid)?;
        or.push(k, k, mean_abs_deviation(&o, &exact));
        fa.push(k, k, mean_abs_deviation(&f, &exact));
        harmonic.push(k, k, mean_abs_deviation(&h, &exact));
        last = Some((o, f, h));
    }
    let (o, f, h) = last.expect("at least one iteration");
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "threshold",
        "exact",
        "lanczos-or",
        "lanczos-fa",
        "harmonic-ritz",
    ])?;
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for i in 0..grid.len() {
        w.write_record([
            grid[i].to_string(),
            exact[i].to_string(),
            cell(o[i]),
            cell(f[i]),
            cell(h[i]),
        ])?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Stream(e.to_string()))?)
        .map_err(|e| Error::Stream(e.to_string()))?;
    Ok((
        vec![or, fa, harmonic],
        vec![("spectrum-cdf-curves.csv".into(), body)],
    ))
}

/// Geometric mean of the smallest and largest eigenvalue magnitudes.
pub fn sign_quadrature_scale(eigenvalues: &[f64]) -> f64 {
    let lo = eigenvalues
        .iter()
        .fold(f64::INFINITY, |m, l| m.min(l.abs()));
    let hi = eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    (lo.max(f64::MIN_POSITIVE) * hi).sqrt()
}

fn proxy_rational(
    problem: &Problem,
    k_max: usize,
    m: usize,
    reorth: bool,
) -> Result<Vec<ExperimentReport>> {
    let eigs = problem.eigenvalues();
    let rule = build_sign_quadrature_scaled(m, sign_quadrature_scale(eigs))?;
    let terms = rule.terms();
    let interval = SpectrumInterval::hull(eigs)?;
    let exact_sign = problem.exact(&Sign::new(0.0))?;
    let exact_proxy = problem.exact(&|x: f64| rule.sign_proxy(x))?;
    let floor = rule.sup_error(eigs);
    let norm = NormSpec::ASquared { shift: 0.0 };
    let rec = problem.recurrence(k_max, reorth)?;
    let kk = available(&rec, k_max);
    let mut to_sign = ExperimentReport::new("or-sign", "A2");
    let mut to_proxy = ExperimentReport::new("or-proxy", "A2");
    let mut scalar = ExperimentReport::new("proxy-floor", "inf");
    for k in 1..=kk {
        let x =
            rec.basis_combination(&rational_termwise_coefficients(&rec, k, &terms, interval)?)?;
        to_sign.push(k, k, problem.relative_error(&x, &exact_sign, &norm));
        to_proxy.push(k, k, problem.relative_error(&x, &exact_proxy, &norm));
        scalar.push(k, k, floor);
    }
    Ok(vec![to_sign, to_proxy, scalar])
}

fn squared_system(
    problem: &Problem,
    k_max: usize,
    c: f64,
    reorth: bool,
) -> Result<Vec<ExperimentReport>> {
    if c < 0.0 {
        return Err(Error::invalid("--c must be nonnegative for squared-system"));
    }
    let (spec, f): (RationalFunctionSpec, Box<dyn ScalarFunction>) = if c == 0.0 {
        (
            RationalFunctionSpec::inverse_square(),
            Box::new(InverseSquare),
        )
    } else {
        (
            RationalFunctionSpec::inverse_shifted_square(c)?,
            Box::new(InverseShiftedSquare { shift: c }),
        )
    };
    let pair = stabilize(&spec, SpectrumInterval::hull(problem.eigenvalues())?)?;
    let exact = problem.exact(f.as_ref())?;
    let norm = NormSpec::ASquaredPlus { c };
    let label = norm.label();
    let rec = problem.recurrence(k_max, reorth)?;
    let kk = available(&rec, k_max);
    let mut or = ExperimentReport::new("lanczos-or", label);
    let mut fa = ExperimentReport::new("lanczos-fa", label);
    for k in 1..=kk {
        or.push(
            k,
            k,
            problem.relative_error(&lanczos_or_iterate(&rec, k, &pair)?, &exact, &norm),
        );
        fa.push(
            k,
            k,
            or_infinite(
                lanczos_fa_iterate(&rec, k, f.as_ref()),
                problem,
                &exact,
                &norm,
            )?,
        );
    }
    let mut cg = ExperimentReport::new("cg-squared", label);
    let half = (k_max / 2).min(problem.n());
    if half > 0 {
        let squared = SquaredShifted::new(&problem.a, c);
        let options = LanczosOptions {
            reorthogonalize: reorth,
            store_basis: true,
        };
        let rec2 = lanczos(&squared, &problem.b, half, options, None)?;
        for j in 1..=available(&rec2, half) {
            cg.push(
                j,
                2 * j,
                problem.relative_error(&cg_iterate(&rec2, j)?, &exact, &norm),
            );
        }
    }
    Ok(vec![or, fa, cg])
}

fn restart_compare(
    problem: &Problem,
    budget: usize,
    lengths: &[Option<usize>],
) -> Result<Vec<ExperimentReport>> {
    if problem.eigenvalues().iter().any(|&l| l <= 0.0) {
        return Err(Error::invalid(
            "restart-compare needs a positive definite spectrum",
        ));
    }
    let exact = problem.exact(&|x: f64| 1.0 / x)?;
    let scale = norm2(&exact);
    let norm = NormSpec::Euclidean;
    let rel = |x: &[f64]| weighted_error(x, &exact, problem.eigenvalues(), &norm) / scale;
    let mut reports = Vec::new();
    let plain = problem.recurrence(budget, false)?;
    let mut cg = ExperimentReport::new("cg", "l2");
    for k in 1..=available(&plain, budget) {
        cg.push(k, k, rel(&cg_iterate(&plain, k)?));
    }
    reports.push(cg);
    for &m in lengths {
        let name = match m {
            Some(m) => format!("restarted-cg-m{m}"),
            None => "cg-reorth".to_string(),
        };
        let mut r = ExperimentReport::new(name, "l2");
        for (i, x) in restarted_cg(&problem.a, &problem.b, m, budget)?
            .iter()
            .enumerate()
        {
            r.push(i + 1, i + 1, rel(x));
        }
        reports.push(r);
    }
    Ok(reports)
}

/// Parses `10,20,inf`; `inf` (or `∞`) means no restarting.
pub fn parse_restart_lengths(s: &str) -> Result<Vec<Option<usize>>> {
    let out: Result<Vec<Option<usize>>> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "inf" | "∞" | "none" => Ok(None),
            _ => match t.parse::<usize>() {
                Ok(0) | Err(_) => Err(Error::invalid(format!("bad restart length '{t}'"))),
                Ok(m) => Ok(Some(m)),
            },
        })
        .collect();
    let out = out?;
    if out.is_empty() {
        return Err(Error::invalid("no restart lengths given"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!("nope".parse::<Experiment>().is_err());
    }

    #[test]
    fn restart_lengths_parse() {
        assert_eq!(
            parse_restart_lengths("10, 20,inf").unwrap(),
            vec![Some(10), Some(20), None]
        );
        assert!(parse_restart_lengths("0").is_err());
        assert!(parse_restart_lengths("x").is_err());
    }

    #[test]
    fn cdf_helpers() {
        let eigs = [1.0, 2.0, 3.0, 4.0];
        let b = [0.5; 4];
        assert_eq!(exact_cdf(&eigs, &b, &[0.0, 2.0, 5.0]), vec![0.0, 0.5, 1.0]);
        assert_eq!(threshold_grid(&eigs, 4), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(mean_abs_deviation(&[Some(0.1), None], &[0.0, 1.0]), 0.1);
    }

    #[test]
    fn small_runs_are_deterministic() {
        let config = ExperimentConfig {
            spectrum: Some("-3:-1:20,1:4:30".parse().unwrap()),
            k_max: Some(8),
            ..Default::default()
        };
        for e in [
            Experiment::SignCompare,
            Experiment::ProxyRational,
            Experiment::SquaredSystem,
        ] {
            let a = run(e, &config).unwrap().csv().unwrap();
            let b = run(e, &config).unwrap().csv().unwrap();
            assert_eq!(a, b);
        }
    }
}
