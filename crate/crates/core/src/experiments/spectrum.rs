//! Synthetic spectra: the model problem, uniform interval blocks, files,
//! and signed concatenations of these.

use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::matrix_market::{read_eigenvalue_file, read_eigenvalue_list};

/// 1000 quantiles of the chi-squared distribution with 10 degrees of
/// freedom, at probabilities `(i + 0.5)/1000`.
pub const CHI2_QUANTILES: &str = include_str!("../../data/chi2_df10_quantiles_1000.txt");

/// `λ_i = λ₁ + ((i−1)/(n−1))·(λ_n − λ₁)·ρ^{n−i}` with `λ_n = κ λ₁`.
///
/// Outlying eigenvalues accumulate at the top of the spectrum as `ρ`
/// decreases; `ρ = 1` gives uniform spacing.
pub fn model_spectrum(n: usize, kappa: f64, rho: f64, lambda1: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid("model spectrum needs n ≥ 2"));
    }
    if !(kappa > 1.0 && kappa.is_finite()) {
        return Err(Error::invalid(format!(
            "model spectrum needs κ > 1, got {kappa}"
        )));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::invalid(format!(
            "model spectrum needs 0 < ρ ≤ 1, got {rho}"
        )));
    }
    if !(lambda1 > 0.0 && lambda1.is_finite()) {
        return Err(Error::invalid("model spectrum needs λ₁ > 0"));
    }
    let top = kappa * lambda1;
    let span = top - lambda1;
    let mut out = Vec::with_capacity(n);
    out.push(lambda1);
    for i in 2..n {
        let frac = (i - 1) as f64 / (n - 1) as f64;
        out.push(lambda1 + frac * span * rho.powi((n - i) as i32));
    }
    out.push(top);
    Ok(out)
}

/// `count` equally spaced points from `lower` to `upper` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalBlock {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

impl IntervalBlock {
    pub fn new(lower: f64, upper: f64, count: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower > upper {
            return Err(Error::invalid(format!("bad interval [{lower}, {upper}]")));
        }
        if count == 0 || (count == 1 && lower != upper) {
            return Err(Error::invalid("an interval block needs two or more points"));
        }
        Ok(Self {
            lower,
            upper,
            count,
        })
    }

    /// Points `lower, lower + step, …, upper`; the width must be a whole
    /// number of steps up to rounding.
    pub fn with_step(lower: f64, upper: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::invalid("interval step must be positive"));
        }
        let steps = (upper - lower) / step;
        let whole = steps.round();
        if (steps - whole).abs() > 1e-6 * whole.max(1.0) {
            return Err(Error::invalid(format!(
                "step {step} does not divide [{lower}, {upper}]"
            )));
        }
        Self::new(lower, upper, whole as usize + 1)
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lower];
        }
        let h = (self.upper - self.lower) / (self.count - 1) as f64;
        let mut v: Vec<f64> = (0..self.count).map(|i| self.lower + i as f64 * h).collect();
        v[self.count - 1] = self.upper;
        v
    }
}

/// One source of eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumBlock {
    Model {
        n: usize,
        kappa: f64,
        rho: f64,
        lambda1: f64,
    },
    Interval(IntervalBlock),
    File(PathBuf),
    Values(Vec<f64>),
}

impl SpectrumBlock {
    fn eigenvalues(&self) -> Result<Vec<f64>> {
        match self {
            SpectrumBlock::Model {
                n,
                kappa,
                rho,
                lambda1,
            } => model_spectrum(*n, *kappa, *rho, *lambda1),
            SpectrumBlock::Interval(b) => Ok(b.points()),
            SpectrumBlock::File(p) => read_eigenvalue_file(p),
            SpectrumBlock::Values(v) => Ok(v.clone()),
        }
    }
}

/// A concatenation of blocks, each optionally negated. The eigenvalues are
/// returned sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSpec {
    pub blocks: Vec<(SpectrumBlock, bool)>,
}

impl SpectrumSpec {
    pub fn single(block: SpectrumBlock) -> Self {
        Self {
            blocks: vec![(block, false)],
        }
    }

    pub fn model(n: usize, kappa: f64, rho: f64) -> Self {
        Self::single(SpectrumBlock::Model {
            n,
            kappa,
            rho,
            lambda1: 1.0,
        })
    }

    pub fn then(mut self, block: SpectrumBlock, negated: bool) -> Self {
        self.blocks.push((block, negated));
        self
    }

    /// The two-sided spectrum: the negated model problem (n = 100, κ = 1e2,
    /// ρ = 0.9) joined with the model problem (n = 300, κ = 1e3, ρ = 0.8).
    pub fn two_sided_model() -> Self {
        Self {
            blocks: vec![
                (
                    SpectrumBlock::Model {
                        n: 100,
                        kappa: 1e2,
                        rho: 0.9,
                        lambda1: 1.0,
                    },
                    true,
                ),
                (
                    SpectrumBlock::Model {
                        n: 300,
                        kappa: 1e3,
                        rho: 0.8,
                        lambda1: 1.0,
                    },
                    false,
                ),
            ],
        }
    }

    /// The bundled chi-squared quantiles.
    pub fn chi2_quantiles() -> Result<Self> {
        let values = read_eigenvalue_list(CHI2_QUANTILES.as_bytes())?;
        Ok(Self::single(SpectrumBlock::Values(values)))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.blocks.is_empty() {
            return Err(Error::invalid("empty spectrum"));
        }
        let mut out = Vec::new();
        for (block, negated) in &self.blocks {
            let v = block.eigenvalues()?;
            if *negated {
                out.extend(v.into_iter().map(|x| -x));
            } else {
                out.extend(v);
            }
        }
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("spectrum contains a non-finite value"));
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }
}

/// Parses interval lists such as `-10:-1:1801,1:10:step=0.005`. A leading
/// `-` on a whole block (`-(1:10:100)`) negates it.
impl FromStr for SpectrumSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for raw in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (negated, body) = match raw.strip_prefix("-(").and_then(|r| r.strip_suffix(')')) {
                Some(inner) => (true, inner),
                None => (false, raw),
            };
            let parts: Vec<&str> = body.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::invalid(format!(
                    "interval block '{raw}' is not lo:hi:count or lo:hi:step=h"
                )));
            }
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(format!("bad number '{t}' in '{raw}'")))
            };
            let (lo, hi) = (num(parts[0])?, num(parts[1])?);
            let block = match parts[2].trim().strip_prefix("step=") {
                Some(h) => IntervalBlock::with_step(lo, hi, num(h)?)?,
                None => {
                    let count = parts[2]
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| Error::invalid(format!("bad count in '{raw}'")))?;
                    IntervalBlock::new(lo, hi, count)?
                }
            };
            blocks.push((SpectrumBlock::Interval(block), negated));
        }
        if blocks.is_empty() {
            return Err(Error::invalid("no interval blocks given"));
        }
        Ok(Self { blocks })
    }
}

/// The vector with equal weight `1/√n` on each of `n` eigencomponents.
pub fn uniform_weight_vector(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}
