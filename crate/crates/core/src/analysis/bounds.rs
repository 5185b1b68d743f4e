//! Closed-form sample-size bounds for cluster coverage and span capture,
//! plus Monte Carlo checks that sampling at the bound meets its guarantee.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::child_seed;
use crate::error::{Error, Result};
use crate::matrix::{ClusterLabels, DataMatrix};
use crate::sampling::{Method, SamplerSpec};

/// Base of the logarithms in the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
            LogBase::Ten => x.log10(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams {
    /// Required points per cluster.
    pub m: usize,
    /// Failure probability.
    pub delta: f64,
    /// Oversampling factor; `None` uses the smallest admissible value.
    pub beta: Option<f64>,
    /// Per-cluster populations.
    pub populations: Vec<usize>,
    pub tau1: f64,
    pub tau2: f64,
    /// Total rank.
    pub r: usize,
    /// Number of subspaces.
    pub s: usize,
    /// Unspecified absolute constant of the span bound.
    pub c: f64,
    /// Smallest per-cluster sampling probability.
    pub min_prob: f64,
    pub log: LogBase,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            m: 5,
            delta: 0.1,
            beta: None,
            populations: Vec::new(),
            tau1: 0.0,
            tau2: 0.0,
            r: 1,
            s: 1,
            c: 1.0,
            min_prob: 1.0,
            log: LogBase::Natural,
        }
    }
}

impl BoundParams {
    /// `2 + (3/m) log(4/delta)`.
    pub fn min_beta(&self) -> f64 {
        2.0 + 3.0 / self.m as f64 * self.log.log(4.0 / self.delta)
    }

    fn checked_beta(&self) -> Result<f64> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::BadParams(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.m == 0 {
            return Err(Error::BadParams("m must be positive".into()));
        }
        let min = self.min_beta();
        let beta = self.beta.unwrap_or(min);
        // Tolerate rounding when the caller passes the printed minimum.
        if !(beta >= min * (1.0 - 1e-12)) {
            return Err(Error::BadBeta { beta, min });
        }
        Ok(beta)
    }

    fn total_points(&self) -> usize {
        self.populations.iter().sum()
    }
}

/// Uniform index sampling: `beta m N2 / min_i n_i` draws give every cluster
/// at least `m` points with probability `1 - delta`.
pub fn lemma2_bound(p: &BoundParams) -> Result<f64> {
    let beta = p.checked_beta()?;
    let min_pop = p.populations.iter().copied().min().unwrap_or(0);
    if min_pop == 0 {
        return Err(Error::BadParams("populations must be non-empty and positive".into()));
    }
    Ok(beta * p.m as f64 * p.total_points() as f64 / min_pop as f64)
}

/// Spatial sampling on two arcs: `beta m 2 pi / (pi - |tau2 - tau1|)` draws,
/// independent of the populations.
pub fn lemma3_bound(p: &BoundParams) -> Result<f64> {
    let beta = p.checked_beta()?;
    if !(p.tau1 > 0.0 && p.tau2 > 0.0 && p.tau1 + p.tau2 < PI) {
        return Err(Error::BadArcs { tau1: p.tau1, tau2: p.tau2 });
    }
    Ok(beta * p.m as f64 * 2.0 * PI / (PI - (p.tau2 - p.tau1).abs()))
}

/// Draws sufficient for the sketch to span a union of `s` subspaces of total
/// rank `r`:
/// `(1 / min p_i) xi_max (2 + 3 / xi_min log(2s / delta))` with
/// `xi = 10 c max(r/s, log n_i) log(2r / delta)` at the smallest and largest
/// population.
pub fn lemma4_bound(p: &BoundParams) -> Result<f64> {
    if !(p.delta > 0.0 && p.delta < 1.0) {
        return Err(Error::BadParams(format!("delta must lie in (0, 1), got {}", p.delta)));
    }
    if !(p.c > 0.0) {
        return Err(Error::BadParams(format!("c must be positive, got {}", p.c)));
    }
    if !(p.min_prob > 0.0 && p.min_prob <= 1.0) {
        return Err(Error::BadParams(format!(
            "minimum sampling probability must lie in (0, 1], got {}",
            p.min_prob
        )));
    }
    if p.r == 0 || p.s == 0 {
        return Err(Error::BadParams("r and s must be positive".into()));
    }
    let (Some(&min_pop), Some(&max_pop)) = (p.populations.iter().min(), p.populations.iter().max()) else {
        return Err(Error::BadParams("populations must be non-empty".into()));
    };
    if min_pop == 0 {
        return Err(Error::BadParams("populations must be positive".into()));
    }
    let per_subspace = p.r as f64 / p.s as f64;
    let log_term = p.log.log(2.0 * p.r as f64 / p.delta);
    let xi = |pop: usize| 10.0 * p.c * per_subspace.max(p.log.log(pop as f64)) * log_term;
    let (xi_min, xi_max) = (xi(min_pop), xi(max_pop));
    Ok(xi_max * (2.0 + 3.0 / xi_min * p.log.log(2.0 * p.s as f64 / p.delta)) / p.min_prob)
}

/// Fraction of `trials` sketches of `n` columns holding at least `m` points
/// from every cluster.
pub fn coverage_success_rate(
    data: &DataMatrix,
    labels: &ClusterLabels,
    method: Method,
    n: usize,
    m: usize,
    trials: usize,
    master_seed: u64,
) -> Result<f64> {
    labels.check_matches(data)?;
    if trials == 0 {
        return Err(Error::BadParams("at least one trial is required".into()));
    }
    if n == 0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    let spec = SamplerSpec::new(method, n, master_seed);
    let input = super::experiments::prepare_input(&spec, data)?;
    let successes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sketch = spec.with_seed(child_seed(master_seed, t)).sample(&input)?;
            Ok(labels.count_indices(&sketch.indices).iter().all(|&c| c >= m))
        })
        .collect::<Result<_>>()?;
    Ok(successes.iter().filter(|&&ok| ok).count() as f64 / trials as f64)
}

/// Outcome of sampling at a computed bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalCheck {
    pub bound: f64,
    pub n: usize,
    pub success_rate: f64,
    /// `1 - delta`.
    pub guarantee: f64,
}

fn empirical_at(
    data: &DataMatrix,
    labels: &ClusterLabels,
    params: &BoundParams,
    bound: f64,
    method: Method,
    trials: usize,
    master_seed: u64,
) -> Result<EmpiricalCheck> {
    let n = bound.ceil() as usize;
    let success_rate = coverage_success_rate(data, labels, method, n, params.m, trials, master_seed)?;
    Ok(EmpiricalCheck {
        bound,
        n,
        success_rate,
        guarantee: 1.0 - params.delta,
    })
}

/// Uniform index sampling with replacement at `ceil(lemma2_bound)`; the
/// populations are taken from `labels`.
pub fn lemma2_empirical(
    data: &DataMatrix,
    labels: &ClusterLabels,
    params: &BoundParams,
    trials: usize,
    master_seed: u64,
) -> Result<EmpiricalCheck> {
    let params = BoundParams {
        populations: labels.populations(),
        ..params.clone()
    };
    let bound = lemma2_bound(&params)?;
    empirical_at(data, labels, &params, bound, Method::RisRepl, trials, master_seed)
}

/// Spatial sampling with replacement at `ceil(lemma3_bound)`.
pub fn lemma3_empirical(
    data: &DataMatrix,
    labels: &ClusterLabels,
    params: &BoundParams,
    trials: usize,
    master_seed: u64,
) -> Result<EmpiricalCheck> {
    let bound = lemma3_bound(params)?;
    empirical_at(data, labels, params, bound, Method::SrsRepl, trials, master_seed)
}
