//! Samplers that draw column indices from a fixed distribution: uniform
//! (random index sampling), column-norm, and leverage-score sampling.

use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;

use super::check_sample_count;
use crate::error::{Error, Result};
use crate::matrix::{numerical_rank, DataMatrix, SketchResult, DEFAULT_RANK_TOL};
use crate::rng_from_seed;

/// How column norms are turned into sampling weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormConvention {
    /// `p_j ∝ ||d_j||^2`.
    #[default]
    Squared,
    /// `p_j ∝ ||d_j||`.
    Plain,
}

fn iid_draws<R: Rng + ?Sized>(weights: &[f64], n: usize, rng: &mut R) -> Result<Vec<usize>> {
    let dist = WeightedIndex::new(weights).map_err(|_| Error::ZeroMatrix)?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}

/// Uniform index sampling.
pub fn ris(data: &DataMatrix, n: usize, with_replacement: bool, seed: u64) -> Result<SketchResult> {
    if n == 0 {
        return Err(Error::BadParams("sample count must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let indices = if with_replacement {
        (0..n).map(|_| rng.random_range(0..data.cols())).collect()
    } else {
        check_sample_count(n, data.cols())?;
        let mut all: Vec<usize> = (0..data.cols()).collect();
        let (chosen, _) = all.partial_shuffle(&mut rng, n);
        chosen.to_vec()
    };
    let method = if with_replacement { "ris_repl" } else { "ris" };
    SketchResult::from_indices(data, indices, method, seed, with_replacement)
}

pub fn norm_probabilities(data: &DataMatrix, convention: NormConvention) -> Result<Vec<f64>> {
    let weights: Vec<f64> = (0..data.cols())
        .map(|j| {
            let norm = data.column_norm(j);
            match convention {
                NormConvention::Squared => norm * norm,
                NormConvention::Plain => norm,
            }
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// I.i.d. draws with probability proportional to (squared) column norm.
pub fn norm_sampling(
    data: &DataMatrix,
    n: usize,
    convention: NormConvention,
    seed: u64,
) -> Result<SketchResult> {
    let p = norm_probabilities(data, convention)?;
    let indices = iid_draws(&p, n, &mut rng_from_seed(seed))?;
    SketchResult::from_indices(data, indices, "norm", seed, true)
}

/// Leverage scores of the top `k` right singular vectors, divided by `k`
/// so they sum to one.
pub fn leverage_probabilities(data: &DataMatrix, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::BadParams("k must be positive".into()));
    }
    let rank = numerical_rank(data, DEFAULT_RANK_TOL);
    if k > rank {
        return Err(Error::RankDeficientK { k, rank });
    }
    // Left singular vectors of D^T are the right singular vectors of D.
    let svd = data.as_matrix().transpose().svd(true, false);
    let u: &DMatrix<f64> = svd.u.as_ref().expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let top = &order[..k];
    let scale = 1.0 / k as f64;
    Ok((0..data.cols())
        .map(|j| top.iter().map(|&c| u[(j, c)].powi(2)).sum::<f64>() * scale)
        .collect())
}

/// I.i.d. draws from the rank-`k` leverage-score distribution.
pub fn leverage_sampling(data: &DataMatrix, n: usize, k: usize, seed: u64) -> Result<SketchResult> {
    let p = leverage_probabilities(data, k)?;
    let indices = iid_draws(&p, n, &mut rng_from_seed(seed))?;
    SketchResult::from_indices(data, indices, "leverage", seed, true)
}
