//! Adaptive (volume-style) sampling.
//!
//! Columns are drawn one at a time with probability proportional to the
//! squared norm of their residual after projecting out the columns already
//! drawn in the current pass. A pass ends once every residual is below
//! `1e-10 * ||D||_F`; sampled columns are then removed and a new pass starts
//! on the remaining columns.

use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::check_sample_count;
use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, SketchResult};
use crate::rng_from_seed;

const RESIDUAL_TOL: f64 = 1e-10;

/// Indices in selection order plus the length of every pass.
pub(crate) fn volume_select<R: Rng + ?Sized>(
    data: &DataMatrix,
    n: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<usize>)> {
    check_sample_count(n, data.cols())?;
    let d = data.as_matrix();
    let tol = RESIDUAL_TOL * d.norm();
    if tol == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let cols = d.ncols();
    let mut available = vec![true; cols];
    let mut indices = Vec::with_capacity(n);
    let mut passes = Vec::new();

    while indices.len() < n {
        let mut residual: DMatrix<f64> = d.clone();
        let mut basis: Vec<DVector<f64>> = Vec::new();
        let mut pass_len = 0;
        loop {
            let weights: Vec<f64> = (0..cols)
                .map(|j| {
                    if !available[j] {
                        return 0.0;
                    }
                    let norm = residual.column(j).norm();
                    if norm > tol {
                        norm * norm
                    } else {
                        0.0
                    }
                })
                .collect();
            let Ok(dist) = WeightedIndex::new(&weights) else {
                break;
            };
            let k = dist.sample(rng);
            available[k] = false;
            indices.push(k);
            pass_len += 1;
            if indices.len() == n {
                break;
            }

            // Gram-Schmidt with one re-orthogonalization pass.
            let mut q = residual.column(k).into_owned();
            for b in &basis {
                let c = b.dot(&q);
                q.axpy(-c, b, 1.0);
            }
            let norm = q.norm();
            if norm == 0.0 {
                break;
            }
            q.unscale_mut(norm);
            for j in 0..cols {
                if available[j] {
                    let c = q.dot(&residual.column(j));
                    residual.column_mut(j).axpy(-c, &q, 1.0);
                }
            }
            basis.push(q);
        }
        if pass_len == 0 {
            // Every remaining column is numerically zero.
            return Err(Error::ZeroMatrix);
        }
        passes.push(pass_len);
    }
    Ok((indices, passes))
}

/// Samples `n` distinct columns by repeated adaptive passes.
pub fn volume_sampling(data: &DataMatrix, n: usize, seed: u64) -> Result<SketchResult> {
    let (indices, _) = volume_select(data, n, &mut rng_from_seed(seed))?;
    SketchResult::from_indices(data, indices, "volume", seed, false)
}
