//! Monte Carlo estimates of per-cluster sampling probabilities.

use crate::error::{Error, Result};
use crate::matrix::{ClusterLabels, DataMatrix};
use crate::rng_from_seed;
use crate::sampling::{
    for_each_projection, ris, sample_gaussian_directions, srs_with_replacement, UNIT_NORM_TOL,
};

fn frequencies(counts: &[usize], total: usize) -> Vec<f64> {
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Fraction of `draws` uniform directions `y` falling in each cluster's
/// region, i.e. where `max_j |y^T x_j|` over the cluster's columns beats every
/// other cluster. Ties go to the lower cluster id.
pub fn estimate_region_areas(
    x: &DataMatrix,
    labels: &ClusterLabels,
    draws: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    labels.check_matches(x)?;
    x.check_unit_columns(UNIT_NORM_TOL)?;
    if draws == 0 {
        return Err(Error::BadParams("at least one direction is required".into()));
    }
    let s = labels.num_clusters();
    let ys = sample_gaussian_directions(draws, x.rows(), &mut rng_from_seed(seed));
    let mut counts = vec![0usize; s];
    let mut best_per_cluster = vec![0.0f64; s];
    for_each_projection(x, &ys, |_, q| {
        best_per_cluster.fill(f64::NEG_INFINITY);
        for (j, &v) in q.iter().enumerate() {
            let c = labels.get(j);
            best_per_cluster[c] = best_per_cluster[c].max(v.abs());
        }
        let mut winner = 0;
        for c in 1..s {
            if best_per_cluster[c] > best_per_cluster[winner] {
                winner = c;
            }
        }
        counts[winner] += 1;
    });
    Ok(frequencies(&counts, draws))
}

/// Per-cluster frequency of `draws` with-replacement SRS selections.
pub fn empirical_sampling_probabilities(
    x: &DataMatrix,
    labels: &ClusterLabels,
    draws: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    labels.check_matches(x)?;
    let sketch = srs_with_replacement(x, draws, seed)?;
    Ok(frequencies(&labels.count_indices(&sketch.indices), draws))
}

/// Per-cluster frequency of `draws` with-replacement uniform index draws.
pub fn empirical_ris_probabilities(
    data: &DataMatrix,
    labels: &ClusterLabels,
    draws: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    labels.check_matches(data)?;
    let sketch = ris(data, draws, true, seed)?;
    Ok(frequencies(&labels.count_indices(&sketch.indices), draws))
}
