//! Lloyd's k-means, used to show that clustering a balanced sketch recovers
//! clusters that clustering the unbalanced full data misses.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::report::{mean, ExperimentReport, TrialTag};
use crate::error::{Error, Result};
use crate::matrix::{ClusterLabels, DataMatrix};
use crate::sampling::srs_without_replacement;
use crate::synth::{gen_arc_clusters, ArcSpec};
use crate::{child_seed, rng_from_seed};

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    /// Centres as columns (`rows x k`).
    pub centers: DMatrix<f64>,
    /// Within-cluster sum of squared distances.
    pub inertia: f64,
    pub assignment: Vec<usize>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centers: &DMatrix<f64>) -> (usize, f64) {
    let rows = centers.nrows();
    let flat = centers.as_slice();
    let mut best = (0, f64::INFINITY);
    for c in 0..centers.ncols() {
        let d = sq_dist(point, &flat[c * rows..(c + 1) * rows]);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn lloyd(data: &DataMatrix, mut centers: DMatrix<f64>, max_iters: usize) -> KMeansResult {
    let (rows, cols, k) = (data.rows(), data.cols(), centers.ncols());
    let mut assignment = vec![usize::MAX; cols];
    for _ in 0..max_iters.max(1) {
        let mut changed = false;
        for (j, slot) in assignment.iter_mut().enumerate() {
            let (c, _) = nearest(data.column(j), &centers);
            if *slot != c {
                *slot = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = DMatrix::zeros(rows, k);
        let mut counts = vec![0usize; k];
        for (j, &c) in assignment.iter().enumerate() {
            counts[c] += 1;
            for (i, &v) in data.column(j).iter().enumerate() {
                sums[(i, c)] += v;
            }
        }
        for c in 0..k {
            // An emptied cluster keeps its previous centre.
            if counts[c] > 0 {
                centers.set_column(c, &(sums.column(c) / counts[c] as f64));
            }
        }
    }
    let mut inertia = 0.0;
    for (j, slot) in assignment.iter_mut().enumerate() {
        let (c, d) = nearest(data.column(j), &centers);
        *slot = c;
        inertia += d;
    }
    KMeansResult {
        centers,
        inertia,
        assignment,
    }
}

/// Best of `restarts` Lloyd runs, each seeded with `k` distinct data columns
/// chosen uniformly at random.
pub fn kmeans(
    data: &DataMatrix,
    k: usize,
    max_iters: usize,
    restarts: usize,
    seed: u64,
) -> Result<KMeansResult> {
    if k == 0 || k > data.cols() {
        return Err(Error::BadParams(format!(
            "k = {k} must lie in 1..={}",
            data.cols()
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..restarts.max(1) {
        let mut all: Vec<usize> = (0..data.cols()).collect();
        let (init, _) = all.partial_shuffle(&mut rng, k);
        let centers = data.as_matrix().select_columns(init.iter());
        let run = lloyd(data, centers, max_iters);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// True when every ground-truth cluster owns at least one centre, a centre
/// belonging to the cluster of its nearest data column.
pub fn balanced_centers_check(
    centers: &DMatrix<f64>,
    data: &DataMatrix,
    labels: &ClusterLabels,
) -> Result<bool> {
    labels.check_matches(data)?;
    if centers.nrows() != data.rows() {
        return Err(Error::Shape(format!(
            "centres have dimension {}, data has {} rows",
            centers.nrows(),
            data.rows()
        )));
    }
    let mut owned = vec![false; labels.num_clusters()];
    for c in 0..centers.ncols() {
        let center = centers.column(c);
        let nearest_point = (0..data.cols())
            .map(|j| (j, sq_dist(data.column(j), center.as_slice())))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(j, _)| j)
            .expect("data is non-empty");
        owned[labels.get(nearest_point)] = true;
    }
    Ok(owned.into_iter().all(|o| o))
}

/// Iteration cap and restart count used by [`kmeans_balance_experiment`].
pub const DEMO_MAX_ITERS: usize = 100;
pub const DEMO_RESTARTS: usize = 10;

/// For each seed, generates arc data, runs k-means with `k = 2` on the full
/// data and on an SRS sketch of `sketch_n` columns, and records whether each
/// set of centres covers both clusters (1) or not (0). `mean` rows hold the
/// pass rates.
pub fn kmeans_balance_experiment(
    spec: &ArcSpec,
    sketch_n: usize,
    seeds: usize,
    master_seed: u64,
) -> Result<ExperimentReport> {
    if seeds == 0 {
        return Err(Error::BadParams("at least one seed is required".into()));
    }
    let outcomes: Vec<(bool, bool)> = (0..seeds)
        .into_par_iter()
        .map(|t| {
            let seed = child_seed(master_seed, t);
            let (x, labels) = gen_arc_clusters(spec, &mut rng_from_seed(seed))?;
            let full = kmeans(&x, 2, DEMO_MAX_ITERS, DEMO_RESTARTS, seed)?;
            let full_ok = balanced_centers_check(&full.centers, &x, &labels)?;
            let sketch = srs_without_replacement(&x, sketch_n, seed)?;
            let on_sketch = kmeans(&sketch.columns, 2, DEMO_MAX_ITERS, DEMO_RESTARTS, seed)?;
            let sketch_ok = balanced_centers_check(&on_sketch.centers, &x, &labels)?;
            Ok((full_ok, sketch_ok))
        })
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new();
    report
        .meta("experiment", "kmeans")
        .meta("arcs", format!("{spec:?}"))
        .meta("sketch_n", sketch_n)
        .meta("seeds", seeds)
        .meta("master_seed", master_seed);
    let rates = [
        ("full", (spec.n1 + spec.n2) as f64, outcomes.iter().map(|o| o.0).collect::<Vec<_>>()),
        ("srs_sketch", sketch_n as f64, outcomes.iter().map(|o| o.1).collect()),
    ];
    for (name, x, passed) in rates {
        let values: Vec<f64> = passed.iter().map(|&ok| if ok { 1.0 } else { 0.0 }).collect();
        for (t, &v) in values.iter().enumerate() {
            report.push(TrialTag::Trial(t), name, x, None, v);
        }
        report.push(TrialTag::Mean, name, x, None, mean(&values));
    }
    Ok(report)
}
