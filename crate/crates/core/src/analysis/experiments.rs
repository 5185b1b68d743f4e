//! Multi-trial experiment drivers. Trial `t` always runs with seed
//! `master_seed + t`, and rows are assembled in trial order whatever order
//! the trials finish in.

use std::borrow::Cow;

use rayon::prelude::*;

use super::report::{mean, median, ExperimentReport, TrialTag};
use crate::child_seed;
use crate::error::{Error, Result};
use crate::matrix::{normalize_columns, singular_value_rank, ClusterLabels, DataMatrix, DEFAULT_RANK_TOL};
use crate::sampling::SamplerSpec;

/// Normalizes the data when the method needs unit columns; other methods
/// see the raw data.
pub fn prepare_input<'a>(spec: &SamplerSpec, data: &'a DataMatrix) -> Result<Cow<'a, DataMatrix>> {
    if spec.method.needs_unit_columns() {
        Ok(Cow::Owned(normalize_columns(data)?))
    } else {
        Ok(Cow::Borrowed(data))
    }
}

/// Numerical rank of growing sketches. Each trial draws one sketch of the
/// largest grid size and evaluates its leading `n` columns for every `n`
/// in the grid, so ranks within a trial are nested.
pub fn rank_curve(
    data: &DataMatrix,
    spec: &SamplerSpec,
    n_grid: &[usize],
    trials: usize,
    master_seed: u64,
) -> Result<ExperimentReport> {
    let grid: Vec<usize> = n_grid.iter().copied().filter(|&n| n > 0).collect();
    if grid.is_empty() || trials == 0 {
        return Err(Error::BadParams("rank curve needs a non-empty grid and trials".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadParams("sample grid must be strictly ascending".into()));
    }
    let n_max = *grid.last().unwrap();
    let input = prepare_input(spec, data)?;
    let sampler = spec.with_n(n_max);

    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sketch = sampler.with_seed(child_seed(master_seed, t)).sample(&input)?;
            let cols = sketch.columns.as_matrix();
            Ok(grid
                .iter()
                .map(|&n| singular_value_rank(&cols.columns(0, n).into_owned(), DEFAULT_RANK_TOL) as f64)
                .collect())
        })
        .collect::<Result<_>>()?;

    let method = spec.method.name();
    let mut report = ExperimentReport::new();
    report
        .meta("experiment", "rank-curve")
        .meta("method", method)
        .meta("trials", trials)
        .meta("master_seed", master_seed);
    for (t, ranks) in per_trial.iter().enumerate() {
        for (&n, &rank) in grid.iter().zip(ranks) {
            report.push(TrialTag::Trial(t), method, n as f64, None, rank);
        }
    }
    for (i, &n) in grid.iter().enumerate() {
        let column: Vec<f64> = per_trial.iter().map(|r| r[i]).collect();
        report.push(TrialTag::Median, method, n as f64, None, median(&column));
        report.push(TrialTag::Mean, method, n as f64, None, mean(&column));
    }
    Ok(report)
}

/// Smallest grid size whose summary value reaches `target`.
pub fn samples_to_reach(
    report: &ExperimentReport,
    method: &str,
    summary: TrialTag,
    target: f64,
) -> Option<usize> {
    report
        .series(summary, method)
        .into_iter()
        .find(|&(_, v)| v >= target)
        .map(|(x, _)| x as usize)
}

/// Per-cluster sample counts of `n`-column sketches, for every method.
/// Rows: one per (method, trial, cluster) plus a per-cluster `mean` row.
pub fn coverage_experiment(
    data: &DataMatrix,
    labels: &ClusterLabels,
    specs: &[SamplerSpec],
    n: usize,
    trials: usize,
    master_seed: u64,
) -> Result<ExperimentReport> {
    labels.check_matches(data)?;
    if trials == 0 {
        return Err(Error::BadParams("at least one trial is required".into()));
    }
    let s = labels.num_clusters();
    let mut report = ExperimentReport::new();
    report
        .meta("experiment", "coverage")
        .meta("n", n)
        .meta("trials", trials)
        .meta("master_seed", master_seed);
    for spec in specs {
        let input = prepare_input(spec, data)?;
        let sampler = spec.with_n(n);
        let counts: Vec<Vec<usize>> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let sketch = sampler.with_seed(child_seed(master_seed, t)).sample(&input)?;
                Ok(labels.count_indices(&sketch.indices))
            })
            .collect::<Result<_>>()?;
        let method = spec.method.name();
        for (t, row) in counts.iter().enumerate() {
            for (c, &count) in row.iter().enumerate() {
                report.push(TrialTag::Trial(t), method, n as f64, Some(c), count as f64);
            }
        }
        for c in 0..s {
            let values: Vec<f64> = counts.iter().map(|row| row[c] as f64).collect();
            report.push(TrialTag::Mean, method, n as f64, Some(c), mean(&values));
        }
    }
    Ok(report)
}
