//! Spatial random sampling.
//!
//! Every direction `phi_i` is projected onto the unit-norm data columns
//! (`Q = Phi X`) and the column with the largest `|q_ij|` is taken. The
//! without-replacement variant excludes already chosen columns; the
//! with-replacement variant treats every direction independently. Ties go
//! to the lowest column index.

use nalgebra::DMatrix;

use super::directions::{sample_gaussian_directions, DirectionMatrix};
use super::{check_sample_count, UNIT_NORM_TOL};
use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, SketchResult};
use crate::rng_from_seed;

/// Rows of `Q` computed per matrix product; bounds peak memory on wide data.
const PROJECTION_BLOCK: usize = 64;

fn check_directions(x: &DataMatrix, phi: &DirectionMatrix) -> Result<()> {
    if phi.ambient() != x.rows() {
        return Err(Error::Shape(format!(
            "directions have dimension {}, data has {} rows",
            phi.ambient(),
            x.rows()
        )));
    }
    Ok(())
}

/// Calls `visit(i, q_i)` for every row of `Phi X`, in order.
pub(crate) fn for_each_projection(x: &DataMatrix, phi: &DirectionMatrix, mut visit: impl FnMut(usize, &[f64])) {
    let phi = phi.as_matrix();
    let x = x.as_matrix();
    let mut row = vec![0.0; x.ncols()];
    let mut start = 0;
    while start < phi.nrows() {
        let len = PROJECTION_BLOCK.min(phi.nrows() - start);
        // Q_block^T = X^T Phi_block^T keeps each projection row contiguous.
        let block: DMatrix<f64> = x.tr_mul(&phi.rows(start, len).transpose());
        for r in 0..len {
            row.copy_from_slice(block.column(r).as_slice());
            visit(start + r, &row);
        }
        start += len;
    }
}

fn argmax_abs(q: &[f64], taken: Option<&[bool]>) -> usize {
    let mut best = usize::MAX;
    let mut best_val = f64::NEG_INFINITY;
    for (j, &v) in q.iter().enumerate() {
        if taken.is_some_and(|t| t[j]) {
            continue;
        }
        let a = v.abs();
        if a > best_val {
            best_val = a;
            best = j;
        }
    }
    best
}

/// Selection step of the without-replacement algorithm for explicit
/// directions: one column per row of `phi`, never repeating a column.
pub fn srs_select_without_replacement(x: &DataMatrix, phi: &DirectionMatrix) -> Result<Vec<usize>> {
    check_directions(x, phi)?;
    check_sample_count(phi.count(), x.cols())?;
    let mut taken = vec![false; x.cols()];
    let mut indices = Vec::with_capacity(phi.count());
    for_each_projection(x, phi, |_, q| {
        let k = argmax_abs(q, Some(&taken));
        taken[k] = true;
        indices.push(k);
    });
    Ok(indices)
}

/// Selection step of the with-replacement algorithm for explicit directions.
pub fn srs_select_with_replacement(x: &DataMatrix, phi: &DirectionMatrix) -> Result<Vec<usize>> {
    check_directions(x, phi)?;
    let mut indices = Vec::with_capacity(phi.count());
    for_each_projection(x, phi, |_, q| indices.push(argmax_abs(q, None)));
    Ok(indices)
}

/// Samples `n` distinct columns of the unit-column matrix `x`.
pub fn srs_without_replacement(x: &DataMatrix, n: usize, seed: u64) -> Result<SketchResult> {
    check_sample_count(n, x.cols())?;
    x.check_unit_columns(UNIT_NORM_TOL)?;
    let phi = sample_gaussian_directions(n, x.rows(), &mut rng_from_seed(seed));
    let indices = srs_select_without_replacement(x, &phi)?;
    SketchResult::from_indices(x, indices, "srs", seed, false)
}

/// Samples `n` columns of the unit-column matrix `x`, repeats allowed.
pub fn srs_with_replacement(x: &DataMatrix, n: usize, seed: u64) -> Result<SketchResult> {
    if n == 0 {
        return Err(Error::BadParams("sample count must be positive".into()));
    }
    x.check_unit_columns(UNIT_NORM_TOL)?;
    let phi = sample_gaussian_directions(n, x.rows(), &mut rng_from_seed(seed));
    let indices = srs_select_with_replacement(x, &phi)?;
    SketchResult::from_indices(x, indices, "srs_repl", seed, true)
}
