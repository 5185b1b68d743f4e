#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use srs::sampling::DirectionMatrix;
use srs::DataMatrix;

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Gaussian matrix with every column scaled to unit length.
pub fn unit_columns<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DataMatrix {
    let mut m = gaussian_matrix(rows, cols, rng);
    for mut c in m.column_iter_mut() {
        let norm = c.norm();
        c /= norm;
    }
    DataMatrix::new(m).unwrap()
}

/// Direct loop over rows of `phi`: for each direction, the unused column of
/// `x` with the largest absolute inner product, earliest column on ties.
pub fn brute_force_srs(x: &DataMatrix, phi: &DMatrix<f64>, with_replacement: bool) -> Vec<usize> {
    let mut used = vec![false; x.cols()];
    let mut picks = Vec::with_capacity(phi.nrows());
    for i in 0..phi.nrows() {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..x.cols() {
            if !with_replacement && used[j] {
                continue;
            }
            let dot: f64 = (0..x.rows()).map(|k| phi[(i, k)] * x.get(k, j)).sum();
            let score = dot.abs();
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((j, score));
            }
        }
        let (j, _) = best.expect("an unused column remains");
        used[j] = true;
        picks.push(j);
    }
    picks
}

pub fn directions(phi: DMatrix<f64>) -> DirectionMatrix {
    DirectionMatrix::from_matrix(phi).unwrap()
}

/// Mean of `values[range]`.
pub fn mean_of(values: &[f64], range: std::ops::Range<usize>) -> f64 {
    let len = range.len() as f64;
    values[range].iter().sum::<f64>() / len
}
