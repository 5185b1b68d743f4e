//! Random row-dimension reduction `D' = S D` applied before sampling.
//!
//! Embedded columns are no longer unit norm; callers re-run
//! [`crate::matrix::normalize_columns`] before spatial sampling.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// Classical three-point sparse law: nonzero with probability 1/3.
pub const DEFAULT_SPARSE_DENSITY: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EmbeddingKind {
    /// Random subset of standard-basis rows.
    Rows,
    /// I.i.d. `N(0, 1/p)` entries.
    Gaussian,
    /// `±sqrt(1/(density p))` with probability `density/2` each, else zero.
    Sparse,
    /// `±1/sqrt(p)` with equal probability.
    Rademacher,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingSpec {
    pub kind: EmbeddingKind,
    pub p: usize,
    pub density: f64,
}

impl EmbeddingSpec {
    pub fn new(kind: EmbeddingKind, p: usize) -> Self {
        Self {
            kind,
            p,
            density: DEFAULT_SPARSE_DENSITY,
        }
    }
}

pub fn build_embedding<R: Rng + ?Sized>(
    spec: &EmbeddingSpec,
    ambient: usize,
    rng: &mut R,
) -> Result<DataMatrix> {
    let p = spec.p;
    if p == 0 || ambient == 0 || (spec.kind == EmbeddingKind::Rows && p > ambient) {
        return Err(Error::BadTargetDim { p, ambient });
    }
    let scale = 1.0 / (p as f64).sqrt();
    let mut s = DMatrix::zeros(p, ambient);
    match spec.kind {
        EmbeddingKind::Rows => {
            let mut all: Vec<usize> = (0..ambient).collect();
            let (chosen, _) = all.partial_shuffle(rng, p);
            for (i, &j) in chosen.iter().enumerate() {
                s[(i, j)] = 1.0;
            }
        }
        EmbeddingKind::Gaussian => {
            for i in 0..p {
                for j in 0..ambient {
                    let g: f64 = rng.sample(StandardNormal);
                    s[(i, j)] = g * scale;
                }
            }
        }
        EmbeddingKind::Sparse => {
            let density = spec.density;
            if !(density > 0.0 && density <= 1.0) {
                return Err(Error::BadParams(format!(
                    "sparse density must lie in (0, 1], got {density}"
                )));
            }
            let value = 1.0 / (density * p as f64).sqrt();
            for i in 0..p {
                for j in 0..ambient {
                    let u: f64 = rng.random();
                    s[(i, j)] = if u < density / 2.0 {
                        value
                    } else if u < density {
                        -value
                    } else {
                        0.0
                    };
                }
            }
        }
        EmbeddingKind::Rademacher => {
            for i in 0..p {
                for j in 0..ambient {
                    s[(i, j)] = if rng.random::<bool>() { scale } else { -scale };
                }
            }
        }
    }
    DataMatrix::new(s)
}

pub fn apply_embedding(s: &DataMatrix, data: &DataMatrix) -> Result<DataMatrix> {
    if s.cols() != data.rows() {
        return Err(Error::Shape(format!(
            "embedding has {} columns, data has {} rows",
            s.cols(),
            data.rows()
        )));
    }
    DataMatrix::new(s.as_matrix() * data.as_matrix())
}
