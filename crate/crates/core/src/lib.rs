//! Spatial random sampling (SRS) and baseline column samplers for building
//! structure-preserving sketches of a data matrix, with synthetic data
//! generators and experiment drivers.
//!
//! Data points are the columns of a [`DataMatrix`]. SRS normalizes the
//! columns, draws Gaussian directions, and keeps for every direction the
//! column with the largest absolute projection, so each cluster is sampled
//! in proportion to the area it covers on the unit sphere rather than its
//! population.

pub mod analysis;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod io;
pub mod matrix;
pub mod sampling;
pub mod synth;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use error::{Error, Result};
pub use matrix::{
    approximation_error, normalize_columns, numerical_rank, ClusterLabels, DataMatrix,
    SketchResult, DEFAULT_RANK_TOL,
};
pub use sampling::{Method, SamplerSpec};

/// The generator behind every seeded operation.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of trial `trial` in a run with `master` seed.
pub fn child_seed(master: u64, trial: usize) -> u64 {
    master.wrapping_add(trial as u64)
}
