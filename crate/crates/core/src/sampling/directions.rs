use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// `n x ambient` matrix of i.i.d. standard normals. Each row, once
/// normalized, is a uniform direction on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionMatrix {
    phi: DMatrix<f64>,
}

impl DirectionMatrix {
    pub fn from_matrix(phi: DMatrix<f64>) -> Result<Self> {
        if phi.nrows() == 0 || phi.ncols() == 0 {
            return Err(Error::Shape("direction matrix must be non-empty".into()));
        }
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::Shape("direction matrix has non-finite entries".into()));
        }
        Ok(Self { phi })
    }

    pub fn from_row_slice(n: usize, ambient: usize, values: &[f64]) -> Result<Self> {
        if values.len() != n * ambient {
            return Err(Error::Shape(format!(
                "expected {} values for {n} directions in dimension {ambient}",
                n * ambient
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(n, ambient, values))
    }

    pub fn count(&self) -> usize {
        self.phi.nrows()
    }

    pub fn ambient(&self) -> usize {
        self.phi.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.phi
    }

    /// First `n` directions.
    pub fn head(&self, n: usize) -> Self {
        Self {
            phi: self.phi.rows(0, n.min(self.count())).into_owned(),
        }
    }
}

/// Draws `n` Gaussian directions in dimension `ambient`, filling row by row
/// so the first `k` rows do not depend on `n`.
pub fn sample_gaussian_directions<R: Rng + ?Sized>(
    n: usize,
    ambient: usize,
    rng: &mut R,
) -> DirectionMatrix {
    assert!(n >= 1 && ambient >= 1, "direction count and dimension must be positive");
    let mut phi = DMatrix::zeros(n, ambient);
    for i in 0..n {
        for j in 0..ambient {
            phi[(i, j)] = rng.sample(StandardNormal);
        }
    }
    DirectionMatrix { phi }
}
