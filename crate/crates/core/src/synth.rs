//! Synthetic data with ground-truth clusters: two arcs on the unit circle,
//! and unions of random linear subspaces.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{ClusterLabels, DataMatrix};

/// Two clusters of unit vectors in the plane, spread uniformly over arcs of
/// length `tau1`, `tau2` centred at the given angles (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSpec {
    pub tau1: f64,
    pub tau2: f64,
    pub center1: f64,
    pub center2: f64,
    pub n1: usize,
    pub n2: usize,
}

impl ArcSpec {
    /// Centres at 0 and pi/2: the largest gap to both the other arc and its
    /// antipodal image, valid whenever `tau1 + tau2 < pi`.
    pub fn new(tau1: f64, tau2: f64, n1: usize, n2: usize) -> Self {
        Self {
            tau1,
            tau2,
            center1: 0.0,
            center2: FRAC_PI_2,
            n1,
            n2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (t1, t2) = (self.tau1, self.tau2);
        if !(t1 > 0.0 && t2 > 0.0 && t1 + t2 < PI) {
            return Err(Error::BadArcLengths { tau1: t1, tau2: t2 });
        }
        if !(self.center1.is_finite() && self.center2.is_finite()) {
            return Err(Error::BadParams("arc centres must be finite".into()));
        }
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::BadParams("arc populations must be positive".into()));
        }
        // Up to sign, directions live on a circle of circumference pi; the
        // arcs and their antipodal images are disjoint iff the two arcs are
        // disjoint there.
        let gap = (self.center2 - self.center1).rem_euclid(PI);
        let dist = gap.min(PI - gap);
        if dist <= (t1 + t2) / 2.0 {
            return Err(Error::ArcOverlap(format!(
                "centres {} and {} are {dist:.6} rad apart modulo pi, need more than {:.6}",
                self.center1,
                self.center2,
                (t1 + t2) / 2.0
            )));
        }
        Ok(())
    }

    /// Cluster-1 share of the sphere regions: `(pi + tau1 - tau2) / (2 pi)`.
    pub fn cluster1_area(&self) -> f64 {
        (PI + self.tau1 - self.tau2) / (2.0 * PI)
    }
}

pub fn gen_arc_clusters<R: Rng + ?Sized>(
    spec: &ArcSpec,
    rng: &mut R,
) -> Result<(DataMatrix, ClusterLabels)> {
    spec.validate()?;
    let total = spec.n1 + spec.n2;
    let mut m = DMatrix::zeros(2, total);
    let mut labels = Vec::with_capacity(total);
    let arcs = [
        (spec.center1, spec.tau1, spec.n1),
        (spec.center2, spec.tau2, spec.n2),
    ];
    let mut col = 0;
    for (cluster, &(center, tau, count)) in arcs.iter().enumerate() {
        for _ in 0..count {
            let u: f64 = rng.random();
            let theta = center + tau * (u - 0.5);
            m[(0, col)] = theta.cos();
            m[(1, col)] = theta.sin();
            labels.push(cluster);
            col += 1;
        }
    }
    Ok((DataMatrix::new(m)?, ClusterLabels::new(labels, 2)?))
}

/// Union of random subspaces: cluster `i` holds `populations[i]` points
/// uniform on the unit sphere of a random `dims[i]`-dimensional subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceSpec {
    pub ambient: usize,
    pub dims: Vec<usize>,
    pub populations: Vec<usize>,
}

impl SubspaceSpec {
    /// `s` subspaces of dimension `r / s` each.
    pub fn homogeneous(ambient: usize, r: usize, s: usize, populations: Vec<usize>) -> Result<Self> {
        if s == 0 || !r.is_multiple_of(s) {
            return Err(Error::BadDims(format!(
                "rank {r} is not divisible by {s} subspaces"
            )));
        }
        let spec = Self {
            ambient,
            dims: vec![r / s; s],
            populations,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::BadDims("at least one subspace is required".into()));
        }
        if self.dims.len() != self.populations.len() {
            return Err(Error::BadDims(format!(
                "{} dimensions but {} populations",
                self.dims.len(),
                self.populations.len()
            )));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d == 0 || d > self.ambient) {
            return Err(Error::BadDims(format!(
                "subspace dimension {d} must lie in 1..={}",
                self.ambient
            )));
        }
        if self.populations.contains(&0) {
            return Err(Error::BadDims("every subspace needs at least one point".into()));
        }
        Ok(())
    }

    pub fn total_points(&self) -> usize {
        self.populations.iter().sum()
    }

    /// Sum of subspace dimensions (the rank when subspaces are independent).
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// Orthonormal basis of a rotation-invariant random subspace.
fn random_basis<R: Rng + ?Sized>(ambient: usize, dim: usize, rng: &mut R) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(ambient, dim);
    for j in 0..dim {
        for i in 0..ambient {
            g[(i, j)] = rng.sample(StandardNormal);
        }
    }
    g.qr().q()
}

pub fn gen_union_subspaces<R: Rng + ?Sized>(
    spec: &SubspaceSpec,
    rng: &mut R,
) -> Result<(DataMatrix, ClusterLabels)> {
    spec.validate()?;
    let total = spec.total_points();
    let mut m = DMatrix::zeros(spec.ambient, total);
    let mut labels = Vec::with_capacity(total);
    let mut col = 0;
    for (cluster, (&dim, &count)) in spec.dims.iter().zip(&spec.populations).enumerate() {
        let basis = random_basis(spec.ambient, dim, rng);
        for _ in 0..count {
            let g = loop {
                let g = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
                if g.norm() > 0.0 {
                    break g;
                }
            };
            let mut x = &basis * g;
            x.unscale_mut(x.norm());
            m.set_column(col, &x);
            labels.push(cluster);
            col += 1;
        }
    }
    Ok((DataMatrix::new(m)?, ClusterLabels::new(labels, spec.dims.len())?))
}

/// Named configurations used by the experiments.
pub mod presets {
    use super::SubspaceSpec;

    /// 50 planes: 25 with 20 points and 25 with 500 points (rank 100).
    pub fn rank_capture(ambient: usize) -> SubspaceSpec {
        let mut populations = vec![20; 25];
        populations.extend(vec![500; 25]);
        SubspaceSpec {
            ambient,
            dims: vec![2; 50],
            populations,
        }
    }

    /// 20 planes: 10 with 30 points and 10 with 700 points (rank 40).
    pub fn balanced_coverage(ambient: usize) -> SubspaceSpec {
        let mut populations = vec![30; 10];
        populations.extend(vec![700; 10]);
        SubspaceSpec {
            ambient,
            dims: vec![2; 20],
            populations,
        }
    }

    /// Ten crowded planes (3200 points each) and ten sparse 4-dimensional
    /// subspaces (80 points each).
    pub fn dimension_seeking(ambient: usize) -> SubspaceSpec {
        let mut dims = vec![2; 10];
        dims.extend(vec![4; 10]);
        let mut populations = vec![3200; 10];
        populations.extend(vec![80; 10]);
        SubspaceSpec {
            ambient,
            dims,
            populations,
        }
    }
}
