//! Core data model: column-major data matrices, cluster labels, sketches,
//! and the numerical routines every sampler and experiment shares.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default relative singular-value threshold for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// A real matrix whose columns are data points (`rows` = ambient dimension,
/// `cols` = number of points). Entries are finite and both dimensions are
/// at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    inner: DMatrix<f64>,
}

impl DataMatrix {
    pub fn new(inner: DMatrix<f64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(Error::Shape(format!(
                "matrix must be non-empty, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        for col in 0..inner.ncols() {
            for row in 0..inner.nrows() {
                if !inner[(row, col)].is_finite() {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(Self { inner })
    }

    /// Builds a matrix from row-major values.
    pub fn from_row_slice(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} values for a {rows}x{cols} matrix, got {}",
                rows * cols,
                values.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, values))
    }

    /// Builds a matrix from a list of equally sized columns.
    pub fn from_columns(columns: &[DVector<f64>]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Shape("no columns given".into()));
        }
        let rows = columns[0].len();
        if let Some(bad) = columns.iter().position(|c| c.len() != rows) {
            return Err(Error::Shape(format!(
                "column {bad} has length {}, expected {rows}",
                columns[bad].len()
            )));
        }
        Self::new(DMatrix::from_columns(columns))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.inner[(row, col)]
    }

    /// Column `j` as a contiguous slice (storage is column-major).
    pub fn column(&self, j: usize) -> &[f64] {
        let n = self.rows();
        &self.inner.as_slice()[j * n..(j + 1) * n]
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        self.inner.column(j).norm()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    /// Copies the listed columns, in order. Indices may repeat.
    pub fn select_columns(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&j| j >= self.cols()) {
            return Err(Error::Shape(format!(
                "column index {bad} out of range for {} columns",
                self.cols()
            )));
        }
        if indices.is_empty() {
            return Err(Error::EmptySketch);
        }
        Ok(Self {
            inner: self.inner.select_columns(indices),
        })
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    /// Multiplies column `j` by `factor`.
    pub fn scale_column(&self, j: usize, factor: f64) -> Result<Self> {
        let mut inner = self.inner.clone();
        inner.column_mut(j).scale_mut(factor);
        Self::new(inner)
    }

    /// Indices of columns whose norm is exactly zero.
    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.cols())
            .filter(|&j| self.column(j).iter().all(|&v| v == 0.0))
            .collect()
    }

    /// Drops every exactly-zero column, returning the kept original indices.
    pub fn drop_zero_columns(&self) -> Result<(Self, Vec<usize>)> {
        let keep: Vec<usize> = (0..self.cols())
            .filter(|&j| self.column(j).iter().any(|&v| v != 0.0))
            .collect();
        if keep.is_empty() {
            return Err(Error::ZeroMatrix);
        }
        Ok((self.select_columns(&keep)?, keep))
    }

    /// Fails with `NotNormalized` unless every column norm is within `tol` of one.
    pub fn check_unit_columns(&self, tol: f64) -> Result<()> {
        for j in 0..self.cols() {
            let norm = self.column_norm(j);
            if (norm - 1.0).abs() > tol {
                return Err(Error::NotNormalized { column: j, norm });
            }
        }
        Ok(())
    }
}

/// Per-column cluster assignment with ids in `0..num_clusters`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    labels: Vec<usize>,
    num_clusters: usize,
}

impl ClusterLabels {
    pub fn new(labels: Vec<usize>, num_clusters: usize) -> Result<Self> {
        if num_clusters == 0 {
            return Err(Error::BadParams("cluster count must be positive".into()));
        }
        if let Some(pos) = labels.iter().position(|&l| l >= num_clusters) {
            return Err(Error::BadParams(format!(
                "label {} at position {pos} is out of range for {num_clusters} clusters",
                labels[pos]
            )));
        }
        Ok(Self {
            labels,
            num_clusters,
        })
    }

    /// Infers the cluster count as `max + 1`.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let s = labels.iter().copied().max().map_or(0, |m| m + 1);
        Self::new(labels, s)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn get(&self, j: usize) -> usize {
        self.labels[j]
    }

    /// Number of columns carrying each label.
    pub fn populations(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_clusters];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Per-cluster counts of the given column indices.
    pub fn count_indices(&self, indices: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.num_clusters];
        for &j in indices {
            counts[self.labels[j]] += 1;
        }
        counts
    }

    pub fn check_matches(&self, data: &DataMatrix) -> Result<()> {
        if self.len() != data.cols() {
            return Err(Error::Shape(format!(
                "{} labels for {} columns",
                self.len(),
                data.cols()
            )));
        }
        Ok(())
    }
}

/// Sampled column indices (selection order) together with the sampled columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SketchResult {
    pub indices: Vec<usize>,
    pub columns: DataMatrix,
    pub method: String,
    pub seed: u64,
    pub with_replacement: bool,
}

impl SketchResult {
    pub fn from_indices(
        source: &DataMatrix,
        indices: Vec<usize>,
        method: impl Into<String>,
        seed: u64,
        with_replacement: bool,
    ) -> Result<Self> {
        let columns = source.select_columns(&indices)?;
        Ok(Self {
            indices,
            columns,
            method: method.into(),
            seed,
            with_replacement,
        })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Scales every column to unit Euclidean norm.
pub fn normalize_columns(data: &DataMatrix) -> Result<DataMatrix> {
    let mut out = data.inner.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        let norm = col.norm();
        if norm == 0.0 {
            return Err(Error::ZeroColumn(j));
        }
        col.unscale_mut(norm);
    }
    Ok(DataMatrix { inner: out })
}

/// Number of singular values above `rel_tol * sigma_max`; zero for the zero matrix.
pub fn numerical_rank(data: &DataMatrix, rel_tol: f64) -> usize {
    singular_value_rank(&data.inner, rel_tol)
}

pub(crate) fn singular_value_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    // Bidiagonalization is cheaper on the tall orientation, and a very tall
    // matrix is first reduced to its square R factor (same singular values).
    let tall = if m.nrows() >= m.ncols() {
        m.clone()
    } else {
        m.transpose()
    };
    let sv = if tall.nrows() > 2 * tall.ncols() {
        tall.qr().r().singular_values()
    } else {
        tall.singular_values()
    };
    let top = sv.iter().copied().fold(0.0_f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Orthonormal basis (as columns) for the span of `c`, from a
/// column-pivoted Householder QR with rank cut at the R diagonal.
pub(crate) fn orthonormal_span(c: &DMatrix<f64>) -> DMatrix<f64> {
    let qr = c.clone().col_piv_qr();
    let r = qr.r();
    let q = qr.q();
    let diag_len = r.nrows().min(r.ncols());
    let lead = if diag_len > 0 { r[(0, 0)].abs() } else { 0.0 };
    if lead == 0.0 {
        return DMatrix::zeros(c.nrows(), 0);
    }
    let tol = lead * f64::EPSILON * (c.nrows().max(c.ncols()) as f64);
    let rank = (0..diag_len).take_while(|&i| r[(i, i)].abs() > tol).count();
    q.columns(0, rank).into_owned()
}

/// Relative residual `||D - C C^+ D||_F / ||D||_F` of projecting every
/// column of `data` onto the span of `sketch`.
pub fn approximation_error(data: &DataMatrix, sketch: &DataMatrix) -> Result<f64> {
    approximation_error_raw(&data.inner, &sketch.inner)
}

pub(crate) fn approximation_error_raw(d: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<f64> {
    if c.ncols() == 0 {
        return Err(Error::EmptySketch);
    }
    if c.nrows() != d.nrows() {
        return Err(Error::Shape(format!(
            "sketch has {} rows, data has {}",
            c.nrows(),
            d.nrows()
        )));
    }
    let total = d.norm();
    if total == 0.0 {
        return Ok(0.0);
    }
    let basis = orthonormal_span(c);
    let residual = if basis.ncols() == 0 {
        d.clone()
    } else {
        let coeffs = basis.transpose() * d;
        d - &basis * coeffs
    };
    Ok(residual.norm() / total)
}
