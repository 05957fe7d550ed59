//! Dense matrix primitives shared by every MDS routine.
//!
//! Distances are always stored squared. Double centering is done with the
//! row/column/grand-mean identity, so the centering matrix `P = I - 11ᵀ/n`
//! is never built. Eigen and singular value decompositions are delegated to
//! `faer` running sequentially, and a deterministic sign convention is applied
//! to every returned vector.

use faer::{Mat, Side};

use crate::error::{MdsError, Result};

/// Largest row count accepted by the exact O(n²)-memory operations.
pub const DEFAULT_EXACT_ROW_LIMIT: usize = 20_000;

/// Eigenvalues whose magnitude falls below this fraction of the spectral
/// radius are snapped to exactly zero.
pub const EIGEN_ZERO_TOLERANCE: f64 = 1e-8;

/// Row-major `n × k` matrix of observations. Rows are individuals.
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(MdsError::InvalidInput(format!(
                "data matrix must be at least 1×1, got {rows}×{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(MdsError::Shape(format!(
                "{rows}×{cols} matrix needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(MdsError::InvalidInput(format!(
                "non-finite value {} at row {}, column {}",
                values[pos],
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(MdsError::Shape(format!(
                    "row {i} has {} columns, expected {cols}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, values)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                values.push(f(i, j));
            }
        }
        Self::new(rows, cols, values)
    }

    /// Copies a faer matrix (e.g. an MDS configuration) into row-major storage.
    pub fn from_mat(m: &Mat<f64>) -> Result<Self> {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.cols)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows_iter().map(|r| r[j]).collect()
    }

    /// New matrix made of the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> DataMatrix {
        let mut values = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        DataMatrix {
            rows: indices.len(),
            cols: self.cols,
            values,
        }
    }

    /// The first `count` columns.
    pub fn leading_columns(&self, count: usize) -> Result<DataMatrix> {
        if count == 0 || count > self.cols {
            return Err(MdsError::Param(format!(
                "cannot take {count} leading columns of a {}-column matrix",
                self.cols
            )));
        }
        Ok(DataMatrix {
            rows: self.rows,
            cols: count,
            values: self.rows_iter().flat_map(|r| r[..count].iter().copied()).collect(),
        })
    }

    pub fn to_mat(&self) -> Mat<f64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }
}

/// Symmetric matrix of squared pairwise distances with a zero diagonal.
#[derive(Clone, Debug)]
pub struct SquaredDistanceMatrix(Mat<f64>);

impl SquaredDistanceMatrix {
    /// Validates a user-supplied matrix of squared distances.
    pub fn new(m: Mat<f64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || m.ncols() != n {
            return Err(MdsError::Shape(format!(
                "distance matrix must be square and non-empty, got {}×{}",
                n,
                m.ncols()
            )));
        }
        let mut scale = 0.0_f64;
        for j in 0..n {
            for i in 0..n {
                let v = m[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(MdsError::InvalidInput(format!(
                        "entry ({i},{j}) = {v} is not a finite non-negative squared distance"
                    )));
                }
                scale = scale.max(v);
            }
        }
        for i in 0..n {
            if m[(i, i)] != 0.0 {
                return Err(MdsError::InvalidInput(format!(
                    "diagonal entry {i} is {} (must be 0)",
                    m[(i, i)]
                )));
            }
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(MdsError::InvalidInput(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_mat(&self) -> &Mat<f64> {
        &self.0
    }
}

/// Double-centred inner product matrix `Q = -½ P Δ P`.
#[derive(Clone, Debug)]
pub struct InnerProductMatrix(Mat<f64>);

impl InnerProductMatrix {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)]).collect()
    }

    pub fn as_mat(&self) -> &Mat<f64> {
        &self.0
    }

    /// Wraps an arbitrary symmetric matrix. Symmetry is the caller's promise.
    pub fn from_symmetric(m: Mat<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(MdsError::Shape(format!(
                "inner product matrix must be square and non-empty, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }
}

/// Eigenpairs sorted by descending eigenvalue. Vectors are the columns of
/// `eigenvectors`, unit norm, signed so their largest-magnitude entry is positive.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat<f64>,
    /// Number of eigenvalues that are strictly positive after zero snapping.
    pub rank_used: usize,
}

/// Thin singular value decomposition `m = U diag(σ) Vᵀ`, σ descending.
#[derive(Clone, Debug)]
pub struct ThinSvd {
    pub left: Mat<f64>,
    pub singular_values: Vec<f64>,
    pub right: Mat<f64>,
}

fn check_exact_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(MdsError::Param(format!(
            "{n} rows exceed the exact-computation limit of {limit}; \
             use the divide-and-conquer, interpolation or fast algorithms"
        )));
    }
    Ok(())
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

pub fn euclidean_distance_matrix(data: &DataMatrix) -> Result<SquaredDistanceMatrix> {
    euclidean_distance_matrix_with_limit(data, DEFAULT_EXACT_ROW_LIMIT)
}

pub fn euclidean_distance_matrix_with_limit(
    data: &DataMatrix,
    max_rows: usize,
) -> Result<SquaredDistanceMatrix> {
    let n = data.nrows();
    check_exact_limit(n, max_rows)?;
    let mut d = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        let ri = data.row(i);
        for j in 0..i {
            let v = squared_distance(ri, data.row(j));
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    Ok(SquaredDistanceMatrix(d))
}

/// `m × ℓ` matrix of squared distances between rows of `a` and rows of `b`.
pub fn cross_squared_distances(a: &DataMatrix, b: &DataMatrix) -> Result<Mat<f64>> {
    if a.ncols() != b.ncols() {
        return Err(MdsError::Shape(format!(
            "row sets have {} and {} columns",
            a.ncols(),
            b.ncols()
        )));
    }
    let mut out = Mat::<f64>::zeros(a.nrows(), b.nrows());
    for j in 0..b.nrows() {
        let rb = b.row(j);
        for i in 0..a.nrows() {
            out[(i, j)] = squared_distance(a.row(i), rb);
        }
    }
    Ok(out)
}

/// `q_ij = -½ (d²_ij - d²_i. - d²_.j + d²_..)`.
pub fn double_center(delta: &SquaredDistanceMatrix) -> InnerProductMatrix {
    let d = delta.as_mat();
    let n = d.nrows();
    let inv_n = 1.0 / n as f64;
    let row_mean: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| d[(i, j)]).sum::<f64>() * inv_n)
        .collect();
    let col_mean: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| d[(i, j)]).sum::<f64>() * inv_n)
        .collect();
    let grand = row_mean.iter().sum::<f64>() * inv_n;
    let q = Mat::from_fn(n, n, |i, j| {
        -0.5 * (d[(i, j)] - row_mean[i] - col_mean[j] + grand)
    });
    InnerProductMatrix(q)
}

/// Flip every column so its largest-magnitude entry is positive. Entries
/// within a relative 1e-12 of the maximum count as ties; the lowest index wins.
fn canonical_signs(m: &mut Mat<f64>) -> Vec<bool> {
    let mut flipped = Vec::with_capacity(m.ncols());
    for j in 0..m.ncols() {
        let max = (0..m.nrows()).map(|i| m[(i, j)].abs()).fold(0.0, f64::max);
        let pivot = (0..m.nrows()).find(|&i| m[(i, j)].abs() >= max * (1.0 - 1e-12));
        let flip = matches!(pivot, Some(i) if m[(i, j)] < 0.0);
        if flip {
            for i in 0..m.nrows() {
                m[(i, j)] = -m[(i, j)];
            }
        }
        flipped.push(flip);
    }
    flipped
}

/// Full eigendecomposition, descending.
pub fn symmetric_eigen(q: &InnerProductMatrix) -> Result<EigenSystem> {
    let n = q.dim();
    let evd = q
        .as_mat()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| MdsError::Numerical(format!("symmetric eigensolver failed: {e:?}")))?;
    let values = evd.S().column_vector();
    let vectors = evd.U();

    // The solver returns ascending order; a stable descending sort keeps
    // its relative order among tied values.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

    let radius = (0..n).map(|i| values[i].abs()).fold(0.0, f64::max);
    let zero_below = EIGEN_ZERO_TOLERANCE * radius;
    let eigenvalues: Vec<f64> = order
        .iter()
        .map(|&k| {
            let v = values[k];
            if v.abs() <= zero_below {
                0.0
            } else {
                v
            }
        })
        .collect();
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(MdsError::Numerical("eigensolver produced non-finite values".into()));
    }
    let mut eigenvectors = Mat::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    canonical_signs(&mut eigenvectors);
    let rank_used = eigenvalues.iter().filter(|&&v| v > 0.0).count();
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
        rank_used,
    })
}

/// Top `r` eigenpairs by algebraic value.
pub fn symmetric_eigen_topk(q: &InnerProductMatrix, r: usize) -> Result<EigenSystem> {
    let n = q.dim();
    if r == 0 || r + 1 > n {
        return Err(MdsError::Param(format!(
            "requested {r} eigenpairs of a {n}×{n} matrix (need 1 ≤ r ≤ n−1)"
        )));
    }
    let full = symmetric_eigen(q)?;
    Ok(truncate_eigen(&full, r))
}

pub(crate) fn truncate_eigen(full: &EigenSystem, r: usize) -> EigenSystem {
    let n = full.eigenvectors.nrows();
    let eigenvalues = full.eigenvalues[..r].to_vec();
    let rank_used = eigenvalues.iter().filter(|&&v| v > 0.0).count();
    EigenSystem {
        eigenvalues,
        eigenvectors: Mat::from_fn(n, r, |i, j| full.eigenvectors[(i, j)]),
        rank_used,
    }
}

pub fn thin_svd(m: &Mat<f64>) -> Result<ThinSvd> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(MdsError::Shape("cannot decompose an empty matrix".into()));
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(MdsError::InvalidInput(format!(
                    "non-finite entry ({i},{j}) in SVD input"
                )));
            }
        }
    }
    let svd = m
        .thin_svd()
        .map_err(|e| MdsError::Numerical(format!("SVD failed to converge: {e:?}")))?;
    let s = svd.S().column_vector();
    let singular_values: Vec<f64> = (0..s.nrows()).map(|i| s[i]).collect();
    let mut left = svd.U().to_owned();
    let mut right = svd.V().to_owned();
    let flipped = canonical_signs(&mut left);
    for (j, flip) in flipped.into_iter().enumerate() {
        if flip {
            for i in 0..right.nrows() {
                right[(i, j)] = -right[(i, j)];
            }
        }
    }
    Ok(ThinSvd {
        left,
        singular_values,
        right,
    })
}

/// Max absolute entry.
pub fn max_abs(m: &Mat<f64>) -> f64 {
    let mut out = 0.0_f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out = out.max(m[(i, j)].abs());
        }
    }
    out
}

/// Frobenius norm.
pub fn frobenius(m: &Mat<f64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)] * m[(i, j)];
        }
    }
    acc.sqrt()
}
