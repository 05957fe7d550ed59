//! Classical (Torgerson) multidimensional scaling.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{MdsError, Result};
use crate::matrix::{
    double_center, euclidean_distance_matrix_with_limit, symmetric_eigen, DataMatrix,
    SquaredDistanceMatrix, DEFAULT_EXACT_ROW_LIMIT,
};

/// An `n × r` embedding together with its fit statistics.
#[derive(Clone, Debug)]
pub struct MdsConfiguration {
    /// Row `i` is the embedding of input row `i`.
    pub points: Mat<f64>,
    /// Variance-scale eigenvalue estimates (`λᵢ / n` for classical MDS).
    pub eigenvalue_estimates: Vec<f64>,
    pub gof_g1: f64,
    pub gof_g2: f64,
    /// Number of Procrustes fits that saw a rank-deficient cross-product.
    pub degenerate_alignments: usize,
}

impl MdsConfiguration {
    pub fn dimension(&self) -> usize {
        self.points.ncols()
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn column_means(&self) -> Vec<f64> {
        column_means(&self.points)
    }
}

pub(crate) fn column_means(m: &Mat<f64>) -> Vec<f64> {
    let n = m.nrows() as f64;
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)]).sum::<f64>() / n)
        .collect()
}

/// Spectral sums behind the two goodness-of-fit ratios.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofBreakdown {
    pub positive_sum: f64,
    pub absolute_sum: f64,
    pub retained_sum: f64,
}

impl GofBreakdown {
    pub fn new(eigenvalues: &[f64], r: usize) -> Self {
        let r = r.min(eigenvalues.len());
        Self {
            positive_sum: eigenvalues.iter().map(|v| v.max(0.0)).sum(),
            absolute_sum: eigenvalues.iter().map(|v| v.abs()).sum(),
            retained_sum: eigenvalues[..r].iter().sum(),
        }
    }

    pub fn g1(&self) -> f64 {
        self.retained_sum / self.absolute_sum
    }

    pub fn g2(&self) -> f64 {
        self.retained_sum / self.positive_sum
    }
}

/// `G1 = Σ_{i≤r} λᵢ / Σ |λᵢ|` and `G2 = Σ_{i≤r} λᵢ / Σ max(λᵢ, 0)`.
///
/// `all_eigenvalues` must be sorted descending.
pub fn goodness_of_fit(all_eigenvalues: &[f64], r: usize) -> Result<(f64, f64)> {
    if r == 0 || r > all_eigenvalues.len() {
        return Err(MdsError::Param(format!(
            "r = {r} outside 1..={}",
            all_eigenvalues.len()
        )));
    }
    let parts = GofBreakdown::new(all_eigenvalues, r);
    if parts.absolute_sum == 0.0 || parts.positive_sum == 0.0 {
        let value = all_eigenvalues.first().copied().unwrap_or(0.0);
        return Err(MdsError::degenerate(0, value));
    }
    Ok((parts.g1(), parts.g2()))
}

/// Drops the eigenvalue nearest zero: `Q·1 = 0` guarantees one trivial zero
/// eigenvalue, and whichever numerically-zero value is removed leaves the
/// same n−1 nontrivial sums.
fn nontrivial_spectrum(eigenvalues: &[f64]) -> Vec<f64> {
    let mut trivial = 0;
    for (i, v) in eigenvalues.iter().enumerate() {
        // `<=` picks the last of tied zeros, which keeps the zero tail contiguous.
        if v.abs() <= eigenvalues[trivial].abs() {
            trivial = i;
        }
    }
    eigenvalues
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != trivial)
        .map(|(_, &v)| v)
        .collect()
}

pub fn classical_mds(delta: &SquaredDistanceMatrix, r: usize) -> Result<MdsConfiguration> {
    classical_mds_with_limit(delta, r, DEFAULT_EXACT_ROW_LIMIT)
}

pub fn classical_mds_with_limit(
    delta: &SquaredDistanceMatrix,
    r: usize,
    max_rows: usize,
) -> Result<MdsConfiguration> {
    let n = delta.dim();
    if r == 0 || r + 1 > n {
        return Err(MdsError::Param(format!(
            "classical MDS of {n} points needs 1 ≤ r ≤ {}, got r = {r}",
            n.saturating_sub(1)
        )));
    }
    if n > max_rows {
        return Err(MdsError::Param(format!(
            "{n} rows exceed the exact-computation limit of {max_rows}; \
             use the divide-and-conquer, interpolation or fast algorithms"
        )));
    }

    let q = double_center(delta);
    let eig = symmetric_eigen(&q)?;
    for (i, &value) in eig.eigenvalues[..r].iter().enumerate() {
        if value <= 0.0 {
            return Err(MdsError::degenerate(i, value));
        }
    }

    let spectrum = nontrivial_spectrum(&eig.eigenvalues);
    let (gof_g1, gof_g2) = goodness_of_fit(&spectrum, r)?;

    let roots: Vec<f64> = eig.eigenvalues[..r].iter().map(|v| v.sqrt()).collect();
    let points = Mat::from_fn(n, r, |i, j| eig.eigenvectors[(i, j)] * roots[j]);
    let eigenvalue_estimates = eig.eigenvalues[..r].iter().map(|v| v / n as f64).collect();

    Ok(MdsConfiguration {
        points,
        eigenvalue_estimates,
        gof_g1,
        gof_g2,
        degenerate_alignments: 0,
    })
}

/// Classical MDS on Euclidean distances between the rows of `data`.
pub fn classical_mds_from_data(data: &DataMatrix, r: usize) -> Result<MdsConfiguration> {
    if r == 0 || r + 1 > data.nrows() {
        return Err(MdsError::Param(format!(
            "classical MDS of {} points needs 1 ≤ r ≤ {}, got r = {r}",
            data.nrows(),
            data.nrows().saturating_sub(1)
        )));
    }
    let delta = euclidean_distance_matrix_with_limit(data, DEFAULT_EXACT_ROW_LIMIT)?;
    classical_mds(&delta, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::euclidean_distance_matrix;
    use crate::rng::{stream_rng, MdsRng, NormalSampler};

    fn gaussian_data(rows: usize, cols: usize, seed: u64) -> DataMatrix {
        let mut rng: MdsRng = stream_rng(seed, 0);
        let mut normal = NormalSampler::new();
        DataMatrix::from_fn(rows, cols, |_, _| normal.sample(&mut rng)).unwrap()
    }

    fn collinear() -> SquaredDistanceMatrix {
        euclidean_distance_matrix(&DataMatrix::from_rows(&[[0.0], [1.0], [3.0]]).unwrap()).unwrap()
    }

    #[test]
    fn collinear_points_recovered() {
        let cfg = classical_mds(&collinear(), 1).unwrap();
        let expected = [-4.0 / 3.0, -1.0 / 3.0, 5.0 / 3.0];
        let sign = cfg.points[(2, 0)].signum();
        for (i, e) in expected.iter().enumerate() {
            assert!((sign * cfg.points[(i, 0)] - e).abs() < 1e-12);
        }
        assert!((cfg.eigenvalue_estimates[0] - 14.0 / 9.0).abs() < 1e-12);
        assert_eq!(cfg.gof_g1, 1.0);
        assert_eq!(cfg.gof_g2, 1.0);
    }

    #[test]
    fn zero_distances_are_degenerate() {
        let delta = SquaredDistanceMatrix::new(Mat::zeros(3, 3)).unwrap();
        assert!(matches!(
            classical_mds(&delta, 1),
            Err(MdsError::DegenerateRank { index: 0, .. })
        ));
    }

    #[test]
    fn rank_beyond_data_dimension_is_degenerate() {
        let data = gaussian_data(20, 2, 3);
        let err = classical_mds_from_data(&data, 3).unwrap_err();
        assert!(matches!(err, MdsError::DegenerateRank { index: 2, .. }));
    }

    #[test]
    fn random_round_trip() {
        let data = gaussian_data(50, 5, 11);
        let delta = euclidean_distance_matrix(&data).unwrap();
        let cfg = classical_mds(&delta, 5).unwrap();
        let back = euclidean_distance_matrix(&DataMatrix::from_mat(&cfg.points).unwrap()).unwrap();
        for i in 0..50 {
            for j in 0..50 {
                assert!((back.get(i, j) - delta.get(i, j)).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn centered_orthogonal_data_is_its_own_configuration() {
        // Columns: centred, mutually orthogonal, variances 8 > 2.
        let data =
            DataMatrix::from_rows(&[[2.0, 1.0], [2.0, -1.0], [-2.0, 1.0], [-2.0, -1.0], [4.0, 0.0], [-4.0, 0.0]])
                .unwrap();
        let cfg = classical_mds_from_data(&data, 2).unwrap();
        for j in 0..2 {
            let dot: f64 = (0..6).map(|i| cfg.points[(i, j)] * data.get(i, j)).sum();
            let sign = dot.signum();
            for i in 0..6 {
                assert!((sign * cfg.points[(i, j)] - data.get(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn single_row_rejected() {
        let data = DataMatrix::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(matches!(
            classical_mds_from_data(&data, 1),
            Err(MdsError::Param(_))
        ));
    }

    #[test]
    fn two_points_only_one_dimension() {
        let data = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        assert!(classical_mds_from_data(&data, 1).is_ok());
        assert!(matches!(
            classical_mds_from_data(&data, 2),
            Err(MdsError::Param(_))
        ));
    }

    #[test]
    fn from_data_is_bitwise_composition() {
        let data = gaussian_data(100, 10, 5);
        let a = classical_mds_from_data(&data, 3).unwrap();
        let b = classical_mds(&euclidean_distance_matrix(&data).unwrap(), 3).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.eigenvalue_estimates, b.eigenvalue_estimates);
        assert_eq!(a.gof_g1.to_bits(), b.gof_g1.to_bits());
    }

    #[test]
    fn nested_dimensions_bitwise() {
        let data = gaussian_data(60, 6, 6);
        let delta = euclidean_distance_matrix(&data).unwrap();
        let small = classical_mds(&delta, 2).unwrap();
        let large = classical_mds(&delta, 5).unwrap();
        for i in 0..60 {
            for j in 0..2 {
                assert_eq!(small.points[(i, j)].to_bits(), large.points[(i, j)].to_bits());
            }
        }
    }

    #[test]
    fn column_variance_is_eigenvalue_over_n() {
        let data = gaussian_data(80, 4, 7);
        let cfg = classical_mds_from_data(&data, 3).unwrap();
        let means = cfg.column_means();
        for j in 0..3 {
            let var: f64 = (0..80).map(|i| cfg.points[(i, j)].powi(2)).sum::<f64>() / 80.0;
            assert!((var - cfg.eigenvalue_estimates[j]).abs() <= 1e-9 * var);
            assert!(means[j].abs() <= 1e-9 * var.sqrt());
        }
    }

    #[test]
    fn gof_direct_formula() {
        let l = [4.0, 1.0, 0.0, -1.0];
        let (g1, g2) = goodness_of_fit(&l, 1).unwrap();
        assert!((g1 - 4.0 / 6.0).abs() < 1e-15);
        assert!((g2 - 0.8).abs() < 1e-15);
        let (g1, g2) = goodness_of_fit(&l, 2).unwrap();
        assert!((g1 - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(g2, 1.0);
    }

    #[test]
    fn gof_nonnegative_spectrum_equal() {
        let (g1, g2) = goodness_of_fit(&[5.0, 3.0, 0.5, 0.0], 2).unwrap();
        assert_eq!(g1.to_bits(), g2.to_bits());
    }

    #[test]
    fn gof_all_zero_degenerate() {
        assert!(matches!(
            goodness_of_fit(&[0.0, 0.0], 1),
            Err(MdsError::DegenerateRank { .. })
        ));
    }

    #[test]
    fn breakdown_ordering() {
        let b = GofBreakdown::new(&[4.0, 1.0, 0.0, -1.0], 2);
        assert!(b.retained_sum <= b.positive_sum && b.positive_sum <= b.absolute_sum);
    }

    #[test]
    fn non_euclidean_input_has_g1_below_g2() {
        // Squared "distances" violating the triangle inequality.
        let m = Mat::from_fn(4, 4, |i, j| {
            if i == j {
                0.0
            } else if (i, j) == (0, 1) || (i, j) == (1, 0) {
                16.0
            } else {
                1.0
            }
        });
        let cfg = classical_mds(&SquaredDistanceMatrix::new(m).unwrap(), 1).unwrap();
        assert!(cfg.gof_g1 < cfg.gof_g2);
    }
}
