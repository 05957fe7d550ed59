use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use rayon::prelude::*;

use super::{recenter, scatter_rows, Algorithm, AlgorithmParams};
use crate::classical::{classical_mds, classical_mds_from_data, column_means, MdsConfiguration};
use crate::error::{MdsError, Result};
use crate::matrix::{cross_squared_distances, double_center, euclidean_distance_matrix, DataMatrix};
use crate::plan::{plan_interpolation, InterpPlan};

/// Largest accepted condition number of the base configuration's covariance.
pub const MAX_COVARIANCE_CONDITION: f64 = 1e12;

/// Everything needed to place new rows against a fixed base configuration.
///
/// Holds the base rows, their `ℓ × r` configuration, the diagonal of the
/// base inner-product matrix, and `X₁ S₁⁻¹` precomputed by a Cholesky solve
/// (`S₁ = X₁ᵀX₁ / ℓ`).
#[derive(Clone, Debug)]
pub struct GowerContext {
    base_rows: DataMatrix,
    base_config: Mat<f64>,
    q_diagonal: Vec<f64>,
    projector: Mat<f64>,
    condition: f64,
}

impl GowerContext {
    pub fn new(base_rows: DataMatrix, base_config: Mat<f64>, q_diagonal: Vec<f64>) -> Result<Self> {
        let l = base_rows.nrows();
        let r = base_config.ncols();
        if base_config.nrows() != l || q_diagonal.len() != l {
            return Err(MdsError::Shape(format!(
                "base has {l} rows, configuration {} and diagonal {}",
                base_config.nrows(),
                q_diagonal.len()
            )));
        }
        if r == 0 || r >= l {
            return Err(MdsError::Param(format!("need 1 ≤ r < ℓ, got r = {r}, ℓ = {l}")));
        }
        let q_scale = q_diagonal.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if let Some(i) = q_diagonal.iter().position(|&v| v.is_nan() || v < -1e-9 * q_scale) {
            return Err(MdsError::InvalidInput(format!(
                "inner-product diagonal entry {i} is {:e}",
                q_diagonal[i]
            )));
        }
        let mean_norm = column_means(&base_config)
            .iter()
            .map(|m| m.abs())
            .fold(0.0, f64::max);
        let scale = crate::matrix::max_abs(&base_config).max(f64::MIN_POSITIVE);
        if mean_norm > 1e-8 * scale {
            return Err(MdsError::InvalidInput(
                "base configuration is not centred".into(),
            ));
        }

        let covariance = Mat::from_fn(r, r, |a, b| {
            (0..l).map(|i| base_config[(i, a)] * base_config[(i, b)]).sum::<f64>() / l as f64
        });
        let spectrum = covariance
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| MdsError::Numerical(format!("covariance eigenvalues: {e:?}")))?;
        let (low, high) = (spectrum[0], spectrum[r - 1]);
        let condition = if low > 0.0 { high / low } else { f64::INFINITY };
        if condition.is_nan() || condition > MAX_COVARIANCE_CONDITION {
            return Err(MdsError::Numerical(format!(
                "base covariance condition number {condition:e} exceeds {MAX_COVARIANCE_CONDITION:e}"
            )));
        }
        let llt = covariance
            .llt(Side::Lower)
            .map_err(|e| MdsError::Numerical(format!("covariance Cholesky: {e:?}")))?;
        let mut projector = base_config.clone();
        llt.rsolve_in_place(projector.as_mut());

        Ok(Self {
            base_rows,
            base_config,
            q_diagonal,
            projector,
            condition,
        })
    }

    /// Run classical MDS on `base_rows` and build a context from it.
    pub fn from_base(base_rows: DataMatrix, r: usize) -> Result<(Self, MdsConfiguration)> {
        let delta = euclidean_distance_matrix(&base_rows)?;
        let config = classical_mds(&delta, r)?;
        let q_diagonal = double_center(&delta).diagonal();
        let ctx = Self::new(base_rows, config.points.clone(), q_diagonal)?;
        Ok((ctx, config))
    }

    pub fn base_len(&self) -> usize {
        self.base_rows.nrows()
    }

    pub fn dimension(&self) -> usize {
        self.base_config.ncols()
    }

    pub fn base_config(&self) -> &Mat<f64> {
        &self.base_config
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }
}

/// Place `new_rows` in the base configuration's coordinates:
/// `(1/2ℓ) (1 qᵀ − A²) X₁ S₁⁻¹`, where `A²` holds squared distances from the
/// new rows to the base rows and `q` is the base inner-product diagonal.
pub fn gower_interpolate(ctx: &GowerContext, new_rows: &DataMatrix) -> Result<Mat<f64>> {
    let sq = cross_squared_distances(new_rows, &ctx.base_rows)?;
    let l = ctx.base_len();
    let scale = 1.0 / (2.0 * l as f64);
    let gap = Mat::from_fn(sq.nrows(), l, |i, j| (ctx.q_diagonal[j] - sq[(i, j)]) * scale);
    Ok(gap * &ctx.projector)
}

/// Interpolation MDS: classical MDS on one subset, Gower interpolation for
/// the others. With `n ≤ ℓ` this is exactly classical MDS.
pub fn interpolation_mds(data: &DataMatrix, params: &AlgorithmParams) -> Result<MdsConfiguration> {
    params.validate(Algorithm::Interpolate)?;
    if data.nrows() <= params.l {
        return classical_mds_from_data(data, params.r);
    }
    let plan = plan_interpolation(data.nrows(), params.l, params.seed)?;
    interpolation_with_plan(data, &plan, params.r)
}

pub fn interpolation_with_plan(
    data: &DataMatrix,
    plan: &InterpPlan,
    r: usize,
) -> Result<MdsConfiguration> {
    let (ctx, base) = GowerContext::from_base(data.select_rows(&plan.subsets[0]), r)
        .map_err(|e| e.in_block("subset 1"))?;
    if plan.subsets.len() == 1 {
        return Ok(base);
    }
    let placed: Vec<Mat<f64>> = plan.subsets[1..]
        .par_iter()
        .map(|subset| gower_interpolate(&ctx, &data.select_rows(subset)))
        .collect::<Result<_>>()?;

    let mut blocks: Vec<(&[usize], &Mat<f64>)> = vec![(&plan.subsets[0], &base.points)];
    blocks.extend(plan.subsets[1..].iter().map(Vec::as_slice).zip(placed.iter()));
    let mut points = scatter_rows(data.nrows(), r, &blocks);
    recenter(&mut points);

    Ok(MdsConfiguration {
        points,
        eigenvalue_estimates: base.eigenvalue_estimates,
        gof_g1: base.gof_g1,
        gof_g2: base.gof_g2,
        degenerate_alignments: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::max_abs;
    use crate::rng::{stream_rng, NormalSampler};

    fn gaussian(n: usize, k: usize, seed: u64) -> DataMatrix {
        let mut rng = stream_rng(seed, 0);
        let mut normal = NormalSampler::new();
        DataMatrix::from_fn(n, k, |_, _| normal.sample(&mut rng)).unwrap()
    }

    #[test]
    fn base_rows_reproduce_base_configuration() {
        let base = gaussian(200, 10, 1);
        let (ctx, cfg) = GowerContext::from_base(base.clone(), 5).unwrap();
        let again = gower_interpolate(&ctx, &base).unwrap();
        let err = max_abs(&(&again - &cfg.points)) / max_abs(&cfg.points);
        assert!(err < 1e-8, "relative error {err}");
    }

    #[test]
    fn single_base_row_and_centroid() {
        let base = gaussian(200, 10, 6);
        let (ctx, cfg) = GowerContext::from_base(base.clone(), 5).unwrap();
        let one = gower_interpolate(&ctx, &base.select_rows(&[17])).unwrap();
        for j in 0..5 {
            assert!((one[(0, j)] - cfg.points[(17, j)]).abs() < 1e-8);
        }
        let centroid: Vec<f64> = (0..10).map(|j| base.column(j).iter().sum::<f64>() / 200.0).collect();
        let at_centre = gower_interpolate(&ctx, &DataMatrix::from_rows(&[centroid]).unwrap()).unwrap();
        let norm = (0..5).map(|j| at_centre[(0, j)].powi(2)).sum::<f64>().sqrt();
        assert!(norm <= 1e-6 * max_abs(&cfg.points), "{norm}");
    }

    #[test]
    fn small_input_is_classical_bitwise() {
        let data = gaussian(90, 4, 7);
        let params = Algorithm::Interpolate.default_params(2, 1);
        let a = interpolation_mds(&data, &params).unwrap();
        let b = classical_mds_from_data(&data, 2).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.eigenvalue_estimates, b.eigenvalue_estimates);
    }

    #[test]
    fn full_rank_base_interpolates_exactly() {
        // With r = k every row lies in the base span, so positions are exact
        // up to the rigid motion fixed by the base configuration.
        let data = gaussian(600, 3, 2);
        let params = AlgorithmParams { l: 150, c: 6, s: 6, r: 3, seed: 5 };
        let cfg = interpolation_mds(&data, &params).unwrap();
        let exact = classical_mds_from_data(&data, 3).unwrap();
        let fit = crate::procrustes::fit_procrustes(&exact.points, &cfg.points).unwrap();
        assert!(fit.loss / crate::matrix::frobenius(&exact.points).powi(2) < 1e-20);
    }

    #[test]
    fn degenerate_base_is_numerical_error() {
        let base = gaussian(50, 2, 3);
        let mut config = Mat::<f64>::zeros(50, 2);
        for i in 0..50 {
            config[(i, 0)] = i as f64 - 24.5;
        }
        let err = GowerContext::new(base, config, vec![0.0; 50]).unwrap_err();
        assert!(matches!(err, MdsError::Numerical(_)));
    }

    #[test]
    fn column_mismatch_is_shape_error() {
        let (ctx, _) = GowerContext::from_base(gaussian(40, 4, 4), 2).unwrap();
        assert!(matches!(
            gower_interpolate(&ctx, &gaussian(3, 5, 5)),
            Err(MdsError::Shape(_))
        ));
    }
}
