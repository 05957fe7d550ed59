use rayon::prelude::*;

use super::{recenter, scatter_rows, take_rows, Algorithm, AlgorithmParams};
use crate::classical::{classical_mds_from_data, MdsConfiguration};
use crate::error::Result;
use crate::matrix::DataMatrix;
use crate::plan::{plan_divide_conquer, DcPlan};
use crate::procrustes::{apply_procrustes, fit_procrustes};

/// Divide-and-conquer MDS.
///
/// Every subset of the plan is embedded independently; subsets 2..p are
/// rotated onto subset 1 through the shared connecting points. With
/// `n ≤ ℓ` this is exactly classical MDS.
pub fn divide_and_conquer_mds(
    data: &DataMatrix,
    params: &AlgorithmParams,
) -> Result<MdsConfiguration> {
    params.validate(Algorithm::Divide)?;
    if data.nrows() <= params.l {
        return classical_mds_from_data(data, params.r);
    }
    let plan = plan_divide_conquer(data.nrows(), params.l, params.c, params.seed)?;
    divide_and_conquer_with_plan(data, &plan, params.r)
}

pub fn divide_and_conquer_with_plan(
    data: &DataMatrix,
    plan: &DcPlan,
    r: usize,
) -> Result<MdsConfiguration> {
    let n = data.nrows();
    let c = plan.connecting_indices.len();
    let partials: Vec<MdsConfiguration> = plan
        .subsets
        .par_iter()
        .enumerate()
        .map(|(j, subset)| {
            classical_mds_from_data(&data.select_rows(subset), r)
                .map_err(|e| e.in_block(format!("subset {}", j + 1)))
        })
        .collect::<Result<_>>()?;

    if partials.len() == 1 {
        return Ok(partials.into_iter().next().expect("one subset"));
    }

    let anchor = take_rows(&partials[0].points, 0..c);
    let mut aligned = Vec::with_capacity(partials.len() - 1);
    let mut degenerate = 0;
    for part in &partials[1..] {
        let fit = fit_procrustes(&anchor, &take_rows(&part.points, 0..c))?;
        degenerate += usize::from(fit.rank_deficient);
        let own = take_rows(&part.points, c..part.points.nrows());
        aligned.push(apply_procrustes(&own, &fit)?);
    }

    let mut blocks: Vec<(&[usize], &faer::Mat<f64>)> = vec![(&plan.subsets[0], &partials[0].points)];
    for (j, points) in aligned.iter().enumerate() {
        blocks.push((plan.own_rows(j + 1), points));
    }
    let mut points = scatter_rows(n, r, &blocks);
    recenter(&mut points);

    // Subset 1 contributes all of its rows, the others only their own.
    let weights: Vec<f64> = (0..plan.p())
        .map(|j| if j == 0 { plan.subsets[0].len() } else { plan.own_rows(j).len() } as f64)
        .collect();
    let gof_g1 = weighted_mean(partials.iter().map(|p| p.gof_g1), &weights);
    let gof_g2 = weighted_mean(partials.iter().map(|p| p.gof_g2), &weights);
    let eigenvalue_estimates = mean_estimates(&partials, r);

    Ok(MdsConfiguration {
        points,
        eigenvalue_estimates,
        gof_g1,
        gof_g2,
        degenerate_alignments: degenerate,
    })
}

pub(super) fn weighted_mean(values: impl Iterator<Item = f64>, weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    values.zip(weights).map(|(v, w)| v * w).sum::<f64>() / total
}

/// Unweighted mean over blocks of the per-block `λᵢ / n_block`.
pub(super) fn mean_estimates(parts: &[MdsConfiguration], r: usize) -> Vec<f64> {
    let p = parts.len() as f64;
    (0..r)
        .map(|i| parts.iter().map(|c| c.eigenvalue_estimates[i]).sum::<f64>() / p)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, NormalSampler};

    fn scenario(n: usize, k: usize, h: usize, seed: u64) -> DataMatrix {
        let mut rng = stream_rng(seed, 0);
        let mut normal = NormalSampler::new();
        let sd = 15f64.sqrt();
        DataMatrix::from_fn(n, k, |_, j| normal.sample(&mut rng) * if j < h { sd } else { 1.0 })
            .unwrap()
    }

    #[test]
    fn small_input_is_classical_bitwise() {
        let data = scenario(300, 4, 2, 1);
        let params = Algorithm::Divide.default_params(2, 9);
        let a = divide_and_conquer_mds(&data, &params).unwrap();
        let b = classical_mds_from_data(&data, 2).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.eigenvalue_estimates, b.eigenvalue_estimates);
    }

    #[test]
    fn output_is_centred_and_in_row_order() {
        let data = scenario(2500, 6, 3, 2);
        let params = AlgorithmParams { l: 300, c: 6, s: 6, r: 3, seed: 4 };
        let cfg = divide_and_conquer_mds(&data, &params).unwrap();
        assert_eq!((cfg.points.nrows(), cfg.points.ncols()), (2500, 3));
        for m in cfg.column_means() {
            assert!(m.abs() < 1e-9);
        }
        assert!(cfg.gof_g1 <= cfg.gof_g2 + 1e-15);
        assert_eq!(cfg.degenerate_alignments, 0);
    }

    #[test]
    fn weighted_mean_basic() {
        assert_eq!(weighted_mean([1.0, 3.0].into_iter(), &[1.0, 3.0]), 2.5);
    }
}
