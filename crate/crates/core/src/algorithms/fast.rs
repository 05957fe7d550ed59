use std::collections::HashMap;

use faer::Mat;
use rayon::prelude::*;

use super::divide::{mean_estimates, weighted_mean};
use super::{recenter, scatter_rows, take_rows, Algorithm, AlgorithmParams};
use crate::classical::{classical_mds_from_data, MdsConfiguration};
use crate::error::Result;
use crate::matrix::DataMatrix;
use crate::plan::{plan_fast, FastNode, FastPlan};
use crate::procrustes::{apply_procrustes, fit_procrustes};

/// Fast MDS: recursive partitioning, classical MDS at the leaves, and at
/// each split an alignment configuration built from the children's sampled
/// rows onto which each child is rotated. With `n ≤ ℓ` this is exactly
/// classical MDS.
pub fn fast_mds(data: &DataMatrix, params: &AlgorithmParams) -> Result<MdsConfiguration> {
    params.validate(Algorithm::Fast)?;
    if data.nrows() <= params.l {
        return classical_mds_from_data(data, params.r);
    }
    let plan = plan_fast(data.nrows(), params.l, params.s, params.seed)?;
    fast_mds_with_plan(data, &plan, params.r)
}

pub fn fast_mds_with_plan(data: &DataMatrix, plan: &FastPlan, r: usize) -> Result<MdsConfiguration> {
    if let FastNode::Leaf { indices } = &plan.root {
        if indices.iter().copied().eq(0..data.nrows()) {
            return classical_mds_from_data(data, r);
        }
    }
    let solved = solve_node(&plan.root, data, r, "root")?;
    let order = plan.root.indices();
    let mut points = scatter_rows(data.nrows(), r, &[(&order, &solved.config.points)]);
    recenter(&mut points);
    Ok(MdsConfiguration { points, ..solved.config })
}

struct NodeSolution {
    /// Rows follow `node.indices()`.
    config: MdsConfiguration,
    size: usize,
}

fn solve_node(node: &FastNode, data: &DataMatrix, r: usize, path: &str) -> Result<NodeSolution> {
    match node {
        FastNode::Leaf { indices } => {
            let config = classical_mds_from_data(&data.select_rows(indices), r)
                .map_err(|e| e.in_block(format!("leaf {path}")))?;
            Ok(NodeSolution { config, size: indices.len() })
        }
        FastNode::Split { children, sampling } => {
            let solved: Vec<NodeSolution> = children
                .par_iter()
                .enumerate()
                .map(|(j, child)| solve_node(child, data, r, &format!("{path}.{}", j + 1)))
                .collect::<Result<_>>()?;

            let alignment_rows: Vec<usize> = sampling.iter().flatten().copied().collect();
            let alignment = classical_mds_from_data(&data.select_rows(&alignment_rows), r)
                .map_err(|e| e.in_block(format!("alignment set {path}")))?;

            let mut degenerate = alignment.degenerate_alignments;
            let mut offset = 0;
            let mut pieces = Vec::with_capacity(children.len());
            for ((child, part), sampled) in children.iter().zip(&solved).zip(sampling) {
                let position: HashMap<usize, usize> =
                    child.indices().into_iter().enumerate().map(|(p, g)| (g, p)).collect();
                let target = take_rows(&alignment.points, offset..offset + sampled.len());
                let source = take_rows(&part.config.points, sampled.iter().map(|g| position[g]));
                offset += sampled.len();
                let fit = fit_procrustes(&target, &source)?;
                degenerate += part.config.degenerate_alignments + usize::from(fit.rank_deficient);
                pieces.push(apply_procrustes(&part.config.points, &fit)?);
            }

            let size: usize = solved.iter().map(|s| s.size).sum();
            let points = stack(&pieces, r);
            let weights: Vec<f64> = solved.iter().map(|s| s.size as f64).collect();
            let configs: Vec<MdsConfiguration> = solved.into_iter().map(|s| s.config).collect();
            let config = MdsConfiguration {
                points,
                eigenvalue_estimates: mean_estimates(&configs, r),
                gof_g1: weighted_mean(configs.iter().map(|c| c.gof_g1), &weights),
                gof_g2: weighted_mean(configs.iter().map(|c| c.gof_g2), &weights),
                degenerate_alignments: degenerate,
            };
            Ok(NodeSolution { config, size })
        }
    }
}

fn stack(pieces: &[Mat<f64>], r: usize) -> Mat<f64> {
    let total = pieces.iter().map(Mat::nrows).sum();
    let mut out = Mat::<f64>::zeros(total, r);
    let mut row = 0;
    for piece in pieces {
        for i in 0..piece.nrows() {
            for j in 0..r {
                out[(row + i, j)] = piece[(i, j)];
            }
        }
        row += piece.nrows();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, NormalSampler};

    fn gaussian(n: usize, k: usize, seed: u64) -> DataMatrix {
        let mut rng = stream_rng(seed, 0);
        let mut normal = NormalSampler::new();
        DataMatrix::from_fn(n, k, |_, _| normal.sample(&mut rng)).unwrap()
    }

    #[test]
    fn small_input_is_classical_bitwise() {
        let data = gaussian(120, 4, 1);
        let params = Algorithm::Fast.default_params(2, 3);
        let a = fast_mds(&data, &params).unwrap();
        let b = classical_mds_from_data(&data, 2).unwrap();
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn exact_when_rank_matches() {
        // Data of rank r: every block recovers it exactly, so the merged
        // result is a rigid motion of the truth.
        let data = gaussian(1500, 3, 2);
        let params = AlgorithmParams { l: 60, c: 6, s: 6, r: 3, seed: 8 };
        let plan = plan_fast(1500, 60, 6, 8).unwrap();
        assert!(plan.root.depth() >= 2);
        let cfg = fast_mds(&data, &params).unwrap();
        let exact = classical_mds_from_data(&data, 3).unwrap();
        let fit = fit_procrustes(&exact.points, &cfg.points).unwrap();
        assert!(fit.loss / crate::matrix::frobenius(&exact.points).powi(2) < 1e-18);
        for m in cfg.column_means() {
            assert!(m.abs() < 1e-9);
        }
    }

    #[test]
    fn stack_concatenates() {
        let a = Mat::from_fn(2, 1, |i, _| i as f64);
        let b = Mat::from_fn(1, 1, |_, _| 9.0);
        let s = stack(&[a, b], 1);
        assert_eq!((s[(0, 0)], s[(1, 0)], s[(2, 0)]), (0.0, 1.0, 9.0));
    }
}
