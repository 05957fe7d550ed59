//! Index partitions driving the three large-scale algorithms.
//!
//! Plans are built once, single-threaded, from a seed; they are plain data
//! and serialise to JSON for auditing. All index lists refer to rows of the
//! original data matrix.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{MdsError, Result};
use crate::rng::{permutation, sample_without_replacement, stream_rng};

const DIVIDE_STREAM: u64 = 1;
const INTERPOLATION_STREAM: u64 = 2;
const FAST_STREAM: u64 = 3;

/// Divide-and-conquer partition. Every subset lists the connecting indices
/// first, followed by its own rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DcPlan {
    pub n: usize,
    pub l: usize,
    pub c: usize,
    pub seed: u64,
    pub connecting_indices: Vec<usize>,
    pub subsets: Vec<Vec<usize>>,
}

impl DcPlan {
    pub fn p(&self) -> usize {
        self.subsets.len()
    }

    /// Rows of subset `j` that are not connecting points.
    pub fn own_rows(&self, j: usize) -> &[usize] {
        &self.subsets[j][self.connecting_indices.len()..]
    }
}

/// `⌈1 + (n − ℓ)/(ℓ − c)⌉`, or 1 when `n ≤ ℓ`.
pub fn divide_conquer_subset_count(n: usize, l: usize, c: usize) -> usize {
    if n <= l {
        1
    } else {
        1 + (n - l).div_ceil(l - c)
    }
}

pub fn plan_divide_conquer(n: usize, l: usize, c: usize, seed: u64) -> Result<DcPlan> {
    if n == 0 {
        return Err(MdsError::Param("cannot partition zero rows".into()));
    }
    if c == 0 {
        return Err(MdsError::Param("need at least one connecting point".into()));
    }
    if l <= c {
        return Err(MdsError::Param(format!(
            "partition size ℓ = {l} must exceed the connecting-point count c = {c}"
        )));
    }
    if n <= l {
        return Ok(DcPlan {
            n,
            l,
            c,
            seed,
            connecting_indices: Vec::new(),
            subsets: vec![(0..n).collect()],
        });
    }

    let mut rng = stream_rng(seed, DIVIDE_STREAM);
    let order = permutation(n, &mut rng);
    let (connecting, rest) = order.split_at(c);
    let mut chunks: Vec<&[usize]> = rest.chunks(l - c).collect();
    // A trailing block too small to align or embed is folded into its predecessor.
    let merged_tail = match chunks.last() {
        Some(tail) if chunks.len() > 1 && tail.len() < c + 1 => chunks.pop(),
        _ => None,
    };

    let mut subsets: Vec<Vec<usize>> = chunks
        .iter()
        .map(|own| connecting.iter().chain(own.iter()).copied().collect())
        .collect();
    if let (Some(tail), Some(last)) = (merged_tail, subsets.last_mut()) {
        last.extend_from_slice(tail);
    }

    Ok(DcPlan {
        n,
        l,
        c,
        seed,
        connecting_indices: connecting.to_vec(),
        subsets,
    })
}

/// Interpolation partition: the first subset is the sample that gets
/// classical MDS, the rest are interpolated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpPlan {
    pub n: usize,
    pub l: usize,
    pub seed: u64,
    pub subsets: Vec<Vec<usize>>,
}

impl InterpPlan {
    pub fn p(&self) -> usize {
        self.subsets.len()
    }
}

pub fn plan_interpolation(n: usize, l: usize, seed: u64) -> Result<InterpPlan> {
    if n == 0 {
        return Err(MdsError::Param("cannot partition zero rows".into()));
    }
    if l < 2 {
        return Err(MdsError::Param(format!("partition size ℓ = {l} must be at least 2")));
    }
    let subsets = if n <= l {
        vec![(0..n).collect()]
    } else {
        let mut rng = stream_rng(seed, INTERPOLATION_STREAM);
        permutation(n, &mut rng)
            .chunks(l)
            .map(<[usize]>::to_vec)
            .collect()
    };
    Ok(InterpPlan { n, l, seed, subsets })
}

/// One node of the fast-MDS recursion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FastNode {
    Leaf {
        indices: Vec<usize>,
    },
    Split {
        children: Vec<FastNode>,
        /// `sampling[j]` are the rows of child `j` that join the alignment set.
        sampling: Vec<Vec<usize>>,
    },
}

impl FastNode {
    pub fn len(&self) -> usize {
        match self {
            FastNode::Leaf { indices } => indices.len(),
            FastNode::Split { children, .. } => children.iter().map(FastNode::len).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row indices in output order (leaves left to right).
    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        self.collect_indices(&mut out);
        out
    }

    fn collect_indices(&self, out: &mut Vec<usize>) {
        match self {
            FastNode::Leaf { indices } => out.extend_from_slice(indices),
            FastNode::Split { children, .. } => {
                for child in children {
                    child.collect_indices(out);
                }
            }
        }
    }

    pub fn leaves(&self) -> Vec<&[usize]> {
        match self {
            FastNode::Leaf { indices } => vec![indices.as_slice()],
            FastNode::Split { children, .. } => children.iter().flat_map(FastNode::leaves).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FastNode::Leaf { .. } => 0,
            FastNode::Split { children, .. } => {
                1 + children.iter().map(FastNode::depth).max().unwrap_or(0)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FastPlan {
    pub n: usize,
    pub l: usize,
    pub s: usize,
    pub seed: u64,
    pub root: FastNode,
}

impl FastPlan {
    pub fn stats(&self) -> FastStats {
        let leaf_count = self.root.leaves().len();
        FastStats {
            leaf_count,
            mean_leaf_size: self.n as f64 / leaf_count as f64,
            depth: self.root.depth(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FastStats {
    pub leaf_count: usize,
    pub mean_leaf_size: f64,
    pub depth: usize,
}

fn check_fast_params(n: usize, l: usize, s: usize) -> Result<()> {
    if n == 0 {
        return Err(MdsError::Param("cannot partition zero rows".into()));
    }
    if s == 0 {
        return Err(MdsError::Param("need at least one sampling point".into()));
    }
    if l < 2 * s {
        return Err(MdsError::Param(format!(
            "partition size ℓ = {l} must be at least 2s = {}",
            2 * s
        )));
    }
    Ok(())
}

/// Sizes of the `p` children of a node with `n` rows: the first `n mod p`
/// get `⌈n/p⌉`, the rest `⌊n/p⌋`.
fn child_sizes(n: usize, p: usize) -> impl Iterator<Item = usize> {
    let (q, extra) = (n / p, n % p);
    (0..p).map(move |j| q + usize::from(j < extra))
}

pub fn plan_fast(n: usize, l: usize, s: usize, seed: u64) -> Result<FastPlan> {
    check_fast_params(n, l, s)?;
    let root = if n <= l {
        FastNode::Leaf {
            indices: (0..n).collect(),
        }
    } else {
        let mut rng = stream_rng(seed, FAST_STREAM);
        let order = permutation(n, &mut rng);
        split_fast(&order, l, s, &mut rng)
    };
    Ok(FastPlan { n, l, s, seed, root })
}

fn split_fast(indices: &[usize], l: usize, s: usize, rng: &mut crate::rng::MdsRng) -> FastNode {
    if indices.len() <= l {
        return FastNode::Leaf {
            indices: indices.to_vec(),
        };
    }
    let p = l / s;
    let mut children = Vec::with_capacity(p);
    let mut sampling = Vec::with_capacity(p);
    let mut start = 0;
    for size in child_sizes(indices.len(), p) {
        let chunk = &indices[start..start + size];
        start += size;
        sampling.push(sample_without_replacement(chunk, s, rng));
        children.push(split_fast(chunk, l, s, rng));
    }
    FastNode::Split { children, sampling }
}

/// Recursion statistics of fast MDS, computed from sizes alone.
pub fn fast_stats(n: usize, l: usize, s: usize) -> Result<FastStats> {
    check_fast_params(n, l, s)?;
    let p = l / s;
    let mut memo: HashMap<usize, (usize, usize)> = HashMap::new();
    let (leaf_count, depth) = subtree_stats(n, l, p, &mut memo);
    Ok(FastStats {
        leaf_count,
        mean_leaf_size: n as f64 / leaf_count as f64,
        depth,
    })
}

fn subtree_stats(
    n: usize,
    l: usize,
    p: usize,
    memo: &mut HashMap<usize, (usize, usize)>,
) -> (usize, usize) {
    if n <= l {
        return (1, 0);
    }
    if let Some(&hit) = memo.get(&n) {
        return hit;
    }
    let mut leaves = 0;
    let mut depth = 0;
    for size in child_sizes(n, p) {
        let (cl, cd) = subtree_stats(size, l, p, memo);
        leaves += cl;
        depth = depth.max(cd + 1);
    }
    memo.insert(n, (leaves, depth));
    (leaves, depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_exact_cover(n: usize, lists: impl IntoIterator<Item = usize>) {
        let mut seen = vec![0u32; n];
        for i in lists {
            seen[i] += 1;
        }
        assert!(seen.iter().all(|&c| c == 1), "indices not covered exactly once");
    }

    #[test]
    fn divide_subset_count_formula() {
        assert_eq!(divide_conquer_subset_count(1000, 400, 20), 3);
        let plan = plan_divide_conquer(1000, 400, 20, 1).unwrap();
        assert_eq!(plan.p(), 3);
        assert_eq!(plan.subsets[0].len(), 400);
        assert_eq!(plan.subsets[2].len(), 20 + 220);
    }

    #[test]
    fn divide_small_n_passthrough() {
        let plan = plan_divide_conquer(300, 400, 20, 1).unwrap();
        assert_eq!(plan.p(), 1);
        assert_eq!(plan.subsets[0], (0..300).collect::<Vec<_>>());
    }

    #[test]
    fn divide_million_row_audit() {
        let (n, c) = (1_000_000, 20);
        let plan = plan_divide_conquer(n, 400, c, 99).unwrap();
        assert_eq!(plan.p(), divide_conquer_subset_count(n, 400, c));
        for subset in &plan.subsets {
            assert_eq!(&subset[..c], plan.connecting_indices.as_slice());
        }
        let all = plan
            .connecting_indices
            .iter()
            .copied()
            .chain((0..plan.p()).flat_map(|j| plan.own_rows(j).iter().copied()));
        assert_exact_cover(n, all);
    }

    #[test]
    fn divide_small_tail_is_merged() {
        // 781 − 20 = 761 = 2·380 + 1, so the one-row tail joins subset 2.
        let plan = plan_divide_conquer(781, 400, 20, 3).unwrap();
        assert_eq!(plan.p(), 2);
        assert_eq!(plan.subsets[1].len(), 20 + 381);
        let all = plan
            .connecting_indices
            .iter()
            .copied()
            .chain((0..plan.p()).flat_map(|j| plan.own_rows(j).iter().copied()));
        assert_exact_cover(781, all);
    }

    #[test]
    fn divide_rejects_bad_params() {
        assert!(matches!(plan_divide_conquer(100, 20, 20, 0), Err(MdsError::Param(_))));
        assert!(matches!(plan_divide_conquer(100, 20, 0, 0), Err(MdsError::Param(_))));
        assert!(matches!(plan_divide_conquer(0, 20, 2, 0), Err(MdsError::Param(_))));
    }

    #[test]
    fn interpolation_sizes() {
        let plan = plan_interpolation(10, 4, 5).unwrap();
        let sizes: Vec<usize> = plan.subsets.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 4, 2]);
        assert_eq!(plan_interpolation(4, 10, 5).unwrap().p(), 1);
    }

    #[test]
    fn interpolation_audit() {
        let plan = plan_interpolation(100_000, 1000, 8).unwrap();
        assert_eq!(plan.p(), 100);
        assert_exact_cover(100_000, plan.subsets.iter().flatten().copied());
    }

    #[test]
    fn fast_single_leaf() {
        let plan = plan_fast(500, 1000, 20, 0).unwrap();
        assert!(matches!(plan.root, FastNode::Leaf { .. }));
        assert_eq!(fast_stats(500, 1000, 20).unwrap().leaf_count, 1);
    }

    #[test]
    fn fast_stats_reported_partitions() {
        let a = fast_stats(1_000_000, 800, 20).unwrap();
        assert_eq!(a.leaf_count, 1600);
        assert_eq!(a.mean_leaf_size, 625.0);
        assert_eq!(a.depth, 2);
        let b = fast_stats(1_000_000, 700, 20).unwrap();
        assert_eq!(b.leaf_count, 42_875);
        assert!((b.mean_leaf_size - 23.32).abs() <= 0.01);
        assert_eq!(b.depth, 3);
    }

    #[test]
    fn fast_plan_matches_stats_and_structure() {
        let (n, l, s) = (200_000, 700, 20);
        let plan = plan_fast(n, l, s, 4).unwrap();
        assert_eq!(plan.stats(), fast_stats(n, l, s).unwrap());
        assert_exact_cover(n, plan.root.indices());
        fn check(node: &FastNode, l: usize, s: usize) {
            match node {
                FastNode::Leaf { indices } => assert!(indices.len() <= l),
                FastNode::Split { children, sampling } => {
                    assert_eq!(children.len(), l / s);
                    for (child, picks) in children.iter().zip(sampling) {
                        let members = child.indices();
                        assert_eq!(picks.len(), s.min(members.len()));
                        assert!(picks.iter().all(|i| members.contains(i)));
                        check(child, l, s);
                    }
                }
            }
        }
        check(&plan.root, l, s);
    }

    #[test]
    fn fast_rejects_small_l() {
        assert!(matches!(plan_fast(100, 39, 20, 0), Err(MdsError::Param(_))));
        assert!(matches!(fast_stats(100, 10, 0), Err(MdsError::Param(_))));
    }

    #[test]
    fn plans_are_seed_deterministic() {
        assert_eq!(plan_fast(5000, 100, 10, 7).unwrap(), plan_fast(5000, 100, 10, 7).unwrap());
        assert_ne!(plan_fast(5000, 100, 10, 7).unwrap(), plan_fast(5000, 100, 10, 8).unwrap());
        assert_eq!(
            plan_divide_conquer(5000, 400, 10, 7).unwrap(),
            plan_divide_conquer(5000, 400, 10, 7).unwrap()
        );
    }

    #[test]
    fn plan_json_round_trip() {
        let plan = plan_fast(3000, 100, 10, 2).unwrap();
        let json = serde_json::to_string(&plan).unwrap();
        let back: FastPlan = serde_json::from_str(&json).unwrap();
        assert_eq!(plan, back);
    }
}
