//! The scalable MDS algorithms.
//!
//! Each one partitions the rows, runs classical MDS on pieces no larger
//! than `ℓ` (plus a little overlap), and stitches the pieces together.
//! Subset tasks run on the current rayon pool; results are merged in plan
//! order, so output does not depend on the number of worker threads.

mod divide;
mod fast;
mod interpolation;

pub use divide::{divide_and_conquer_mds, divide_and_conquer_with_plan};
pub use fast::{fast_mds, fast_mds_with_plan};
pub use interpolation::{
    gower_interpolate, interpolation_mds, interpolation_with_plan, GowerContext,
    MAX_COVARIANCE_CONDITION,
};

use std::fmt;
use std::str::FromStr;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::classical::{classical_mds_from_data, MdsConfiguration};
use crate::error::{MdsError, Result};
use crate::matrix::DataMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Classical,
    Divide,
    Interpolate,
    Fast,
}

impl Algorithm {
    pub const SCALABLE: [Algorithm; 3] = [Algorithm::Divide, Algorithm::Interpolate, Algorithm::Fast];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Classical => "classical",
            Algorithm::Divide => "divide",
            Algorithm::Interpolate => "interpolate",
            Algorithm::Fast => "fast",
        }
    }

    /// ℓ = 400 for divide-and-conquer, 1000 otherwise.
    pub fn default_partition_size(self) -> usize {
        match self {
            Algorithm::Divide => 400,
            _ => 1000,
        }
    }

    /// Defaults with `c = s = 2r`.
    pub fn default_params(self, r: usize, seed: u64) -> AlgorithmParams {
        AlgorithmParams {
            l: self.default_partition_size(),
            c: 2 * r,
            s: 2 * r,
            r,
            seed,
        }
    }

    pub fn run(self, data: &DataMatrix, params: &AlgorithmParams) -> Result<MdsConfiguration> {
        match self {
            Algorithm::Classical => classical_mds_from_data(data, params.r),
            Algorithm::Divide => divide_and_conquer_mds(data, params),
            Algorithm::Interpolate => interpolation_mds(data, params),
            Algorithm::Fast => fast_mds(data, params),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = MdsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Algorithm::Classical),
            "divide" => Ok(Algorithm::Divide),
            "interpolate" => Ok(Algorithm::Interpolate),
            "fast" => Ok(Algorithm::Fast),
            other => Err(MdsError::Param(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Tuning knobs shared by the algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    /// Partition size ℓ.
    pub l: usize,
    /// Connecting points (divide-and-conquer).
    pub c: usize,
    /// Sampling points per subset (fast MDS).
    pub s: usize,
    /// Target dimension.
    pub r: usize,
    pub seed: u64,
}

impl AlgorithmParams {
    pub fn validate(&self, algorithm: Algorithm) -> Result<()> {
        let bad = |msg: String| Err(MdsError::Param(msg));
        if self.r == 0 {
            return bad("target dimension r must be at least 1".into());
        }
        match algorithm {
            Algorithm::Classical => Ok(()),
            Algorithm::Divide => {
                if self.c < self.r {
                    bad(format!("c = {} must be at least r = {}", self.c, self.r))
                } else if self.l <= self.c {
                    bad(format!("ℓ = {} must exceed c = {}", self.l, self.c))
                } else {
                    Ok(())
                }
            }
            Algorithm::Interpolate => {
                if self.l <= self.r {
                    bad(format!("ℓ = {} must exceed r = {}", self.l, self.r))
                } else {
                    Ok(())
                }
            }
            Algorithm::Fast => {
                if self.s < self.r {
                    bad(format!("s = {} must be at least r = {}", self.s, self.r))
                } else if self.l < 2 * self.s {
                    bad(format!("ℓ = {} must be at least 2s = {}", self.l, 2 * self.s))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Build the `n × r` output from blocks of rows with known original indices.
pub(crate) fn scatter_rows(n: usize, r: usize, blocks: &[(&[usize], &Mat<f64>)]) -> Mat<f64> {
    let mut out = Mat::<f64>::zeros(n, r);
    for (indices, points) in blocks {
        debug_assert_eq!(indices.len(), points.nrows());
        for (row, &target) in indices.iter().enumerate() {
            for j in 0..r {
                out[(target, j)] = points[(row, j)];
            }
        }
    }
    out
}

/// Subtract column means in place.
pub(crate) fn recenter(points: &mut Mat<f64>) {
    let means = crate::classical::column_means(points);
    for (j, mean) in means.into_iter().enumerate() {
        for i in 0..points.nrows() {
            points[(i, j)] -= mean;
        }
    }
}

/// Copy out selected rows of a configuration.
pub(crate) fn take_rows(points: &Mat<f64>, rows: impl ExactSizeIterator<Item = usize>) -> Mat<f64> {
    let rows: Vec<usize> = rows.collect();
    Mat::from_fn(rows.len(), points.ncols(), |i, j| points[(rows[i], j)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_follow_two_r_rule() {
        let p = Algorithm::Divide.default_params(5, 1);
        assert_eq!((p.l, p.c, p.s), (400, 10, 10));
        assert_eq!(Algorithm::Fast.default_params(2, 1).l, 1000);
    }

    #[test]
    fn validation() {
        let mut p = Algorithm::Divide.default_params(5, 0);
        assert!(p.validate(Algorithm::Divide).is_ok());
        p.c = 4;
        assert!(matches!(p.validate(Algorithm::Divide), Err(MdsError::Param(_))));
        let mut f = Algorithm::Fast.default_params(5, 0);
        f.l = 15;
        assert!(matches!(f.validate(Algorithm::Fast), Err(MdsError::Param(_))));
        let mut z = f;
        z.r = 0;
        assert!(z.validate(Algorithm::Classical).is_err());
    }

    #[test]
    fn names_round_trip() {
        for a in [Algorithm::Classical, Algorithm::Divide, Algorithm::Interpolate, Algorithm::Fast] {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("smacof".parse::<Algorithm>().is_err());
    }
}
