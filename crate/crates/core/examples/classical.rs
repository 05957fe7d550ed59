//! Classical MDS on a small data set: recover three collinear points, then
//! check that a 5-dimensional Gaussian cloud is reproduced up to rotation.
//!
//! cargo run --example classical

use bigmds::classical::{classical_mds, classical_mds_from_data};
use bigmds::matrix::{euclidean_distance_matrix, DataMatrix};
use bigmds::rng::{stream_rng, NormalSampler};

fn main() -> bigmds::Result<()> {
    let line = DataMatrix::from_rows(&[[0.0], [1.0], [3.0]])?;
    let delta = euclidean_distance_matrix(&line)?;
    let config = classical_mds(&delta, 1)?;
    println!("collinear points -> {:?}", config.points.col(0).iter().collect::<Vec<_>>());
    println!("eigenvalue estimate {:.6}, G1 {}, G2 {}", config.eigenvalue_estimates[0], config.gof_g1, config.gof_g2);

    let mut rng = stream_rng(1, 0);
    let mut normal = NormalSampler::new();
    let cloud = DataMatrix::from_fn(200, 5, |_, _| normal.sample(&mut rng))?;
    let config = classical_mds_from_data(&cloud, 5)?;
    let reconstructed = DataMatrix::from_mat(&config.points)?;
    let before = euclidean_distance_matrix(&cloud)?;
    let after = euclidean_distance_matrix(&reconstructed)?;
    let mut worst: f64 = 0.0;
    for i in 0..before.dim() {
        for j in 0..before.dim() {
            worst = worst.max((before.get(i, j) - after.get(i, j)).abs());
        }
    }
    println!("200 points in 5-D: worst squared-distance error {worst:.2e}");
    println!("per-dimension variance estimates {:.3?}", config.eigenvalue_estimates);
    Ok(())
}
