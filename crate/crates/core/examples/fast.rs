//! Fast MDS: recursive partitioning with alignment sets built from s
//! sampled rows per child.
//!
//! cargo run --release --example fast -- [n]

use bigmds::algorithms::{fast_mds_with_plan, Algorithm};
use bigmds::plan::plan_fast;
use bigmds::sim::{aligned_correlations, generate_scenario, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(100_000);
    let r = 2;
    let params = Algorithm::Fast.default_params(r, 4);
    let data = generate_scenario(&ScenarioSpec::new(n, 10, r, 1, 8), 0)?;

    let plan = plan_fast(n, params.l, params.s, params.seed)?;
    let stats = plan.stats();
    println!(
        "{} leaves, mean size {:.2}, depth {}",
        stats.leaf_count, stats.mean_leaf_size, stats.depth
    );
    let config = fast_mds_with_plan(&data, &plan, r)?;
    let corr = aligned_correlations(&config.points, &data.leading_columns(r)?.to_mat())?;
    println!("correlation with dominant columns {corr:.5?}");
    println!("G1 {:.4}, eigenvalue estimates {:.3?}", config.gof_g1, config.eigenvalue_estimates);
    Ok(())
}
