//! Smallest dimension reaching 80% goodness of fit, for each algorithm.
//!
//! cargo run --release --example gof_sweep

use bigmds::algorithms::Algorithm;
use bigmds::sim::{generate_scenario, gof_sweep, ScenarioSpec};

fn main() -> bigmds::Result<()> {
    // Three strong directions among twelve.
    let data = generate_scenario(&ScenarioSpec::new(5_000, 12, 3, 1, 21), 0)?;
    for algorithm in [Algorithm::Classical, Algorithm::Divide, Algorithm::Interpolate, Algorithm::Fast] {
        if algorithm == Algorithm::Classical {
            // Exact MDS on 5000 rows is slow; use the first 1500.
            let rows: Vec<usize> = (0..1500).collect();
            let sweep = gof_sweep(&data.select_rows(&rows), algorithm, &algorithm.default_params(1, 0), 0.8)?;
            println!("{algorithm:<12} h*={} curve {:.3?}", sweep.h_star, sweep.curve);
            continue;
        }
        let sweep = gof_sweep(&data, algorithm, &algorithm.default_params(1, 5), 0.8)?;
        println!("{algorithm:<12} h*={} curve {:.3?}", sweep.h_star, sweep.curve);
    }
    Ok(())
}
