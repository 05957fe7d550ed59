//! Run the three scalable algorithms on one simulated data set and report
//! accuracy against the dominant columns.
//!
//! cargo run --release --example compare_algorithms -- [n] [k] [h] [seed]

use std::time::Instant;

use bigmds::algorithms::Algorithm;
use bigmds::sim::{aligned_correlations, generate_scenario, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let get = |i: usize, d: u64| args.get(i).copied().unwrap_or(d);
    let (n, k, h, seed) = (get(0, 10_000) as usize, get(1, 10) as usize, get(2, 5) as usize, get(3, 7));

    let spec = ScenarioSpec::new(n, k, h, 1, seed);
    let data = generate_scenario(&spec, 0)?;
    let dominant = data.leading_columns(h)?.to_mat();
    println!("n={n} k={k} h={h}");
    for algorithm in Algorithm::SCALABLE {
        let params = algorithm.default_params(h, seed);
        let start = Instant::now();
        let config = algorithm.run(&data, &params)?;
        let elapsed = start.elapsed().as_secs_f64();
        let corr = aligned_correlations(&config.points, &dominant)?;
        let mean = corr.iter().sum::<f64>() / h as f64;
        let eig: Vec<String> = config.eigenvalue_estimates.iter().map(|e| format!("{e:.2}")).collect();
        println!(
            "{algorithm:<12} corr={mean:.5} eigen=[{}] G1={:.4} time={elapsed:.2}s",
            eig.join(", "),
            config.gof_g1
        );
    }
    Ok(())
}
