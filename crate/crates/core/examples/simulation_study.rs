//! Run a simulation grid and print mean correlation and eigenvalue bias
//! per cell. Without arguments this is the small default grid; pass a JSON
//! config to run something else.
//!
//! cargo run --release --example simulation_study -- [config.json] [out_dir]

use std::path::PathBuf;

use bigmds::sim::{run_study, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let config = match args.next() {
        Some(path) => StudyConfig::from_json_file(path.as_ref())?,
        None => StudyConfig::quick(),
    };
    let out_dir = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("bigmds-study"));
    let output = run_study(&config, &out_dir)?;
    println!("{:<12} {:>7} {:>4} {:>3}  {:>8}  bias per dim", "algorithm", "n", "k", "h", "corr");
    for m in &output.metrics {
        println!(
            "{:<12} {:>7} {:>4} {:>3}  {:>8.5}  {:.3?}",
            m.algorithm,
            m.n,
            m.k,
            m.h,
            m.mean_correlation(),
            m.eigen_bias
        );
    }
    println!("wrote {}", output.summary_path.display());
    Ok(())
}
