//! Two-dimensional embedding of an IDX image file (for example the EMNIST
//! "byclass" training images) with each scalable algorithm.
//!
//! cargo run --release --example emnist -- <images.idx> [labels.idx] [out_dir]
//!
//! Writes one configuration CSV per algorithm, plus the labels as a
//! one-column CSV when a label file is given.

use std::path::PathBuf;

use bigmds::algorithms::Algorithm;
use bigmds::io::{join_labels, read_idx_images, read_idx_labels, write_configuration};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let Some(images) = args.next() else {
        eprintln!("usage: emnist <images.idx> [labels.idx] [out_dir]");
        std::process::exit(1);
    };
    let labels = args.next();
    let out_dir = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));

    let set = read_idx_images(images.as_ref())?;
    println!("{} images of {}×{}", set.count, set.height, set.width);
    if let Some(path) = labels {
        let joined = join_labels(&set, read_idx_labels(path.as_ref())?)?;
        let text: String = joined.iter().map(|(_, l)| format!("{l}\n")).collect();
        std::fs::write(out_dir.join("labels.csv"), text)?;
    }
    let data = set.to_data_matrix()?;
    for algorithm in Algorithm::SCALABLE {
        let params = algorithm.default_params(2, 1);
        let start = std::time::Instant::now();
        let config = algorithm.run(&data, &params)?;
        let path = out_dir.join(format!("emnist_{algorithm}.csv"));
        write_configuration(&config, &path)?;
        let means: Vec<String> = config.column_means().iter().map(|m| format!("{m:.1e}")).collect();
        println!(
            "{algorithm:<12} G1={:.4} G2={:.4} means=[{}] time={:.1}s -> {}",
            config.gof_g1,
            config.gof_g2,
            means.join(", "),
            start.elapsed().as_secs_f64(),
            path.display()
        );
    }
    Ok(())
}
