//! Partition arithmetic without running any MDS.
//!
//! cargo run --example plans

use bigmds::plan::{divide_conquer_subset_count, fast_stats, plan_divide_conquer, plan_interpolation};

fn main() -> bigmds::Result<()> {
    for (n, l, s) in [(1_000_000, 700, 20), (1_000_000, 800, 20), (100_000, 1000, 10)] {
        let st = fast_stats(n, l, s)?;
        println!(
            "fast n={n} l={l} s={s}: {} leaves, mean {:.2}, depth {}",
            st.leaf_count, st.mean_leaf_size, st.depth
        );
    }
    println!("divide n=10^6 l=400 c=10: {} subsets", divide_conquer_subset_count(1_000_000, 400, 10));

    let plan = plan_divide_conquer(1_000, 400, 10, 1)?;
    let sizes: Vec<usize> = plan.subsets.iter().map(Vec::len).collect();
    println!("divide n=1000: subset sizes {sizes:?}, connecting {:?}", &plan.connecting_indices[..3]);
    let plan = plan_interpolation(2_500, 1_000, 1)?;
    let sizes: Vec<usize> = plan.subsets.iter().map(Vec::len).collect();
    println!("interpolation n=2500: subset sizes {sizes:?}");
    Ok(())
}
