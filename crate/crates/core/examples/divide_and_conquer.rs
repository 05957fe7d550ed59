//! Divide-and-conquer MDS on 20 000 rows, stitched through shared
//! connecting points.
//!
//! cargo run --release --example divide_and_conquer -- [n] [l] [c]

use bigmds::algorithms::{divide_and_conquer_with_plan, Algorithm};
use bigmds::plan::plan_divide_conquer;
use bigmds::sim::{aligned_correlations, generate_scenario, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let n = args.first().copied().unwrap_or(20_000);
    let r = 3;
    let mut params = Algorithm::Divide.default_params(r, 11);
    params.l = args.get(1).copied().unwrap_or(params.l);
    params.c = args.get(2).copied().unwrap_or(params.c);

    let data = generate_scenario(&ScenarioSpec::new(n, 8, r, 1, 5), 0)?;
    let plan = plan_divide_conquer(n, params.l, params.c, params.seed)?;
    println!("{} subsets of at most {} rows, {} connecting points", plan.p(), params.l, params.c);

    let config = divide_and_conquer_with_plan(&data, &plan, r)?;
    let corr = aligned_correlations(&config.points, &data.leading_columns(r)?.to_mat())?;
    println!("correlation with dominant columns {corr:.5?}");
    println!("G1 {:.4}, G2 {:.4}", config.gof_g1, config.gof_g2);
    println!("eigenvalue estimates {:.3?}", config.eigenvalue_estimates);
    let means: Vec<String> = config.column_means().iter().map(|m| format!("{m:.1e}")).collect();
    println!("column means [{}]", means.join(", "));
    Ok(())
}
