//! Interpolation MDS: embed a 1000-row sample exactly, then place every
//! other row with Gower's formula. Also shows direct use of a context.
//!
//! cargo run --release --example interpolation

use bigmds::algorithms::{gower_interpolate, interpolation_mds, Algorithm, GowerContext};
use bigmds::sim::{aligned_correlations, generate_scenario, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = generate_scenario(&ScenarioSpec::new(50_000, 10, 4, 1, 2), 0)?;

    let params = Algorithm::Interpolate.default_params(4, 9);
    let config = interpolation_mds(&data, &params)?;
    let corr = aligned_correlations(&config.points, &data.leading_columns(4)?.to_mat())?;
    println!("50 000 rows, correlation with dominant columns {corr:.5?}");
    println!("eigenvalue estimates {:.3?}", config.eigenvalue_estimates);

    let base: Vec<usize> = (0..300).collect();
    let (ctx, base_config) = GowerContext::from_base(data.select_rows(&base), 4)?;
    let again = gower_interpolate(&ctx, &data.select_rows(&base[..5]))?;
    let err = (0..5)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| (again[(i, j)] - base_config.points[(i, j)]).abs())
        .fold(0.0, f64::max);
    println!("re-interpolating base rows: worst error {err:.2e}, covariance condition {:.1}", ctx.condition());
    Ok(())
}
