//! Recover a known rotation and shift with orthogonal Procrustes.
//!
//! cargo run --example procrustes

use bigmds::procrustes::{apply_procrustes, fit_procrustes};
use bigmds::rng::{stream_rng, NormalSampler};
use faer::Mat;

fn main() -> bigmds::Result<()> {
    let mut rng = stream_rng(3, 0);
    let mut normal = NormalSampler::new();
    let target = Mat::from_fn(50, 3, |_, _| normal.sample(&mut rng));

    let angle: f64 = 0.7;
    let turn = Mat::from_fn(3, 3, |i, j| match (i, j) {
        (0, 0) | (1, 1) => angle.cos(),
        (0, 1) => -angle.sin(),
        (1, 0) => angle.sin(),
        (2, 2) => -1.0,
        _ => 0.0,
    });
    let shift = [2.0, -1.0, 0.5];
    let moved = &target * &turn;
    let source = Mat::from_fn(50, 3, |i, j| moved[(i, j)] + shift[j]);

    let fit = fit_procrustes(&target, &source)?;
    let back = apply_procrustes(&source, &fit)?;
    let err = (0..50)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| (back[(i, j)] - target[(i, j)]).abs())
        .fold(0.0, f64::max);
    println!("translation {:.4?}", fit.translation);
    println!("loss {:.3e}, worst coordinate error {err:.3e}", fit.loss);
    println!("rotation · turn =");
    let check = &turn * &fit.rotation;
    for i in 0..3 {
        println!("  {:.6?}", (0..3).map(|j| check[(i, j)]).collect::<Vec<_>>());
    }
    Ok(())
}
