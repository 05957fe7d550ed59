//! Orthogonal Procrustes alignment, with and without translation.
//!
//! Given a target `X₁` and a source `X₂` (both `n × r`), the fit finds an
//! orthogonal `T` and a vector `t` minimising `‖X₁ − X₂T − 1tᵀ‖²_F`.
//! With `Ψ = X₁ᵀ P X₂ = Γ Φ Ωᵀ` the optimum is `T = Ω Γᵀ` and
//! `t = (X₁ − X₂T)ᵀ 1 / n`. Reflections are allowed.

use faer::Mat;

use crate::classical::column_means;
use crate::error::{MdsError, Result};
use crate::matrix::thin_svd;

/// Singular values of `Ψ` at or below this fraction of the largest mark the
/// fit as rank deficient.
pub const RANK_DEFICIENCY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct ProcrustesTransform {
    pub rotation: Mat<f64>,
    pub translation: Vec<f64>,
    /// Squared Frobenius residual of the fit.
    pub loss: f64,
    /// The cross-product matrix was rank deficient, so `rotation` is one of
    /// several optimal solutions.
    pub rank_deficient: bool,
}

impl ProcrustesTransform {
    pub fn identity(r: usize) -> Self {
        Self {
            rotation: Mat::identity(r, r),
            translation: vec![0.0; r],
            loss: 0.0,
            rank_deficient: false,
        }
    }

    pub fn dimension(&self) -> usize {
        self.rotation.nrows()
    }
}

fn check_pair(target: &Mat<f64>, source: &Mat<f64>) -> Result<()> {
    if target.nrows() != source.nrows() || target.ncols() != source.ncols() {
        return Err(MdsError::Shape(format!(
            "Procrustes target is {}×{} but source is {}×{}",
            target.nrows(),
            target.ncols(),
            source.nrows(),
            source.ncols()
        )));
    }
    if target.nrows() < 2 || target.ncols() == 0 {
        return Err(MdsError::Shape(format!(
            "Procrustes needs at least 2 points and 1 dimension, got {}×{}",
            target.nrows(),
            target.ncols()
        )));
    }
    Ok(())
}

fn centered(m: &Mat<f64>) -> Mat<f64> {
    let means = column_means(m);
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] - means[j])
}

fn residual_loss(target: &Mat<f64>, source: &Mat<f64>, rotation: &Mat<f64>, t: &[f64]) -> f64 {
    let moved = source * rotation;
    let mut loss = 0.0;
    for j in 0..target.ncols() {
        for i in 0..target.nrows() {
            let d = target[(i, j)] - moved[(i, j)] - t[j];
            loss += d * d;
        }
    }
    loss
}

/// Optimal translation for a given rotation: `(X₁ − X₂T)ᵀ 1 / n`.
pub fn optimal_translation(target: &Mat<f64>, source: &Mat<f64>, rotation: &Mat<f64>) -> Vec<f64> {
    let moved = source * rotation;
    let n = target.nrows() as f64;
    (0..target.ncols())
        .map(|j| (0..target.nrows()).map(|i| target[(i, j)] - moved[(i, j)]).sum::<f64>() / n)
        .collect()
}

/// Loss of an arbitrary rotation paired with its optimal translation.
pub fn loss_with_rotation(target: &Mat<f64>, source: &Mat<f64>, rotation: &Mat<f64>) -> f64 {
    let t = optimal_translation(target, source, rotation);
    residual_loss(target, source, rotation, &t)
}

fn rotation_from_cross(cross: &Mat<f64>) -> Result<(Mat<f64>, bool)> {
    let svd = thin_svd(cross)?;
    let top = svd.singular_values[0];
    let rank_deficient = top == 0.0
        || svd
            .singular_values
            .iter()
            .any(|&s| s <= RANK_DEFICIENCY_TOLERANCE * top);
    Ok((&svd.right * svd.left.transpose(), rank_deficient))
}

/// Fit `target ≈ source · T + 1 tᵀ`.
pub fn fit_procrustes(target: &Mat<f64>, source: &Mat<f64>) -> Result<ProcrustesTransform> {
    check_pair(target, source)?;
    let cross = centered(target).transpose() * centered(source);
    let (rotation, rank_deficient) = rotation_from_cross(&cross)?;
    let translation = optimal_translation(target, source, &rotation);
    let loss = residual_loss(target, source, &rotation, &translation);
    Ok(ProcrustesTransform {
        rotation,
        translation,
        loss,
        rank_deficient,
    })
}

/// Fit `target ≈ source · T` with no translation.
pub fn fit_procrustes_no_translation(
    target: &Mat<f64>,
    source: &Mat<f64>,
) -> Result<ProcrustesTransform> {
    check_pair(target, source)?;
    let cross = target.transpose() * source;
    let (rotation, rank_deficient) = rotation_from_cross(&cross)?;
    let translation = vec![0.0; target.ncols()];
    let loss = residual_loss(target, source, &rotation, &translation);
    Ok(ProcrustesTransform {
        rotation,
        translation,
        loss,
        rank_deficient,
    })
}

/// `points · T + 1 tᵀ`.
pub fn apply_procrustes(points: &Mat<f64>, transform: &ProcrustesTransform) -> Result<Mat<f64>> {
    let r = transform.dimension();
    if points.ncols() != r {
        return Err(MdsError::Shape(format!(
            "points have {} columns but the transform is {r}-dimensional",
            points.ncols()
        )));
    }
    let moved = points * &transform.rotation;
    Ok(Mat::from_fn(points.nrows(), r, |i, j| {
        moved[(i, j)] + transform.translation[j]
    }))
}
