use nalgebra::{DMatrix, DVector};

use super::{AffineSubspace, LinearSubspace, SubspaceError};
use crate::numerics::{self, ToleranceConfig};

/// Recovers an affine subspace of `R^D` from gradients `(gamma_k, b_k)` in `R^{D+1}`
/// spanning the complement of its embedded linear subspace.
///
/// A maximal linearly independent subset is chosen greedily in input order. With
/// `B_1 = [b_1 .. b_l]` and `gamma_1 = (gamma_1 .. gamma_l)`, the linear part is
/// `span(B_1)^perp` and the translation is `-B_1 (B_1^T B_1)^{-1} gamma_1`.
pub fn recover_affine_from_gradients(
    grads: &[DVector<f64>],
    tol: &ToleranceConfig,
) -> Result<AffineSubspace, SubspaceError> {
    let Some(first) = grads.first() else {
        return Err(SubspaceError::DegenerateGradients);
    };
    let lifted_dim = first.len();
    if lifted_dim < 2 {
        return Err(SubspaceError::DimensionMismatch {
            expected: 2,
            found: lifted_dim,
        });
    }
    if let Some(g) = grads.iter().find(|g| g.len() != lifted_dim) {
        return Err(SubspaceError::DimensionMismatch {
            expected: lifted_dim,
            found: g.len(),
        });
    }
    let max_norm = grads.iter().map(|g| g.norm()).fold(0.0, f64::max);
    if !(max_norm.is_finite() && max_norm > 0.0) {
        return Err(SubspaceError::DegenerateGradients);
    }

    let mut kept: Vec<DVector<f64>> = Vec::new();
    for g in grads {
        // Normalize so the rank test is independent of gradient magnitudes.
        let norm = g.norm();
        if norm <= tol.rank_rtol * max_norm {
            continue;
        }
        let unit = g / norm;
        let mut trial = kept.clone();
        trial.push(unit.clone());
        let m = DMatrix::from_columns(&trial);
        if numerics::rank_with_tol(&m, tol)? == trial.len() {
            kept.push(unit);
        }
    }

    let dim = lifted_dim - 1;
    let gamma = DVector::from_iterator(kept.len(), kept.iter().map(|g| g[0]));
    let lower = DMatrix::from_fn(dim, kept.len(), |r, c| kept[c][r + 1]);

    let linear = LinearSubspace::from_complement(&lower, tol)?;
    let mu = -numerics::solve_normal(&lower, &gamma, tol)?;
    AffineSubspace::new(linear, mu)
}
