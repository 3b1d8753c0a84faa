use nalgebra::DMatrix;

use super::{AscError, VanishingBasis};
use crate::numerics::{self, ToleranceConfig};
use crate::subspaces::LinearSubspace;

/// Subspace through one point, read off the gradients of the vanishing basis.
#[derive(Debug, Clone)]
pub struct PointEstimate {
    pub subspace: LinearSubspace,
    /// Singular values of the stacked gradients at the unit-normalized point.
    pub gradient_singular_values: Vec<f64>,
    /// Smallest retained gradient singular value. Small values flag points close to
    /// another member of the union.
    pub conditioning: f64,
    /// `s x V` gradients at the unit-normalized point.
    pub gradients: DMatrix<f64>,
}

/// Full estimate at `x`, including the gradient profile used for seeding.
///
/// `x` is scaled to unit length first; gradients of homogeneous polynomials only
/// rescale along the ray, so the subspace does not depend on `|x|`.
pub fn estimate_at(
    basis: &VanishingBasis,
    x: &[f64],
    tol: &ToleranceConfig,
) -> Result<PointEstimate, AscError> {
    if x.len() != basis.num_vars() {
        return Err(AscError::DimensionMismatch {
            expected: basis.num_vars(),
            found: x.len(),
        });
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if basis.s() == 0 || norm == 0.0 || !norm.is_finite() {
        return Err(AscError::ZeroGradients);
    }
    let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
    let gradients = basis.gradients_at(&unit)?;
    let sv = numerics::singular_values(&gradients)?;
    if sv.first().is_none_or(|&max| max <= tol.residual_tol) {
        return Err(AscError::ZeroGradients);
    }
    let rank = tol.rank_from_singular_values(&sv, gradients.nrows(), gradients.ncols());
    let normals = numerics::leading_subspace(&gradients.transpose(), rank)?;
    let subspace = LinearSubspace::from_complement(&normals, tol)?;
    Ok(PointEstimate {
        subspace,
        conditioning: sv[rank - 1],
        gradient_singular_values: sv,
        gradients,
    })
}

/// `span(grad p_1(x), ..., grad p_s(x))^perp`.
pub fn estimate_subspace_at_point(
    basis: &VanishingBasis,
    x: &[f64],
    tol: &ToleranceConfig,
) -> Result<LinearSubspace, AscError> {
    Ok(estimate_at(basis, x, tol)?.subspace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asc::fit_vanishing_basis;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    /// The plane x1 = 0 together with the x1-axis; the vanishing quadrics are
    /// spanned by x1 x2 and x1 x3.
    fn axes_basis() -> VanishingBasis {
        let mut cols = Vec::new();
        for k in 0..12 {
            let t = k as f64 * 0.41 - 2.0;
            let u = (k * k % 7) as f64 * 0.3 - 1.0;
            cols.extend_from_slice(&[0.0, t, u]);
            cols.extend_from_slice(&[t + 0.1, 0.0, 0.0]);
        }
        fit_vanishing_basis(&DMatrix::from_column_slice(3, 24, &cols), 2, &tol()).unwrap()
    }

    #[test]
    fn xy_basis_at_a_point_on_the_y_axis() {
        let pts = DMatrix::from_fn(2, 20, |r, c| {
            let t = (c % 10) as f64 * 0.5 - 2.2;
            if (c < 10) == (r == 0) {
                t
            } else {
                0.0
            }
        });
        let basis = fit_vanishing_basis(&pts, 2, &tol()).unwrap();
        let s = estimate_subspace_at_point(&basis, &[0.0, 3.0], &tol()).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.basis()[(0, 0)].abs() < 1e-12);
    }

    #[test]
    fn duplicate_gradients_collapse() {
        let basis = axes_basis();
        assert_eq!(basis.s(), 2);
        let est = estimate_at(&basis, &[0.0, 1.0, 1.0], &tol()).unwrap();
        assert_eq!(est.subspace.dim(), 2);
        assert!(est.subspace.complement()[(0, 0)].abs() > 1.0 - 1e-12);
    }

    #[test]
    fn line_member_and_zero_point() {
        let basis = axes_basis();
        // Gradients at (1, 0, 0) are e2 and e3, so the estimate is the x1-axis.
        let est = estimate_at(&basis, &[1.0, 0.0, 0.0], &tol()).unwrap();
        assert_eq!(est.subspace.dim(), 1);
        assert!(matches!(
            estimate_at(&basis, &[0.0, 0.0, 0.0], &tol()),
            Err(AscError::ZeroGradients)
        ));
    }

    #[test]
    fn scale_invariance() {
        let basis = axes_basis();
        let x = [0.0, 0.3, -1.7];
        let s = estimate_subspace_at_point(&basis, &x, &tol()).unwrap();
        for lambda in [0.5, 2.0, -1.0] {
            let y: Vec<f64> = x.iter().map(|v| v * lambda).collect();
            let t = estimate_subspace_at_point(&basis, &y, &tol()).unwrap();
            assert!(s.distance_to(&t).unwrap() < 1e-10);
        }
    }
}
