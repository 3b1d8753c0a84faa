use nalgebra::DMatrix;

use super::{AffineSubspace, LinearSubspace, SubspaceError, UnionOfLinear};
use crate::numerics::{self, ToleranceConfig};

/// Prepends the coordinate `1` to every column of the `D x N` data matrix.
pub fn homogenize_points(points: &DMatrix<f64>) -> DMatrix<f64> {
    points.clone().insert_row(0, 1.0)
}

/// The linear subspace of `R^{D+1}` spanned by `(1, mu)` and `(0, u_k)`.
///
/// Its complement is spanned by `(-b_j^T mu, b_j)` for the complement basis `b_j`
/// of the linear part, so the codimension is unchanged.
pub fn embed_affine_subspace(a: &AffineSubspace) -> Result<LinearSubspace, SubspaceError> {
    let dim = a.ambient_dim();
    let (d, c) = (a.dim(), a.codim());
    let mu = a.translation();

    let mut basis = DMatrix::zeros(dim + 1, d + 1);
    // mu is orthogonal to every u_k, so these columns are already orthogonal.
    let scale = (1.0 + mu.norm_squared()).sqrt();
    basis[(0, 0)] = 1.0 / scale;
    basis.view_mut((1, 0), (dim, 1)).copy_from(&(mu / scale));
    basis
        .view_mut((1, 1), (dim, d))
        .copy_from(a.linear_part().basis());

    let b = a.linear_part().complement();
    let mut normals = DMatrix::zeros(dim + 1, c);
    normals.view_mut((0, 0), (1, c)).copy_from(&(-a.coords()).transpose());
    normals.view_mut((1, 0), (dim, c)).copy_from(b);
    // Gram matrix is I + a a^T, well conditioned, so the rank is always c.
    let complement = numerics::column_space(&normals, &ToleranceConfig::default())?;
    debug_assert_eq!(complement.ncols(), c);
    Ok(LinearSubspace::from_parts(basis, complement))
}

/// Embeds every affine member into `R^{D+1}`.
pub fn embed_affine_union(union: &super::UnionOfAffine) -> Result<UnionOfLinear, SubspaceError> {
    let subspaces = union
        .iter()
        .map(embed_affine_subspace)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(UnionOfLinear { subspaces })
}

/// `(1, x)` for a single point.
#[cfg(test)]
pub(crate) fn homogenize_point(x: &[f64]) -> nalgebra::DVector<f64> {
    let mut v = nalgebra::DVector::zeros(x.len() + 1);
    v[0] = 1.0;
    v.rows_mut(1, x.len()).copy_from_slice(x);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn shifted_x_axis() -> AffineSubspace {
        let s = LinearSubspace::from_basis(&DMatrix::from_column_slice(2, 1, &[1.0, 0.0]), &tol())
            .unwrap();
        AffineSubspace::new(s, DVector::from_vec(vec![0.0, 1.0])).unwrap()
    }

    #[test]
    fn homogenize_prepends_one() {
        let x = DMatrix::from_column_slice(2, 2, &[2.0, 3.0, 0.0, 0.0]);
        let h = homogenize_points(&x);
        assert_eq!(h, DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 3.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn shifted_line_embeds_to_expected_plane() {
        let emb = embed_affine_subspace(&shifted_x_axis()).unwrap();
        let r = 0.5_f64.sqrt();
        let expected =
            LinearSubspace::from_basis(&DMatrix::from_column_slice(3, 2, &[r, 0.0, r, 0.0, 1.0, 0.0]), &tol())
                .unwrap();
        assert!(emb.distance_to(&expected).unwrap() < 1e-15);
        for k in 0..20 {
            let x = [k as f64 * 0.37 - 3.0, 1.0];
            assert!(emb.distance(homogenize_point(&x).as_slice()).unwrap() < 1e-14);
        }
    }

    #[test]
    fn zero_translation_adds_the_homogeneous_axis() {
        let s = LinearSubspace::from_basis(
            &DMatrix::from_column_slice(3, 1, &[0.0, 0.6, 0.8]),
            &tol(),
        )
        .unwrap();
        let a = AffineSubspace::new(s, DVector::zeros(3)).unwrap();
        let emb = embed_affine_subspace(&a).unwrap();
        let expected = LinearSubspace::from_basis(
            &DMatrix::from_column_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.6, 0.8]),
            &tol(),
        )
        .unwrap();
        assert!(emb.distance_to(&expected).unwrap() < 1e-15);
        assert_eq!(emb.codim(), 2);
    }
}
