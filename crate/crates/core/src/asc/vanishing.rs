use nalgebra::{DMatrix, DVector};

use super::AscError;
use crate::numerics::{self, NullSpace, ToleranceConfig};
use crate::polynomials::{monomial_basis_size, HomogeneousPoly, MonomialBasis};

/// Upper bound on the degree tried by [`estimate_num_subspaces`] when the caller
/// gives neither a degree nor a subspace count.
pub const DEFAULT_MAX_DEGREE: usize = 6;

/// An orthonormal basis `p_1, ..., p_s` of the degree-`n` homogeneous polynomials
/// vanishing on a point set, as the columns of an `M_n(V) x s` coefficient matrix.
#[derive(Debug, Clone)]
pub struct VanishingBasis {
    monomials: MonomialBasis,
    polys: DMatrix<f64>,
    singular_values: Vec<f64>,
}

impl VanishingBasis {
    pub fn degree(&self) -> usize {
        self.monomials.degree()
    }

    pub fn num_vars(&self) -> usize {
        self.monomials.num_vars()
    }

    /// Dimension of the fitted vanishing space.
    pub fn s(&self) -> usize {
        self.polys.ncols()
    }

    /// `M_n(V) x s`, orthonormal columns.
    pub fn polys(&self) -> &DMatrix<f64> {
        &self.polys
    }

    /// Singular values of the row-normalized Veronese matrix, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn monomials(&self) -> &MonomialBasis {
        &self.monomials
    }

    pub fn polynomial(&self, k: usize) -> HomogeneousPoly {
        HomogeneousPoly::new(
            self.num_vars(),
            self.degree(),
            self.polys.column(k).iter().copied().collect(),
        )
        .expect("column length matches the monomial basis")
    }

    /// Row `k` is the gradient of `p_k` at `x` (`s x V`).
    pub fn gradients_at(&self, x: &[f64]) -> Result<DMatrix<f64>, AscError> {
        let jac = self.monomials.jacobian(x)?;
        Ok(self.polys.tr_mul(&jac))
    }

    /// Values `p_k(x)` for every basis polynomial.
    pub fn evaluate(&self, x: &[f64]) -> Result<DVector<f64>, AscError> {
        let emb = self.monomials.embed(x)?;
        Ok(self.polys.tr_mul(&emb))
    }
}

/// Null space of the matrix whose rows are the unit-normalized embeddings of the
/// columns of `points`. Zero rows stay zero.
pub(crate) fn fit_embedded_null_space(
    monomials: &MonomialBasis,
    points: &DMatrix<f64>,
    tol: &ToleranceConfig,
) -> Result<NullSpace, AscError> {
    let mut rows = DMatrix::zeros(points.ncols(), monomials.len());
    for (j, x) in points.column_iter().enumerate() {
        let emb = monomials.embed(x.as_slice())?;
        let norm = emb.norm();
        if norm > 0.0 {
            rows.set_row(j, &(emb / norm).transpose());
        }
    }
    Ok(numerics::null_space_with_profile(&rows, tol)?)
}

/// Fits the degree-`degree` vanishing polynomials of the columns of `points`
/// (`V x N`). The result may be empty (`s = 0`).
pub fn fit_vanishing_basis(
    points: &DMatrix<f64>,
    degree: usize,
    tol: &ToleranceConfig,
) -> Result<VanishingBasis, AscError> {
    if degree == 0 {
        return Err(AscError::InvalidConfig("degree must be at least 1"));
    }
    if points.ncols() == 0 || points.nrows() == 0 {
        return Err(AscError::DegenerateData("no points"));
    }
    if points.iter().all(|&v| v == 0.0) {
        return Err(AscError::DegenerateData("every point is zero"));
    }
    let monomials = MonomialBasis::homogeneous(degree, points.nrows())?;
    let fit = fit_embedded_null_space(&monomials, points, tol)?;
    Ok(VanishingBasis {
        monomials,
        polys: fit.basis,
        singular_values: fit.singular_values,
    })
}

/// Smallest degree `n <= max_degree` with at least one vanishing polynomial.
///
/// Degrees with fewer points than monomials are not tried, since a polynomial
/// always vanishes on too few points.
pub fn estimate_num_subspaces(
    points: &DMatrix<f64>,
    max_degree: usize,
    tol: &ToleranceConfig,
) -> Result<usize, AscError> {
    if max_degree == 0 {
        return Err(AscError::InvalidConfig("max_degree must be at least 1"));
    }
    let num_points = points.ncols();
    for n in 1..=max_degree {
        if num_points < monomial_basis_size(n, points.nrows())? {
            break;
        }
        if fit_vanishing_basis(points, n, tol)?.s() >= 1 {
            return Ok(n);
        }
    }
    Err(AscError::NoVanishingDegree {
        max_degree,
        points: num_points,
        required: monomial_basis_size(1, points.nrows().max(1))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::multiply_linear_forms;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn single_plane_degree_one() {
        // Deterministic spread of points on x1 = 0.
        let pts = DMatrix::from_fn(3, 30, |r, c| match r {
            0 => 0.0,
            1 => ((c * 7 + 3) % 11) as f64 / 5.0 - 1.0,
            _ => ((c * 5 + 1) % 13) as f64 / 6.0 - 1.0,
        });
        let b = fit_vanishing_basis(&pts, 1, &tol()).unwrap();
        assert_eq!(b.s(), 1);
        assert!((b.polys()[(0, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coordinate_axes_give_xy() {
        // 15 points on each axis of R^2.
        let pts = DMatrix::from_fn(2, 30, |r, c| {
            let t = (c % 15) as f64 / 3.0 - 2.4;
            if (c < 15) == (r == 0) {
                t
            } else {
                0.0
            }
        });
        let b = fit_vanishing_basis(&pts, 2, &tol()).unwrap();
        assert_eq!(b.s(), 1);
        let xy = multiply_linear_forms(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let p = b.polynomial(0);
        let dot: f64 = p.coeffs().iter().zip(xy.coeffs()).map(|(a, b)| a * b).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_data_is_rejected() {
        assert!(matches!(
            fit_vanishing_basis(&DMatrix::zeros(3, 4), 2, &tol()),
            Err(AscError::DegenerateData(_))
        ));
        assert!(matches!(
            fit_vanishing_basis(&DMatrix::zeros(3, 0), 2, &tol()),
            Err(AscError::DegenerateData(_))
        ));
    }

    #[test]
    fn too_few_points_for_any_degree() {
        let pts = DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 3.0, -1.0, 0.5, 2.0]);
        assert!(matches!(
            estimate_num_subspaces(&pts, 4, &tol()),
            Err(AscError::NoVanishingDegree { required: 3, .. })
        ));
    }
}
