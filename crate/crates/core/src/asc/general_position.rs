use nalgebra::DMatrix;
use serde::Serialize;

use super::vanishing::fit_embedded_null_space;
use super::AscError;
use crate::numerics::{self, ToleranceConfig};
use crate::polynomials::MonomialBasis;
use crate::subspaces::{
    embed_affine_union, homogenize_points, sample_union, samples_to_matrix, Arrangement,
    UnionOfAffine,
};

/// Seed of the sampling oracle for the model's vanishing space.
pub const ORACLE_SEED: u64 = 0xA5C;
/// The oracle draws this many samples per monomial from every member.
pub const ORACLE_SAMPLES_PER_MONOMIAL: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralPositionReport {
    pub in_general_position: bool,
    /// Dimension of the degree-`n` vanishing space of the points.
    pub s_data: usize,
    /// Dimension of the degree-`n` vanishing space of the model.
    pub s_model: usize,
    /// Largest principal angle between the two vanishing spaces; `pi/2` when their
    /// dimensions differ.
    pub max_angle: f64,
}

/// Whether the degree-`n` polynomials vanishing on the columns of `points` are
/// exactly those vanishing on `model`.
///
/// For a linear model these are homogeneous polynomials of degree `n`; for an
/// affine model, all polynomials of degree at most `n` on the raw points. The
/// model's vanishing space is fitted on a dense deterministic sample of the model.
pub fn check_general_position(
    points: &DMatrix<f64>,
    model: &Arrangement,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<GeneralPositionReport, AscError> {
    tol.validate()?;
    if n == 0 {
        return Err(AscError::InvalidConfig("degree must be at least 1"));
    }
    let dim = model.ambient_dim();
    if points.nrows() != dim {
        return Err(AscError::DimensionMismatch {
            expected: dim,
            found: points.nrows(),
        });
    }
    if points.ncols() == 0 {
        return Err(AscError::DegenerateData("no points"));
    }

    let mut off = Vec::new();
    for (j, x) in points.column_iter().enumerate() {
        let (_, d) = model.nearest(x.as_slice())?;
        if d > tol.residual_tol * (1.0 + x.norm()) {
            off.push(j);
        }
    }
    if !off.is_empty() {
        return Err(AscError::PointsOffModel { rows: off });
    }

    let monomials = if model.is_affine() {
        MonomialBasis::affine(n, dim)?
    } else {
        MonomialBasis::homogeneous(n, dim)?
    };
    let per_member = ORACLE_SAMPLES_PER_MONOMIAL * monomials.len();
    let samples = sample_union(model, &vec![per_member; model.len()], ORACLE_SEED, 1.0)?;
    let (oracle, _) = samples_to_matrix(&samples);

    let data_fit = fit_embedded_null_space(&monomials, points, tol)?;
    let model_fit = fit_embedded_null_space(&monomials, &oracle, tol)?;
    let (s_data, s_model) = (data_fit.basis.ncols(), model_fit.basis.ncols());
    let max_angle = if s_data == 0 && s_model == 0 {
        0.0
    } else {
        numerics::subspace_distance(&data_fit.basis, &model_fit.basis)?
    };
    Ok(GeneralPositionReport {
        in_general_position: s_data == s_model && max_angle < tol.angle_tol,
        s_data,
        s_model,
        max_angle,
    })
}

/// The same check on the homogenized points against the embedded linear union.
pub fn check_general_position_embedded(
    points: &DMatrix<f64>,
    union: &UnionOfAffine,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<GeneralPositionReport, AscError> {
    let lifted = homogenize_points(points);
    let model = Arrangement::Linear(embed_affine_union(union)?);
    check_general_position(&lifted, &model, n, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspaces::{LinearSubspace, UnionOfLinear};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn two_planes() -> Arrangement {
        let planes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
            .iter()
            .map(|b| LinearSubspace::from_complement(&DMatrix::from_column_slice(3, 1, b), &tol()))
            .collect::<Result<Vec<_>, _>>()
            .unwrap();
        Arrangement::Linear(UnionOfLinear::new(planes, &tol()).unwrap())
    }

    #[test]
    fn starved_and_sufficient_samples() {
        let four = [0.0, 1.0, 2.0, 0.0, -1.5, 0.5, 1.0, 0.0, 0.7, -2.0, 0.0, 1.3];
        let pts = DMatrix::from_column_slice(3, 4, &four);
        let r = check_general_position(&pts, &two_planes(), 2, &tol()).unwrap();
        assert!(!r.in_general_position);
        assert_eq!((r.s_data, r.s_model), (2, 1));

        let mut five = four.to_vec();
        five.extend_from_slice(&[0.0, 0.3, -0.9]);
        let pts = DMatrix::from_column_slice(3, 5, &five);
        let r = check_general_position(&pts, &two_planes(), 2, &tol()).unwrap();
        assert!(r.in_general_position, "{r:?}");
        assert_eq!((r.s_data, r.s_model), (1, 1));
    }

    #[test]
    fn off_model_points_are_listed() {
        let pts = DMatrix::from_column_slice(3, 3, &[0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
        assert!(matches!(
            check_general_position(&pts, &two_planes(), 2, &tol()),
            Err(AscError::PointsOffModel { rows }) if rows == vec![1, 2]
        ));
    }
}
