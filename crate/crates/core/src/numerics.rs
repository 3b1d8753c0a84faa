//! Tolerance-aware dense linear algebra: null spaces, ranks, orthonormal
//! complements, principal angles and the normal-equation solve used to extract
//! affine translations.
//!
//! Ranks are decided by one rule everywhere: a singular value counts when
//! `sigma_i > rank_rtol * sigma_max * max(rows, cols)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Tolerance used to validate that a matrix has orthonormal columns.
pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// Under [`RankRule::LargestGap`], consecutive singular values closer than this
/// ratio never count as a gap and the threshold rank is used instead.
pub const MIN_GAP_RATIO: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("input contains non-finite values")]
    NonFiniteInput,
    #[error("columns are not orthonormal (max deviation {deviation:e})")]
    NotOrthonormalInput { deviation: f64 },
    #[error("matrix has rank {rank}, expected full column rank {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(&'static str),
}

/// How the numerical rank is read off a singular value profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankRule {
    /// Count singular values above the scaled `rank_rtol` threshold.
    #[default]
    Threshold,
    /// Cut at the largest ratio between consecutive singular values, when it
    /// exceeds [`MIN_GAP_RATIO`]. Meant for slightly noisy data, where no value is
    /// exactly zero.
    LargestGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub rank_rtol: f64,
    /// Radians.
    pub angle_tol: f64,
    pub residual_tol: f64,
    #[serde(default)]
    pub rank_rule: RankRule,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rtol: 1e-10,
            angle_tol: 1e-6,
            residual_tol: 1e-8,
            rank_rule: RankRule::Threshold,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), NumericsError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.rank_rtol) || self.rank_rtol >= 1.0 {
            return Err(NumericsError::InvalidTolerance("rank_rtol must lie in (0, 1)"));
        }
        if !positive(self.angle_tol) {
            return Err(NumericsError::InvalidTolerance("angle_tol must be positive"));
        }
        if !positive(self.residual_tol) {
            return Err(NumericsError::InvalidTolerance("residual_tol must be positive"));
        }
        Ok(())
    }

    /// Rank of a matrix with the given shape and descending singular values.
    pub fn rank_from_singular_values(&self, sv: &[f64], rows: usize, cols: usize) -> usize {
        let Some(&max) = sv.first() else { return 0 };
        if max <= 0.0 {
            return 0;
        }
        let threshold = self.rank_rtol * max * rows.max(cols) as f64;
        let above = sv.iter().take_while(|&&s| s > threshold).count();
        match self.rank_rule {
            RankRule::Threshold => above,
            RankRule::LargestGap => {
                let mut best = (above, 0.0_f64);
                for i in 0..sv.len().saturating_sub(1) {
                    let ratio = sv[i] / sv[i + 1].max(f64::MIN_POSITIVE);
                    if ratio > best.1 {
                        best = (i + 1, ratio);
                    }
                }
                if best.1 >= MIN_GAP_RATIO {
                    best.0
                } else {
                    above
                }
            }
        }
    }
}

fn check_finite(a: &DMatrix<f64>) -> Result<(), NumericsError> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(NumericsError::NonFiniteInput)
    }
}

/// Full right-singular structure of `a`: singular values in descending order (length
/// `min(m, k)`) and a `k x k` orthogonal matrix whose columns are the matching right
/// singular vectors, followed by a basis of the remaining directions.
fn right_svd(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (m, k) = a.shape();
    if k == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    // Zero rows leave the null space unchanged and make V square.
    let padded;
    let work = if m < k {
        padded = a.clone().resize_vertically(k, 0.0);
        &padded
    } else {
        a
    };
    let svd = work.clone().svd(false, true);
    let v_t = svd.v_t.expect("V^T was requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut v = DMatrix::zeros(k, k);
    for (dst, &src) in order.iter().enumerate() {
        v.set_column(dst, &v_t.row(src).transpose());
    }
    let sv = order
        .iter()
        .take(m.min(k))
        .map(|&i| svd.singular_values[i])
        .collect();
    (sv, v)
}

/// Null space together with the singular value profile that determined it.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// `k x s`, orthonormal columns.
    pub basis: DMatrix<f64>,
    /// Descending, length `min(m, k)`.
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

pub fn null_space_with_profile(
    a: &DMatrix<f64>,
    tol: &ToleranceConfig,
) -> Result<NullSpace, NumericsError> {
    check_finite(a)?;
    let (m, k) = a.shape();
    let (sv, v) = right_svd(a);
    let rank = tol.rank_from_singular_values(&sv, m, k);
    let basis = v.columns(rank, k - rank).into_owned();
    Ok(NullSpace {
        basis,
        singular_values: sv,
        rank,
    })
}

/// Orthonormal basis (`k x s`) of the right null space of `a`.
pub fn null_space(a: &DMatrix<f64>, tol: &ToleranceConfig) -> Result<DMatrix<f64>, NumericsError> {
    Ok(null_space_with_profile(a, tol)?.basis)
}

pub fn singular_values(a: &DMatrix<f64>) -> Result<Vec<f64>, NumericsError> {
    check_finite(a)?;
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

pub fn rank_with_tol(a: &DMatrix<f64>, tol: &ToleranceConfig) -> Result<usize, NumericsError> {
    let sv = singular_values(a)?;
    Ok(tol.rank_from_singular_values(&sv, a.nrows(), a.ncols()))
}

/// Orthonormal basis of the column space of `a`, with rank decided by `tol`.
pub fn column_space(a: &DMatrix<f64>, tol: &ToleranceConfig) -> Result<DMatrix<f64>, NumericsError> {
    check_finite(a)?;
    let (m, k) = a.shape();
    if k == 0 || m == 0 {
        return Ok(DMatrix::zeros(m, 0));
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("U was requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let rank = tol.rank_from_singular_values(&sv, m, k);
    let mut basis = DMatrix::zeros(m, rank);
    for (dst, &src) in order.iter().take(rank).enumerate() {
        basis.set_column(dst, &u.column(src));
    }
    Ok(basis)
}

/// The `k` leading left singular vectors of `a` (`m x k`).
pub fn leading_subspace(a: &DMatrix<f64>, k: usize) -> Result<DMatrix<f64>, NumericsError> {
    check_finite(a)?;
    let (m, p) = a.shape();
    if k > m.min(p) {
        return Err(NumericsError::RankDeficient {
            rank: m.min(p),
            expected: k,
        });
    }
    if k == 0 {
        return Ok(DMatrix::zeros(m, 0));
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("U was requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut basis = DMatrix::zeros(m, k);
    for (dst, &src) in order.iter().take(k).enumerate() {
        basis.set_column(dst, &u.column(src));
    }
    Ok(basis)
}

/// Largest entry of `|U^T U - I|`.
pub fn orthonormality_defect(u: &DMatrix<f64>) -> f64 {
    let g = u.tr_mul(u);
    g.iter()
        .enumerate()
        .map(|(idx, &v)| {
            let (i, j) = (idx % g.nrows(), idx / g.nrows());
            if i == j {
                (v - 1.0).abs()
            } else {
                v.abs()
            }
        })
        .fold(0.0, f64::max)
}

fn check_orthonormal(u: &DMatrix<f64>) -> Result<(), NumericsError> {
    check_finite(u)?;
    let deviation = orthonormality_defect(u);
    if deviation > ORTHONORMAL_TOL {
        return Err(NumericsError::NotOrthonormalInput { deviation });
    }
    Ok(())
}

/// Orthonormal basis of the orthogonal complement of `span(U)`, `D x (D - d)`.
pub fn orthonormal_complement(u: &DMatrix<f64>) -> Result<DMatrix<f64>, NumericsError> {
    check_orthonormal(u)?;
    let (dim, d) = u.shape();
    if d == 0 {
        return Ok(DMatrix::identity(dim, dim));
    }
    // All singular values of U^T are 1, so the complement is exactly the trailing
    // D - d right singular vectors.
    let (_, v) = right_svd(&u.transpose());
    Ok(v.columns(d, dim - d).into_owned())
}

/// Principal angles between `span(U)` and `span(V)`, ascending, in `[0, pi/2]`.
///
/// Cosines are the singular values of `U^T V`. Angles whose cosine exceeds
/// `1/sqrt(2)` are taken from the sines (singular values of `V - U U^T V`) instead,
/// since `acos` cannot resolve angles below about `1e-8`.
pub fn principal_angles(u: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<Vec<f64>, NumericsError> {
    check_orthonormal(u)?;
    check_orthonormal(v)?;
    if u.nrows() != v.nrows() {
        return Err(NumericsError::DimensionMismatch {
            expected: u.nrows(),
            found: v.nrows(),
        });
    }
    // Project the smaller subspace onto the larger one.
    let (big, small) = if u.ncols() >= v.ncols() { (u, v) } else { (v, u) };
    let k = small.ncols();
    if k == 0 {
        return Ok(Vec::new());
    }
    let cross = big.tr_mul(small);
    let cosines = singular_values(&cross)?;
    let residual = small - big * &cross;
    let mut sines = singular_values(&residual)?;
    sines.reverse();
    Ok((0..k)
        .map(|i| {
            let c = cosines[i].clamp(0.0, 1.0);
            if c * c >= 0.5 {
                sines[i].clamp(0.0, 1.0).asin()
            } else {
                c.acos()
            }
        })
        .collect())
}

/// Largest principal angle; `pi/2` when the dimensions differ.
pub fn subspace_distance(u: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<f64, NumericsError> {
    if u.ncols() != v.ncols() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    Ok(principal_angles(u, v)?.into_iter().fold(0.0, f64::max))
}

/// `B (B^T B)^{-1} g`, via a thin QR factorization of `B`.
pub fn solve_normal(
    b: &DMatrix<f64>,
    g: &DVector<f64>,
    tol: &ToleranceConfig,
) -> Result<DVector<f64>, NumericsError> {
    check_finite(b)?;
    if b.ncols() != g.len() {
        return Err(NumericsError::DimensionMismatch {
            expected: b.ncols(),
            found: g.len(),
        });
    }
    let rank = rank_with_tol(b, tol)?;
    if rank < b.ncols() || b.ncols() > b.nrows() {
        return Err(NumericsError::RankDeficient {
            rank,
            expected: b.ncols(),
        });
    }
    if b.ncols() == 0 {
        return Ok(DVector::zeros(b.nrows()));
    }
    let qr = b.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let z = r
        .transpose()
        .solve_lower_triangular(g)
        .ok_or(NumericsError::RankDeficient {
            rank,
            expected: b.ncols(),
        })?;
    Ok(q * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn col(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_column_slice(v.len(), 1, v)
    }

    #[test]
    fn null_space_of_single_row() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        let n = null_space(&a, &tol()).unwrap();
        assert_eq!(n.shape(), (3, 2));
        assert!(n.row(0).iter().all(|v| v.abs() < 1e-15));
        assert!(orthonormality_defect(&n) < 1e-14);
    }

    #[test]
    fn null_space_of_identity_is_empty() {
        let n = null_space(&DMatrix::identity(4, 4), &tol()).unwrap();
        assert_eq!(n.shape(), (4, 0));
    }

    #[test]
    fn null_space_rejects_nan() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, f64::NAN]);
        assert_eq!(null_space(&a, &tol()), Err(NumericsError::NonFiniteInput));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_with_tol(&DMatrix::identity(3, 3), &tol()).unwrap(), 3);
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(rank_with_tol(&a, &tol()).unwrap(), 2);
        assert_eq!(rank_with_tol(&DMatrix::zeros(2, 3), &tol()).unwrap(), 0);
    }

    #[test]
    fn largest_gap_rule() {
        let t = ToleranceConfig {
            rank_rule: RankRule::LargestGap,
            ..tol()
        };
        assert_eq!(t.rank_from_singular_values(&[3.0, 2.0, 1e-5, 1e-6], 4, 4), 2);
        assert_eq!(t.rank_from_singular_values(&[3.0, 2.0, 1.0], 3, 3), 3);
    }

    #[test]
    fn tolerance_validation() {
        assert!(tol().validate().is_ok());
        let bad = ToleranceConfig {
            rank_rtol: 1.5,
            ..tol()
        };
        assert!(bad.validate().is_err());
        let bad = ToleranceConfig {
            angle_tol: 0.0,
            ..tol()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn complements() {
        let e1 = col(&[1.0, 0.0, 0.0]);
        let c = orthonormal_complement(&e1).unwrap();
        assert_eq!(c.shape(), (3, 2));
        assert!(c.row(0).iter().all(|v| v.abs() < 1e-15));
        let full = orthonormal_complement(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(full.shape(), (3, 0));
        let not_unit = col(&[2.0, 0.0, 0.0]);
        assert!(matches!(
            orthonormal_complement(&not_unit),
            Err(NumericsError::NotOrthonormalInput { .. })
        ));
    }

    #[test]
    fn angles_basic() {
        let e1 = col(&[1.0, 0.0]);
        let e2 = col(&[0.0, 1.0]);
        let diag = col(&[0.5_f64.sqrt(), 0.5_f64.sqrt()]);
        assert_eq!(principal_angles(&e1, &e1).unwrap(), vec![0.0]);
        assert!((principal_angles(&e1, &e2).unwrap()[0] - FRAC_PI_2).abs() < 1e-15);
        assert!((principal_angles(&e1, &diag).unwrap()[0] - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn tiny_angles_are_resolved() {
        let theta = 3e-10_f64;
        let u = col(&[1.0, 0.0, 0.0]);
        let v = col(&[theta.cos(), theta.sin(), 0.0]);
        let a = principal_angles(&u, &v).unwrap()[0];
        assert!((a - theta).abs() < 1e-20, "{a}");
    }

    #[test]
    fn solve_normal_cases() {
        let b = col(&[0.0, 1.0]);
        let x = solve_normal(&b, &DVector::from_vec(vec![-1.0]), &tol()).unwrap();
        assert!((x - DVector::from_vec(vec![0.0, -1.0])).norm() < 1e-15);

        let b = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let g = DVector::from_vec(vec![2.0, -3.0]);
        let x = solve_normal(&b, &g, &tol()).unwrap();
        assert!((x - &b * &g).norm() < 1e-14);

        let deficient = DMatrix::from_column_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            solve_normal(&deficient, &g, &tol()),
            Err(NumericsError::RankDeficient { rank: 1, expected: 2 })
        ));
    }
}
