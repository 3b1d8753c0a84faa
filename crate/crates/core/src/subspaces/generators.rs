use nalgebra::DVector;

use super::{SubspaceError, UnionOfAffine};
use crate::polynomials::{dehomogenize_poly, multiply_linear_forms, InhomogeneousPoly};

pub const DEFAULT_GENERATOR_CAP: usize = 1_000_000;

/// All products `prod_i (b_{i j_i}^T x - b_{i j_i}^T mu_i)` over
/// `(j_1, ..., j_n) in [c_1] x ... x [c_n]`, last index varying fastest.
///
/// Each product is built as a product of homogeneous linear forms
/// `(-b^T mu, b)` in `R^{D+1}` and then dehomogenized.
pub fn affine_vanishing_generators(
    union: &UnionOfAffine,
    cap: usize,
) -> Result<Vec<InhomogeneousPoly>, SubspaceError> {
    let codims: Vec<usize> = union.iter().map(|a| a.codim()).collect();
    let count = codims
        .iter()
        .try_fold(1usize, |acc, &c| acc.checked_mul(c))
        .filter(|&c| c <= cap)
        .ok_or(SubspaceError::ProductCountOverflow { cap })?;

    // forms[i][j] is the homogenized j-th affine equation of member i.
    let forms: Vec<Vec<DVector<f64>>> = union
        .iter()
        .map(|a| {
            let b = a.linear_part().complement();
            (0..a.codim())
                .map(|j| {
                    let mut f = DVector::zeros(a.ambient_dim() + 1);
                    f[0] = -a.coords()[j];
                    f.rows_mut(1, a.ambient_dim()).copy_from(&b.column(j));
                    f
                })
                .collect()
        })
        .collect();

    let mut out = Vec::with_capacity(count);
    let mut choice = vec![0usize; codims.len()];
    for _ in 0..count {
        let factors: Vec<&[f64]> = choice
            .iter()
            .enumerate()
            .map(|(i, &j)| forms[i][j].as_slice())
            .collect();
        out.push(dehomogenize_poly(&multiply_linear_forms(&factors)?)?);
        for i in (0..choice.len()).rev() {
            choice[i] += 1;
            if choice[i] < codims[i] {
                break;
            }
            choice[i] = 0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ToleranceConfig;
    use crate::subspaces::{AffineSubspace, LinearSubspace};
    use nalgebra::DMatrix;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn affine_line_2d(normal: [f64; 2], offset: [f64; 2]) -> AffineSubspace {
        let s = LinearSubspace::from_complement(&DMatrix::from_column_slice(2, 1, &normal), &tol())
            .unwrap();
        AffineSubspace::new(s, DVector::from_column_slice(&offset)).unwrap()
    }

    #[test]
    fn two_affine_lines_give_one_quadric() {
        let a = affine_line_2d([1.0, 0.0], [2.0, 0.0]);
        let b = affine_line_2d([0.0, 1.0], [0.0, -1.0]);
        let u = UnionOfAffine::new(vec![a.clone(), b.clone()], &tol()).unwrap();
        let gens = affine_vanishing_generators(&u, DEFAULT_GENERATOR_CAP).unwrap();
        assert_eq!(gens.len(), 1);
        // Compare with the product evaluated directly, sign-independent.
        let bn1 = a.linear_part().complement().column(0).into_owned();
        let bn2 = b.linear_part().complement().column(0).into_owned();
        for x in [[0.3, 0.7], [-1.0, 2.5], [4.0, -0.5]] {
            let xv = DVector::from_column_slice(&x);
            let direct = (bn1.dot(&xv) - bn1.dot(a.translation()))
                * (bn2.dot(&xv) - bn2.dot(b.translation()));
            assert!((gens[0].evaluate(&x).unwrap() - direct).abs() < 1e-14);
        }
        assert!(gens[0].evaluate(&[2.0, 5.0]).unwrap().abs() < 1e-14);
        assert!(gens[0].evaluate(&[-3.0, -1.0]).unwrap().abs() < 1e-14);
    }

    #[test]
    fn cap_is_enforced() {
        let s = LinearSubspace::from_basis(&DMatrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]), &tol())
            .unwrap();
        let t = LinearSubspace::from_basis(&DMatrix::from_column_slice(3, 1, &[0.0, 1.0, 0.0]), &tol())
            .unwrap();
        let u = UnionOfAffine::new(
            vec![
                AffineSubspace::new(s, DVector::zeros(3)).unwrap(),
                AffineSubspace::new(t, DVector::zeros(3)).unwrap(),
            ],
            &tol(),
        )
        .unwrap();
        assert_eq!(affine_vanishing_generators(&u, 4).unwrap().len(), 4);
        assert!(matches!(
            affine_vanishing_generators(&u, 3),
            Err(SubspaceError::ProductCountOverflow { cap: 3 })
        ));
    }
}
