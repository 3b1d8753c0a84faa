use nalgebra::DVector;

use super::monomial::{affine_basis_size, monomial_basis_size, MonomialBasis};
use super::PolyError;

/// A homogeneous polynomial of degree `degree` in `num_vars` variables.
///
/// `coeffs[k]` multiplies the `k`-th monomial of [`MonomialBasis::homogeneous`].
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly {
    num_vars: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

/// A polynomial of degree at most `max_degree` in `num_vars` variables.
///
/// Coefficients follow [`MonomialBasis::affine`]: constant term first, then each
/// degree block in grlex order.
#[derive(Debug, Clone, PartialEq)]
pub struct InhomogeneousPoly {
    num_vars: usize,
    max_degree: usize,
    coeffs: Vec<f64>,
}

fn check_len(expected: usize, found: usize) -> Result<(), PolyError> {
    if expected != found {
        return Err(PolyError::CoefficientCount { expected, found });
    }
    Ok(())
}

fn check_point(x: &[f64], num_vars: usize) -> Result<(), PolyError> {
    if x.len() != num_vars {
        return Err(PolyError::DimensionMismatch {
            expected: num_vars,
            found: x.len(),
        });
    }
    Ok(())
}

fn eval_terms(basis: &MonomialBasis, coeffs: &[f64], x: &[f64]) -> f64 {
    basis
        .iter()
        .zip(coeffs)
        .filter(|(_, &c)| c != 0.0)
        .map(|(e, &c)| {
            c * e
                .iter()
                .zip(x)
                .map(|(&ej, &xj)| xj.powi(ej as i32))
                .product::<f64>()
        })
        .sum()
}

impl HomogeneousPoly {
    pub fn new(num_vars: usize, degree: usize, coeffs: Vec<f64>) -> Result<Self, PolyError> {
        check_len(monomial_basis_size(degree, num_vars)?, coeffs.len())?;
        Ok(Self {
            num_vars,
            degree,
            coeffs,
        })
    }

    pub fn zero(num_vars: usize, degree: usize) -> Result<Self, PolyError> {
        let len = monomial_basis_size(degree, num_vars)?;
        Ok(Self {
            num_vars,
            degree,
            coeffs: vec![0.0; len],
        })
    }

    /// Builds a polynomial from `(exponents, coefficient)` terms; repeated monomials add up.
    pub fn from_terms(
        num_vars: usize,
        degree: usize,
        terms: &[(&[u32], f64)],
    ) -> Result<Self, PolyError> {
        let basis = MonomialBasis::homogeneous(degree, num_vars)?;
        let mut coeffs = vec![0.0; basis.len()];
        for (e, c) in terms {
            let k = basis
                .index_of(e)
                .ok_or_else(|| PolyError::ForeignMonomial(e.to_vec()))?;
            coeffs[k] += c;
        }
        Ok(Self {
            num_vars,
            degree,
            coeffs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn basis(&self) -> MonomialBasis {
        MonomialBasis::homogeneous(self.degree, self.num_vars)
            .expect("size was validated on construction")
    }

    /// Term-by-term evaluation at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64, PolyError> {
        check_point(x, self.num_vars)?;
        Ok(eval_terms(&self.basis(), &self.coeffs, x))
    }

    /// Gradient at `x`, i.e. `coeffs^T * J(x)` with `J` the Veronese Jacobian.
    pub fn gradient(&self, x: &[f64]) -> Result<DVector<f64>, PolyError> {
        check_point(x, self.num_vars)?;
        let jac = self.basis().jacobian(x)?;
        Ok(jac.tr_mul(&DVector::from_column_slice(&self.coeffs)))
    }

    /// Multiplies by the linear form `form^T x`.
    pub fn mul_linear(&self, form: &[f64]) -> Result<Self, PolyError> {
        check_point(form, self.num_vars)?;
        let src = self.basis();
        let dst = MonomialBasis::homogeneous(self.degree + 1, self.num_vars)?;
        let mut coeffs = vec![0.0; dst.len()];
        let mut lifted = vec![0u32; self.num_vars];
        for (e, &c) in src.iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            for (j, &fj) in form.iter().enumerate() {
                if fj == 0.0 {
                    continue;
                }
                lifted.copy_from_slice(e);
                lifted[j] += 1;
                let k = dst.index_of(&lifted).expect("degree-raised monomial exists");
                coeffs[k] += c * fj;
            }
        }
        Ok(Self {
            num_vars: self.num_vars,
            degree: self.degree + 1,
            coeffs,
        })
    }
}

impl InhomogeneousPoly {
    pub fn new(num_vars: usize, max_degree: usize, coeffs: Vec<f64>) -> Result<Self, PolyError> {
        check_len(affine_basis_size(max_degree, num_vars)?, coeffs.len())?;
        Ok(Self {
            num_vars,
            max_degree,
            coeffs,
        })
    }

    pub fn from_terms(
        num_vars: usize,
        max_degree: usize,
        terms: &[(&[u32], f64)],
    ) -> Result<Self, PolyError> {
        let basis = MonomialBasis::affine(max_degree, num_vars)?;
        let mut coeffs = vec![0.0; basis.len()];
        for (e, c) in terms {
            let k = basis
                .index_of(e)
                .ok_or_else(|| PolyError::ForeignMonomial(e.to_vec()))?;
            coeffs[k] += c;
        }
        Ok(Self {
            num_vars,
            max_degree,
            coeffs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn basis(&self) -> MonomialBasis {
        MonomialBasis::affine(self.max_degree, self.num_vars)
            .expect("size was validated on construction")
    }

    /// Highest degree carrying a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.basis()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, &c)| c != 0.0)
            .map(|(e, _)| e.iter().sum::<u32>() as usize)
            .max()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64, PolyError> {
        check_point(x, self.num_vars)?;
        Ok(eval_terms(&self.basis(), &self.coeffs, x))
    }
}

/// Expands `(f_1^T x)(f_2^T x)...(f_k^T x)` into a homogeneous polynomial of degree `k`.
pub fn multiply_linear_forms<F: AsRef<[f64]>>(forms: &[F]) -> Result<HomogeneousPoly, PolyError> {
    let (first, rest) = forms.split_first().ok_or(PolyError::EmptyInput)?;
    let first = first.as_ref();
    let mut poly = HomogeneousPoly::new(first.len(), 1, first.to_vec())?;
    for f in rest {
        poly = poly.mul_linear(f.as_ref())?;
    }
    Ok(poly)
}

/// Raises every degree-`k` term of `p` to degree `target_degree` with the factor
/// `x_0^{target_degree - k}`; the new variable `x_0` is placed at index 0.
pub fn homogenize_poly(
    p: &InhomogeneousPoly,
    target_degree: usize,
) -> Result<HomogeneousPoly, PolyError> {
    if let Some(deg) = p.degree() {
        if deg > target_degree {
            return Err(PolyError::Degree {
                degree: deg,
                target: target_degree,
            });
        }
    }
    let dst = MonomialBasis::homogeneous(target_degree, p.num_vars + 1)?;
    let mut coeffs = vec![0.0; dst.len()];
    let mut lifted = vec![0u32; p.num_vars + 1];
    for (e, &c) in p.basis().iter().zip(&p.coeffs) {
        if c == 0.0 {
            continue;
        }
        let k: u32 = e.iter().sum();
        lifted[0] = target_degree as u32 - k;
        lifted[1..].copy_from_slice(e);
        let idx = dst.index_of(&lifted).expect("homogenized monomial exists");
        coeffs[idx] += c;
    }
    Ok(HomogeneousPoly {
        num_vars: p.num_vars + 1,
        degree: target_degree,
        coeffs,
    })
}

/// Substitutes `x_0 = 1`. The result has `num_vars - 1` variables and
/// `max_degree = deg(P)`.
pub fn dehomogenize_poly(p: &HomogeneousPoly) -> Result<InhomogeneousPoly, PolyError> {
    if p.num_vars < 2 {
        return Err(PolyError::TooFewVariables(p.num_vars));
    }
    let dst = MonomialBasis::affine(p.degree, p.num_vars - 1)?;
    let mut coeffs = vec![0.0; dst.len()];
    for (e, &c) in p.basis().iter().zip(&p.coeffs) {
        if c == 0.0 {
            continue;
        }
        let idx = dst.index_of(&e[1..]).expect("dehomogenized monomial exists");
        coeffs[idx] += c;
    }
    Ok(InhomogeneousPoly {
        num_vars: p.num_vars - 1,
        max_degree: p.degree,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_basic() {
        let p = HomogeneousPoly::from_terms(2, 2, &[(&[1, 1], 1.0)]).unwrap();
        assert_eq!(p.evaluate(&[3.0, 5.0]).unwrap(), 15.0);
        let z = HomogeneousPoly::zero(3, 4).unwrap();
        assert_eq!(z.evaluate(&[1.0, -2.0, 7.0]).unwrap(), 0.0);
        assert!(matches!(
            p.evaluate(&[1.0]),
            Err(PolyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_cubic_in_four_vars() {
        let p = HomogeneousPoly::from_terms(
            4,
            3,
            &[(&[2, 1, 0, 0], 1.0), (&[1, 0, 2, 0], 1.0), (&[0, 1, 1, 1], 1.0)],
        )
        .unwrap();
        assert_eq!(p.evaluate(&[1.0; 4]).unwrap(), 3.0);
    }

    #[test]
    fn gradient_of_product() {
        let p = HomogeneousPoly::from_terms(2, 2, &[(&[1, 1], 1.0)]).unwrap();
        assert_eq!(p.gradient(&[0.0, 3.0]).unwrap().as_slice(), &[3.0, 0.0]);
    }

    #[test]
    fn product_of_linear_forms() {
        let p = multiply_linear_forms(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(p.coeffs(), &[0.0, 1.0, 0.0]);
        let p = multiply_linear_forms(&[[1.0, 1.0], [1.0, -1.0]]).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 0.0, -1.0]);
        let b = [0.25, -1.0, 3.0];
        assert_eq!(multiply_linear_forms(&[b]).unwrap().coeffs(), &b);
        let empty: [[f64; 2]; 0] = [];
        assert!(matches!(
            multiply_linear_forms(&empty),
            Err(PolyError::EmptyInput)
        ));
    }

    #[test]
    fn homogenize_rejects_high_degree() {
        let p = InhomogeneousPoly::from_terms(2, 3, &[(&[2, 1], 1.0)]).unwrap();
        assert!(matches!(
            homogenize_poly(&p, 2),
            Err(PolyError::Degree { degree: 3, target: 2 })
        ));
        // Empty top blocks do not count toward the degree.
        let q = InhomogeneousPoly::from_terms(2, 3, &[(&[1, 0], 2.0)]).unwrap();
        assert_eq!(q.degree(), Some(1));
        assert!(homogenize_poly(&q, 1).is_ok());
    }

    #[test]
    fn homogenize_already_homogeneous() {
        let p = InhomogeneousPoly::from_terms(2, 2, &[(&[1, 1], 4.0), (&[0, 2], -1.0)]).unwrap();
        let h = homogenize_poly(&p, 2).unwrap();
        let expected =
            HomogeneousPoly::from_terms(3, 2, &[(&[0, 1, 1], 4.0), (&[0, 0, 2], -1.0)]).unwrap();
        assert_eq!(h, expected);
    }

    #[test]
    fn dehomogenize_pure_power_of_x0() {
        let p = HomogeneousPoly::from_terms(3, 4, &[(&[4, 0, 0], 1.0)]).unwrap();
        let d = dehomogenize_poly(&p).unwrap();
        assert_eq!(d.degree(), Some(0));
        assert_eq!(d.coeffs()[0], 1.0);
        assert!(d.coeffs()[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn dehomogenize_needs_two_vars() {
        let p = HomogeneousPoly::from_terms(1, 2, &[(&[2], 1.0)]).unwrap();
        assert!(matches!(
            dehomogenize_poly(&p),
            Err(PolyError::TooFewVariables(1))
        ));
    }
}
