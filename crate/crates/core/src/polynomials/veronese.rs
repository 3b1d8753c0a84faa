use nalgebra::{DMatrix, DVector};

use super::monomial::MonomialBasis;
use super::PolyError;

fn check_point(x: &[f64], num_vars: usize) -> Result<(), PolyError> {
    if x.len() != num_vars {
        return Err(PolyError::DimensionMismatch {
            expected: num_vars,
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(PolyError::NonFinite);
    }
    Ok(())
}

/// `powers[j][k] = x_j^k` for `k <= degree`.
fn power_table(x: &[f64], degree: usize) -> Vec<Vec<f64>> {
    x.iter()
        .map(|&xi| {
            let mut row = Vec::with_capacity(degree + 1);
            let mut acc = 1.0;
            for _ in 0..=degree {
                row.push(acc);
                acc *= xi;
            }
            row
        })
        .collect()
}

impl MonomialBasis {
    /// Evaluates every monomial of the basis at `x`.
    ///
    /// For a homogeneous basis this is the Veronese map of degree `n`; for an affine
    /// basis it is the map to all monomials of degree at most `n`.
    pub fn embed(&self, x: &[f64]) -> Result<DVector<f64>, PolyError> {
        check_point(x, self.num_vars())?;
        let powers = power_table(x, self.degree());
        Ok(DVector::from_iterator(
            self.len(),
            self.iter().map(|e| {
                e.iter()
                    .zip(&powers)
                    .map(|(&ej, pj)| pj[ej as usize])
                    .product::<f64>()
            }),
        ))
    }

    /// Jacobian of [`MonomialBasis::embed`]: entry `(k, j)` is the derivative of
    /// monomial `k` with respect to `x_j`.
    pub fn jacobian(&self, x: &[f64]) -> Result<DMatrix<f64>, PolyError> {
        check_point(x, self.num_vars())?;
        let powers = power_table(x, self.degree());
        let v = self.num_vars();
        let mut jac = DMatrix::zeros(self.len(), v);
        for (k, e) in self.iter().enumerate() {
            for j in 0..v {
                if e[j] == 0 {
                    continue;
                }
                let mut d = f64::from(e[j]) * powers[j][e[j] as usize - 1];
                for (i, (&ei, pi)) in e.iter().zip(&powers).enumerate() {
                    if i != j {
                        d *= pi[ei as usize];
                    }
                }
                jac[(k, j)] = d;
            }
        }
        Ok(jac)
    }
}

/// The degree-`degree` Veronese embedding of `x`, in grlex monomial order.
pub fn veronese_embed(x: &[f64], degree: usize) -> Result<DVector<f64>, PolyError> {
    if degree == 0 {
        return Err(PolyError::ZeroDegree);
    }
    MonomialBasis::homogeneous(degree, x.len().max(1))?.embed(x)
}

/// Row `k`, column `j` holds the partial derivative of monomial `k` along `x_j`.
pub fn veronese_jacobian(x: &[f64], degree: usize) -> Result<DMatrix<f64>, PolyError> {
    if degree == 0 {
        return Err(PolyError::ZeroDegree);
    }
    MonomialBasis::homogeneous(degree, x.len().max(1))?.jacobian(x)
}

/// All monomials of degree at most `max_degree` evaluated at `x`, constant first.
///
/// Equal, up to a reordering of entries, to [`veronese_embed`] applied to `(1, x)`.
pub fn veronese_embed_affine(x: &[f64], max_degree: usize) -> Result<DVector<f64>, PolyError> {
    MonomialBasis::affine(max_degree, x.len().max(1))?.embed(x)
}
