use std::collections::HashMap;

use super::PolyError;

/// A monomial `x_0^{e_0} ... x_{V-1}^{e_{V-1}}`, stored by its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Evaluates the monomial term by term.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }
}

/// Number of degree-`degree` monomials in `num_vars` variables, `C(degree + num_vars - 1, degree)`.
///
/// Fails with [`PolyError::Overflow`] instead of wrapping when the count does not fit a `usize`.
pub fn monomial_basis_size(degree: usize, num_vars: usize) -> Result<usize, PolyError> {
    if num_vars == 0 {
        return Err(PolyError::NoVariables);
    }
    // C(V-1+k, k) = C(V-2+k, k-1) * (V-1+k) / k, exact at every step.
    let mut acc: u128 = 1;
    for k in 1..=degree as u128 {
        acc = acc
            .checked_mul(num_vars as u128 - 1 + k)
            .ok_or(PolyError::Overflow { degree, num_vars })?
            / k;
    }
    usize::try_from(acc).map_err(|_| PolyError::Overflow { degree, num_vars })
}

/// Number of monomials of degree at most `max_degree` in `num_vars` variables.
pub fn affine_basis_size(max_degree: usize, num_vars: usize) -> Result<usize, PolyError> {
    // Degree <= n in D variables is in bijection with degree n in D + 1 variables.
    monomial_basis_size(max_degree, num_vars + 1)
}

/// Enumerates the degree-`degree` exponent vectors in graded lexicographic order,
/// variable 0 most significant (`x_0^n` first, `x_{V-1}^n` last).
fn grlex_exponents(degree: u32, num_vars: usize, out: &mut Vec<Vec<u32>>) {
    fn rec(prefix: &mut Vec<u32>, remaining: u32, vars_left: usize, out: &mut Vec<Vec<u32>>) {
        if vars_left == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(prefix, remaining - e, vars_left - 1, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::with_capacity(num_vars), degree, num_vars, out);
}

/// The ordered set of monomials that indexes a coefficient vector.
///
/// For a homogeneous basis this is every degree-`n` monomial in grlex order. For an
/// affine basis (`MonomialBasis::affine`) it is the degree blocks `0, 1, ..., n` in
/// ascending order, grlex within each block.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    num_vars: usize,
    degree: usize,
    exponents: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn homogeneous(degree: usize, num_vars: usize) -> Result<Self, PolyError> {
        let size = monomial_basis_size(degree, num_vars)?;
        let mut exponents = Vec::with_capacity(size);
        grlex_exponents(degree as u32, num_vars, &mut exponents);
        debug_assert_eq!(exponents.len(), size);
        Ok(Self::from_exponents(num_vars, degree, exponents))
    }

    pub fn affine(max_degree: usize, num_vars: usize) -> Result<Self, PolyError> {
        let size = affine_basis_size(max_degree, num_vars)?;
        let mut exponents = Vec::with_capacity(size);
        for k in 0..=max_degree as u32 {
            grlex_exponents(k, num_vars, &mut exponents);
        }
        Ok(Self::from_exponents(num_vars, max_degree, exponents))
    }

    fn from_exponents(num_vars: usize, degree: usize, exponents: Vec<Vec<u32>>) -> Self {
        let index = exponents
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Self {
            num_vars,
            degree,
            exponents,
            index,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self, k: usize) -> &[u32] {
        &self.exponents[k]
    }

    pub fn monomial(&self, k: usize) -> Monomial {
        Monomial::new(self.exponents[k].clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exponents.iter().map(Vec::as_slice)
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        self.index.get(exponents).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(monomial_basis_size(2, 4).unwrap(), 10);
        assert_eq!(monomial_basis_size(1, 7).unwrap(), 7);
        assert_eq!(monomial_basis_size(3, 2).unwrap(), 4);
        assert_eq!(monomial_basis_size(0, 5).unwrap(), 1);
        assert_eq!(affine_basis_size(2, 3).unwrap(), 10);
    }

    #[test]
    fn basis_size_overflow_is_an_error() {
        assert!(matches!(
            monomial_basis_size(200, 200),
            Err(PolyError::Overflow { .. })
        ));
        assert!(matches!(
            monomial_basis_size(2, 0),
            Err(PolyError::NoVariables)
        ));
    }

    #[test]
    fn grlex_order_two_vars() {
        let b = MonomialBasis::homogeneous(2, 2).unwrap();
        let got: Vec<_> = b.iter().map(<[u32]>::to_vec).collect();
        assert_eq!(got, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn grlex_order_three_vars() {
        let b = MonomialBasis::homogeneous(2, 3).unwrap();
        let got: Vec<_> = b.iter().map(<[u32]>::to_vec).collect();
        assert_eq!(
            got,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        for (k, e) in b.iter().enumerate() {
            assert_eq!(b.index_of(e), Some(k));
        }
    }

    #[test]
    fn affine_blocks_ascend() {
        let b = MonomialBasis::affine(2, 2).unwrap();
        let degrees: Vec<u32> = b.iter().map(|e| e.iter().sum()).collect();
        assert_eq!(degrees, vec![0, 1, 1, 2, 2, 2]);
        assert_eq!(b.exponents(1), &[1, 0]);
    }
}
