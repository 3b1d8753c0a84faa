//! Dense multivariate polynomials over a fixed monomial order.
//!
//! Monomials of a fixed degree are ordered graded-lexicographically with variable 0
//! most significant, so `x_0^n` comes first and `x_{V-1}^n` last. Every coefficient
//! vector, Veronese embedding and Jacobian in the crate uses this order. When a
//! polynomial lives in homogeneous coordinates, variable 0 is the homogenizing
//! coordinate `x_0`.

mod monomial;
mod poly;
mod veronese;

pub use monomial::{affine_basis_size, monomial_basis_size, Monomial, MonomialBasis};
pub use poly::{
    dehomogenize_poly, homogenize_poly, multiply_linear_forms, HomogeneousPoly, InhomogeneousPoly,
};
pub use veronese::{veronese_embed, veronese_embed_affine, veronese_jacobian};

#[derive(Debug, thiserror::Error)]
pub enum PolyError {
    #[error("monomial count C(n+V-1, n) overflows for degree {degree} in {num_vars} variables")]
    Overflow { degree: usize, num_vars: usize },
    #[error("a polynomial needs at least one variable")]
    NoVariables,
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("expected a point with {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("input contains non-finite values")]
    NonFinite,
    #[error("expected {expected} coefficients, got {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("monomial {0:?} is not part of the basis")]
    ForeignMonomial(Vec<u32>),
    #[error("at least one linear form is required")]
    EmptyInput,
    #[error("polynomial of degree {degree} cannot be homogenized to degree {target}")]
    Degree { degree: usize, target: usize },
    #[error("dehomogenization needs at least two variables, got {0}")]
    TooFewVariables(usize),
}
