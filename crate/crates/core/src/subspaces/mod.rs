//! Linear and affine subspaces, their unions, and the operations that relate a
//! union of affine subspaces of `R^D` to the union of linear subspaces of `R^{D+1}`
//! obtained by prepending a homogeneous coordinate.
//!
//! Every subspace keeps an orthonormal basis of itself *and* of its orthogonal
//! complement. Affine translations are always reduced to the complement of the
//! linear part, the only component that is identifiable from the flat.

mod embedding;
mod generators;
mod recovery;
mod sampling;
mod transversality;

use nalgebra::{DMatrix, DVector};

use crate::numerics::{self, NumericsError, ToleranceConfig};
use crate::polynomials::PolyError;

pub use embedding::{embed_affine_subspace, embed_affine_union, homogenize_points};
pub use generators::{affine_vanishing_generators, DEFAULT_GENERATOR_CAP};
pub use recovery::recover_affine_from_gradients;
pub use sampling::{
    random_affine_subspace, random_arrangement, random_linear_subspace, sample_union,
    samples_to_matrix, LabeledSample,
};
pub use transversality::{
    check_transversality, TransversalityReport, TransversalityWitness, WitnessReason,
    MAX_TRANSVERSALITY_SUBSPACES,
};

#[derive(Debug, thiserror::Error)]
pub enum SubspaceError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a union needs at least one subspace")]
    EmptyUnion,
    #[error("subspaces {0} and {1} coincide")]
    DuplicateSubspaces(usize, usize),
    #[error("{n} subspaces exceed the subset-enumeration cap of {cap}")]
    TooManySubspaces { n: usize, cap: usize },
    #[error("the product of codimensions exceeds the generator cap of {cap}")]
    ProductCountOverflow { cap: usize },
    #[error("all gradients are numerically zero")]
    DegenerateGradients,
    #[error("invalid sample counts: {0}")]
    InvalidCounts(String),
    #[error("subspace dimension {dim} is not valid in ambient dimension {ambient}")]
    InvalidDimension { dim: usize, ambient: usize },
}

/// A linear subspace `S` of `R^D`, stored as orthonormal bases of `S` and `S^perp`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSubspace {
    basis: DMatrix<f64>,
    complement: DMatrix<f64>,
}

impl LinearSubspace {
    /// Subspace spanned by the columns of `spanning`; the dimension is the numerical
    /// rank of `spanning`.
    pub fn from_basis(spanning: &DMatrix<f64>, tol: &ToleranceConfig) -> Result<Self, SubspaceError> {
        let basis = numerics::column_space(spanning, tol)?;
        let complement = numerics::orthonormal_complement(&basis)?;
        Ok(Self { basis, complement })
    }

    /// Subspace orthogonal to every column of `normals`.
    pub fn from_complement(
        normals: &DMatrix<f64>,
        tol: &ToleranceConfig,
    ) -> Result<Self, SubspaceError> {
        let complement = numerics::column_space(normals, tol)?;
        let basis = numerics::orthonormal_complement(&complement)?;
        Ok(Self { basis, complement })
    }

    /// Both arguments must already be orthonormal and mutually orthogonal.
    pub(crate) fn from_parts(basis: DMatrix<f64>, complement: DMatrix<f64>) -> Self {
        debug_assert_eq!(basis.nrows(), complement.nrows());
        debug_assert_eq!(basis.ncols() + complement.ncols(), basis.nrows());
        Self { basis, complement }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn codim(&self) -> usize {
        self.complement.ncols()
    }

    /// `D x d`, orthonormal columns spanning `S`.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// `D x c`, orthonormal columns spanning `S^perp`.
    pub fn complement(&self) -> &DMatrix<f64> {
        &self.complement
    }

    /// Euclidean distance from `x` to `S`, `|B^T x|`.
    pub fn distance(&self, x: &[f64]) -> Result<f64, SubspaceError> {
        self.check_dim(x.len())?;
        Ok(self.complement.tr_mul(&DVector::from_column_slice(x)).norm())
    }

    /// Largest principal angle to `other`; `pi/2` when the dimensions differ.
    pub fn distance_to(&self, other: &LinearSubspace) -> Result<f64, SubspaceError> {
        self.check_dim(other.ambient_dim())?;
        Ok(numerics::subspace_distance(&self.basis, &other.basis)?)
    }

    fn check_dim(&self, found: usize) -> Result<(), SubspaceError> {
        if found != self.ambient_dim() {
            return Err(SubspaceError::DimensionMismatch {
                expected: self.ambient_dim(),
                found,
            });
        }
        Ok(())
    }
}

/// An affine subspace `S + mu` with `mu` in `S^perp`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSubspace {
    linear: LinearSubspace,
    translation: DVector<f64>,
    /// `a` with `translation = B a`.
    coords: DVector<f64>,
}

impl AffineSubspace {
    /// Any translation is accepted; only its component in `S^perp` is kept.
    pub fn new(linear: LinearSubspace, translation: DVector<f64>) -> Result<Self, SubspaceError> {
        linear.check_dim(translation.len())?;
        let coords = linear.complement.tr_mul(&translation);
        Ok(Self::from_coords_unchecked(linear, coords))
    }

    /// `coords` are the coefficients of the translation in the complement basis.
    pub fn from_coords(linear: LinearSubspace, coords: DVector<f64>) -> Result<Self, SubspaceError> {
        if coords.len() != linear.codim() {
            return Err(SubspaceError::DimensionMismatch {
                expected: linear.codim(),
                found: coords.len(),
            });
        }
        Ok(Self::from_coords_unchecked(linear, coords))
    }

    fn from_coords_unchecked(linear: LinearSubspace, coords: DVector<f64>) -> Self {
        let translation = &linear.complement * &coords;
        Self {
            linear,
            translation,
            coords,
        }
    }

    pub fn linear_part(&self) -> &LinearSubspace {
        &self.linear
    }

    pub fn translation(&self) -> &DVector<f64> {
        &self.translation
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.linear.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn codim(&self) -> usize {
        self.linear.codim()
    }

    /// Euclidean distance from `x` to the flat.
    pub fn distance(&self, x: &[f64]) -> Result<f64, SubspaceError> {
        distance_to_affine(x, self)
    }
}

/// `|B^T (x - mu)|`, the exact Euclidean distance from `x` to the flat `a`.
pub fn distance_to_affine(x: &[f64], a: &AffineSubspace) -> Result<f64, SubspaceError> {
    a.linear.check_dim(x.len())?;
    let proj = a.linear.complement.tr_mul(&DVector::from_column_slice(x));
    Ok((proj - &a.coords).norm())
}

fn check_common_dim(dims: impl Iterator<Item = usize>) -> Result<usize, SubspaceError> {
    let mut dims = dims.peekable();
    let first = *dims.peek().ok_or(SubspaceError::EmptyUnion)?;
    for d in dims {
        if d != first {
            return Err(SubspaceError::DimensionMismatch {
                expected: first,
                found: d,
            });
        }
    }
    Ok(first)
}

/// A union of linear subspaces sharing one ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionOfLinear {
    subspaces: Vec<LinearSubspace>,
}

impl UnionOfLinear {
    /// Rejects empty unions, mixed ambient dimensions and repeated subspaces.
    pub fn new(subspaces: Vec<LinearSubspace>, tol: &ToleranceConfig) -> Result<Self, SubspaceError> {
        check_common_dim(subspaces.iter().map(LinearSubspace::ambient_dim))?;
        for i in 0..subspaces.len() {
            for j in i + 1..subspaces.len() {
                if subspaces[i].distance_to(&subspaces[j])? <= tol.angle_tol {
                    return Err(SubspaceError::DuplicateSubspaces(i, j));
                }
            }
        }
        Ok(Self { subspaces })
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspaces[0].ambient_dim()
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[LinearSubspace] {
        &self.subspaces
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LinearSubspace> {
        self.subspaces.iter()
    }
}

/// A union of affine subspaces sharing one ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionOfAffine {
    subspaces: Vec<AffineSubspace>,
}

impl UnionOfAffine {
    /// Two members coincide when their linear parts are within `angle_tol` and their
    /// translations within `residual_tol`.
    pub fn new(subspaces: Vec<AffineSubspace>, tol: &ToleranceConfig) -> Result<Self, SubspaceError> {
        check_common_dim(subspaces.iter().map(AffineSubspace::ambient_dim))?;
        for i in 0..subspaces.len() {
            for j in i + 1..subspaces.len() {
                let (a, b) = (&subspaces[i], &subspaces[j]);
                let same_linear = a.linear.distance_to(&b.linear)? <= tol.angle_tol;
                let same_offset = (&a.translation - &b.translation).norm() <= tol.residual_tol;
                if same_linear && same_offset {
                    return Err(SubspaceError::DuplicateSubspaces(i, j));
                }
            }
        }
        Ok(Self { subspaces })
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspaces[0].ambient_dim()
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[AffineSubspace] {
        &self.subspaces
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AffineSubspace> {
        self.subspaces.iter()
    }

    /// The union of the linear parts. Parallel flats share a linear part, so the
    /// result may repeat members.
    pub fn linear_parts(&self) -> UnionOfLinear {
        UnionOfLinear {
            subspaces: self.subspaces.iter().map(|a| a.linear.clone()).collect(),
        }
    }
}

/// Either kind of union; the model type consumed by sampling, clustering and the
/// file formats.
#[derive(Debug, Clone, PartialEq)]
pub enum Arrangement {
    Linear(UnionOfLinear),
    Affine(UnionOfAffine),
}

impl Arrangement {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Arrangement::Linear(u) => u.ambient_dim(),
            Arrangement::Affine(u) => u.ambient_dim(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Arrangement::Linear(u) => u.len(),
            Arrangement::Affine(u) => u.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Arrangement::Affine(_))
    }

    /// Dimension of member `i`.
    pub fn dim(&self, i: usize) -> usize {
        match self {
            Arrangement::Linear(u) => u.subspaces[i].dim(),
            Arrangement::Affine(u) => u.subspaces[i].dim(),
        }
    }

    /// Distance from `x` to member `i`.
    pub fn distance(&self, i: usize, x: &[f64]) -> Result<f64, SubspaceError> {
        match self {
            Arrangement::Linear(u) => u.subspaces[i].distance(x),
            Arrangement::Affine(u) => u.subspaces[i].distance(x),
        }
    }

    /// Index and distance of the closest member; ties go to the lower index.
    pub fn nearest(&self, x: &[f64]) -> Result<(usize, f64), SubspaceError> {
        let mut best = (0, f64::INFINITY);
        for i in 0..self.len() {
            let d = self.distance(i, x)?;
            if d < best.1 {
                best = (i, d);
            }
        }
        Ok(best)
    }

    /// Every member as an affine subspace (zero translation for linear members).
    pub fn to_affine(&self) -> Vec<AffineSubspace> {
        match self {
            Arrangement::Linear(u) => u
                .iter()
                .map(|s| {
                    let c = s.codim();
                    AffineSubspace::from_coords_unchecked(s.clone(), DVector::zeros(c))
                })
                .collect(),
            Arrangement::Affine(u) => u.subspaces.clone(),
        }
    }

    /// The union of linear subspaces the clustering engine works with: the linear
    /// union itself, or the homogenized embedding of an affine one.
    pub fn embedded(&self) -> Result<UnionOfLinear, SubspaceError> {
        match self {
            Arrangement::Linear(u) => Ok(u.clone()),
            Arrangement::Affine(u) => embed_affine_union(u),
        }
    }
}
