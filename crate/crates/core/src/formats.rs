//! File formats shared by the library and the command-line tool.
//!
//! Models and results are JSON. Floating-point numbers are written with 17
//! significant digits so that reading a file back reproduces every value exactly.

use std::io;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::asc::{ClusteringResult, Diagnostics};
use crate::numerics::ToleranceConfig;
use crate::polynomials::{HomogeneousPoly, InhomogeneousPoly, PolyError};
use crate::subspaces::{
    AffineSubspace, Arrangement, LinearSubspace, SubspaceError, UnionOfAffine, UnionOfLinear,
};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{0}")]
    Invalid(String),
}

/// One member of a model file. `basis` lists the basis vectors (columns); an
/// absent `translation` means the member passes through the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceEntry {
    pub basis: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub ambient_dim: usize,
    pub affine: bool,
    pub subspaces: Vec<SubspaceEntry>,
}

impl From<&Arrangement> for ModelFile {
    fn from(model: &Arrangement) -> Self {
        let columns = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
            m.column_iter().map(|c| c.iter().copied().collect()).collect()
        };
        let subspaces = match model {
            Arrangement::Linear(u) => u
                .iter()
                .map(|s| SubspaceEntry {
                    basis: columns(s.basis()),
                    translation: None,
                })
                .collect(),
            Arrangement::Affine(u) => u
                .iter()
                .map(|a| SubspaceEntry {
                    basis: columns(a.linear_part().basis()),
                    translation: Some(a.translation().iter().copied().collect()),
                })
                .collect(),
        };
        Self {
            ambient_dim: model.ambient_dim(),
            affine: model.is_affine(),
            subspaces,
        }
    }
}

impl ModelFile {
    /// Basis vectors need not be orthonormal; they are orthonormalized and their
    /// span is kept. Translations are reduced to the complement of the span.
    pub fn to_arrangement(&self, tol: &ToleranceConfig) -> Result<Arrangement, FormatError> {
        let d = self.ambient_dim;
        if d == 0 {
            return Err(FormatError::Invalid("ambient_dim must be positive".into()));
        }
        if self.subspaces.is_empty() {
            return Err(FormatError::Invalid("the model has no subspaces".into()));
        }
        let mut linear = Vec::with_capacity(self.subspaces.len());
        let mut affine = Vec::with_capacity(self.subspaces.len());
        for (i, entry) in self.subspaces.iter().enumerate() {
            if let Some(v) = entry.basis.iter().find(|v| v.len() != d) {
                return Err(FormatError::Invalid(format!(
                    "subspace {i}: basis vector of length {}, expected {d}",
                    v.len()
                )));
            }
            let k = entry.basis.len();
            let spanning = DMatrix::from_fn(d, k, |r, c| entry.basis[c][r]);
            let s = LinearSubspace::from_basis(&spanning, tol)?;
            if s.dim() != k {
                return Err(FormatError::Invalid(format!(
                    "subspace {i}: {k} basis vectors span only {} dimensions",
                    s.dim()
                )));
            }
            match (&entry.translation, self.affine) {
                (Some(t), true) => {
                    if t.len() != d {
                        return Err(FormatError::Invalid(format!(
                            "subspace {i}: translation of length {}, expected {d}",
                            t.len()
                        )));
                    }
                    affine.push(AffineSubspace::new(s, DVector::from_column_slice(t))?);
                }
                (None, true) => {
                    let c = s.codim();
                    affine.push(AffineSubspace::from_coords(s, DVector::zeros(c))?);
                }
                (Some(_), false) => {
                    return Err(FormatError::Invalid(format!(
                        "subspace {i}: translation given in a linear model"
                    )));
                }
                (None, false) => linear.push(s),
            }
        }
        Ok(if self.affine {
            Arrangement::Affine(UnionOfAffine::new(affine, tol)?)
        } else {
            Arrangement::Linear(UnionOfLinear::new(linear, tol)?)
        })
    }
}

/// Coefficients are in the order of the matching monomial basis: grlex for a
/// homogeneous polynomial, ascending degree blocks otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub num_vars: usize,
    pub degree: usize,
    pub homogeneous: bool,
    pub coeffs: Vec<f64>,
}

/// Either kind of polynomial, as read from a [`PolynomialFile`].
#[derive(Debug, Clone, PartialEq)]
pub enum Polynomial {
    Homogeneous(HomogeneousPoly),
    Inhomogeneous(InhomogeneousPoly),
}

impl PolynomialFile {
    pub fn to_polynomial(&self) -> Result<Polynomial, FormatError> {
        Ok(if self.homogeneous {
            Polynomial::Homogeneous(HomogeneousPoly::new(
                self.num_vars,
                self.degree,
                self.coeffs.clone(),
            )?)
        } else {
            Polynomial::Inhomogeneous(InhomogeneousPoly::new(
                self.num_vars,
                self.degree,
                self.coeffs.clone(),
            )?)
        })
    }
}

impl From<&HomogeneousPoly> for PolynomialFile {
    fn from(p: &HomogeneousPoly) -> Self {
        Self {
            num_vars: p.num_vars(),
            degree: p.degree(),
            homogeneous: true,
            coeffs: p.coeffs().to_vec(),
        }
    }
}

impl From<&InhomogeneousPoly> for PolynomialFile {
    fn from(p: &InhomogeneousPoly) -> Self {
        Self {
            num_vars: p.num_vars(),
            degree: p.max_degree(),
            homogeneous: false,
            coeffs: p.coeffs().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsFile {
    pub degree: usize,
    pub s: usize,
    pub singular_values: Vec<f64>,
    pub per_point_dims: Vec<Option<usize>>,
    #[serde(default)]
    pub residuals: Vec<f64>,
    #[serde(default)]
    pub deferred: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub labels: Vec<usize>,
    pub models: ModelFile,
    pub diagnostics: DiagnosticsFile,
}

impl From<&ClusteringResult> for ResultFile {
    fn from(r: &ClusteringResult) -> Self {
        let Diagnostics {
            degree,
            s,
            singular_values,
            per_point_dims,
            residuals,
            deferred,
        } = r.diagnostics.clone();
        Self {
            labels: r.labels.clone(),
            models: ModelFile::from(&r.models),
            diagnostics: DiagnosticsFile {
                degree,
                s,
                singular_values,
                per_point_dims,
                residuals,
                deferred,
            },
        }
    }
}

/// `affine` is either one flag for every member or one flag per member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AffineFlags {
    All(bool),
    PerSubspace(Vec<bool>),
}

impl Default for AffineFlags {
    fn default() -> Self {
        AffineFlags::All(false)
    }
}

/// Description of a random model for the synthetic data generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    #[serde(alias = "D")]
    pub ambient_dim: usize,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub affine: AffineFlags,
    /// Radius of the ball the subspace coordinates are drawn from.
    #[serde(default = "default_radius")]
    pub radius: f64,
}

fn default_radius() -> f64 {
    1.0
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), FormatError> {
        if self.ambient_dim == 0 {
            return Err(FormatError::Invalid("ambient_dim must be positive".into()));
        }
        if self.dims.is_empty() {
            return Err(FormatError::Invalid("dims must not be empty".into()));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d > self.ambient_dim) {
            return Err(FormatError::Invalid(format!(
                "dimension {d} exceeds ambient_dim {}",
                self.ambient_dim
            )));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(FormatError::Invalid("radius must be positive".into()));
        }
        self.flags().map(|_| ())
    }

    pub fn flags(&self) -> Result<Vec<bool>, FormatError> {
        match &self.affine {
            AffineFlags::All(f) => Ok(vec![*f; self.dims.len()]),
            AffineFlags::PerSubspace(v) if v.len() == self.dims.len() => Ok(v.clone()),
            AffineFlags::PerSubspace(v) => Err(FormatError::Invalid(format!(
                "{} affine flags for {} subspaces",
                v.len(),
                self.dims.len()
            ))),
        }
    }
}

/// Compact JSON with every float written as `d.dddddddddddddddde±x`.
struct ExactFloats;

impl serde_json::ser::Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` with 17 significant digits per float.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String, FormatError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloats);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}
