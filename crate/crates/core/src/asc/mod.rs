//! The clustering engine.
//!
//! A union of `n` subspaces is the zero set of the degree-`n` homogeneous
//! polynomials vanishing on it. Those polynomials are fitted to the data as the
//! null space of the Veronese matrix, and at a point lying on exactly one member the
//! gradients of the fitted polynomials span that member's orthogonal complement.
//! Affine data goes through the same machinery after prepending a homogeneous
//! coordinate, and the translation of each flat is read off the gradients.

mod cluster;
mod estimate;
mod general_position;
mod metrics;
mod vanishing;

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::numerics::{NumericsError, ToleranceConfig};
use crate::polynomials::PolyError;
use crate::subspaces::SubspaceError;

pub use cluster::{cluster, cluster_affine, cluster_linear, ClusteringResult, Diagnostics};
pub use estimate::{estimate_at, estimate_subspace_at_point, PointEstimate};
pub use general_position::{
    check_general_position, check_general_position_embedded, GeneralPositionReport, ORACLE_SEED,
    ORACLE_SAMPLES_PER_MONOMIAL,
};
pub use metrics::{best_label_matching, clustering_error, MAX_MATCHED_LABELS};
pub use vanishing::{estimate_num_subspaces, fit_vanishing_basis, VanishingBasis, DEFAULT_MAX_DEGREE};

#[derive(Debug, thiserror::Error)]
pub enum AscError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error("degenerate data: {0}")]
    DegenerateData(&'static str),
    #[error("all gradients vanish at this point (empty basis or a point on an intersection)")]
    ZeroGradients,
    #[error("{points} points cannot be split into {required} clusters")]
    TooFewPoints { points: usize, required: usize },
    #[error("found {found} clusters, expected {expected}")]
    GroupingFailure { found: usize, expected: usize },
    #[error(
        "no degree up to {max_degree} has a vanishing polynomial; \
         {points} points were given and degree 1 alone needs at least {required}"
    )]
    NoVanishingDegree {
        max_degree: usize,
        points: usize,
        required: usize,
    },
    #[error("no degree-{degree} polynomial vanishes on the data")]
    EmptyVanishingSpace { degree: usize },
    #[error("{} points are not on the model (rows {rows:?})", rows.len())]
    PointsOffModel { rows: Vec<usize> },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    /// When absent, clusters are counted from the grouping.
    pub n_subspaces: Option<usize>,
    /// Defaults to `n_subspaces`, or to the smallest degree with a vanishing
    /// polynomial when both are absent.
    pub degree: Option<usize>,
    pub tolerances: ToleranceConfig,
    /// Two per-point estimates belong to the same cluster when their largest
    /// principal angle is at most this many radians.
    pub grouping_angle: f64,
    pub affine: bool,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            n_subspaces: None,
            degree: None,
            tolerances: ToleranceConfig::default(),
            grouping_angle: 1e-3,
            affine: false,
        }
    }
}

impl ClusterConfig {
    pub fn with_subspaces(n: usize) -> Self {
        Self {
            n_subspaces: Some(n),
            ..Self::default()
        }
    }

    pub fn affine(mut self, affine: bool) -> Self {
        self.affine = affine;
        self
    }

    pub fn validate(&self) -> Result<(), AscError> {
        self.tolerances.validate()?;
        if self.degree == Some(0) {
            return Err(AscError::InvalidConfig("degree must be at least 1"));
        }
        if self.n_subspaces == Some(0) {
            return Err(AscError::InvalidConfig("n_subspaces must be at least 1"));
        }
        if !(self.grouping_angle > 0.0 && self.grouping_angle < FRAC_PI_2) {
            return Err(AscError::InvalidConfig("grouping_angle must lie in (0, pi/2)"));
        }
        Ok(())
    }
}
