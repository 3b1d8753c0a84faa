use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::estimate::{estimate_at, PointEstimate};
use super::vanishing::{estimate_num_subspaces, fit_vanishing_basis, DEFAULT_MAX_DEGREE};
use super::{AscError, ClusterConfig};
use crate::numerics;
use crate::subspaces::{
    homogenize_points, recover_affine_from_gradients, Arrangement, LinearSubspace, UnionOfAffine,
    UnionOfLinear,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub degree: usize,
    /// Dimension of the fitted vanishing space.
    pub s: usize,
    /// Singular values of the row-normalized Veronese matrix, descending.
    pub singular_values: Vec<f64>,
    /// Estimated subspace dimension at each point (in the original space for affine
    /// data); `None` where every gradient vanished.
    pub per_point_dims: Vec<Option<usize>>,
    /// Distance from each point to the model it was assigned to.
    pub residuals: Vec<f64>,
    /// Points left over after grouping and assigned to the nearest model.
    pub deferred: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    /// Cluster index of each input point.
    pub labels: Vec<usize>,
    pub models: Arrangement,
    pub diagnostics: Diagnostics,
}

/// Clusters the columns of `points` (`D x N`), dispatching on `config.affine`.
pub fn cluster(points: &DMatrix<f64>, config: &ClusterConfig) -> Result<ClusteringResult, AscError> {
    if config.affine {
        cluster_affine(points, config)
    } else {
        cluster_linear(points, config)
    }
}

/// Clusters points drawn from a union of linear subspaces.
pub fn cluster_linear(
    points: &DMatrix<f64>,
    config: &ClusterConfig,
) -> Result<ClusteringResult, AscError> {
    let work = prepare(points, config)?;
    let grouping = group(&work, config)?;
    let tol = &config.tolerances;

    let mut models = Vec::with_capacity(grouping.clusters.len());
    for c in &grouping.clusters {
        let members = DMatrix::from_columns(
            &c.members.iter().map(|&j| work.units[j].clone()).collect::<Vec<_>>(),
        );
        let span = LinearSubspace::from_basis(&members, tol)?;
        // A mis-absorbed member would inflate the span; keep the seed estimate then.
        models.push(if span.dim() == c.seed.dim() {
            span
        } else {
            c.seed.clone()
        });
    }
    let models = Arrangement::Linear(UnionOfLinear::new(models, tol)?);
    finish(points, &work, grouping, models, 0)
}

/// Clusters points drawn from a union of affine subspaces by working with the
/// homogenized points `(1, x)`.
pub fn cluster_affine(
    points: &DMatrix<f64>,
    config: &ClusterConfig,
) -> Result<ClusteringResult, AscError> {
    if points.ncols() == 0 {
        return Err(AscError::DegenerateData("no points"));
    }
    let lifted = homogenize_points(points);
    let work = prepare(&lifted, config)?;
    let grouping = group(&work, config)?;
    let tol = &config.tolerances;

    let mut models = Vec::with_capacity(grouping.clusters.len());
    for c in &grouping.clusters {
        let pooled: Vec<DMatrix<f64>> = c
            .core
            .iter()
            .map(|&j| {
                work.estimates[j]
                    .as_ref()
                    .expect("core members have estimates")
                    .gradients
                    .transpose()
            })
            .collect();
        let stacked = hstack(&pooled);
        let normals = numerics::leading_subspace(&stacked, c.seed.codim())?;
        let grads: Vec<DVector<f64>> = normals.column_iter().map(|g| g.into_owned()).collect();
        models.push(recover_affine_from_gradients(&grads, tol)?);
    }
    let models = Arrangement::Affine(UnionOfAffine::new(models, tol)?);
    finish(points, &work, grouping, models, 1)
}

/// Per-point state shared by both pipelines, in the (possibly lifted) working space.
struct Work {
    degree: usize,
    s: usize,
    singular_values: Vec<f64>,
    units: Vec<DVector<f64>>,
    estimates: Vec<Option<PointEstimate>>,
}

struct Cluster {
    seed: LinearSubspace,
    /// Every point absorbed during grouping, in index order.
    members: Vec<usize>,
    /// Members whose own estimate matched the seed.
    core: Vec<usize>,
}

struct Grouping {
    clusters: Vec<Cluster>,
    labels: Vec<Option<usize>>,
}

fn prepare(points: &DMatrix<f64>, config: &ClusterConfig) -> Result<Work, AscError> {
    config.validate()?;
    let n_points = points.ncols();
    if n_points == 0 {
        return Err(AscError::DegenerateData("no points"));
    }
    if let Some(n) = config.n_subspaces {
        if n_points < n {
            return Err(AscError::TooFewPoints {
                points: n_points,
                required: n,
            });
        }
    }
    let tol = &config.tolerances;
    let degree = match (config.degree, config.n_subspaces) {
        (Some(d), _) | (None, Some(d)) => d,
        (None, None) => estimate_num_subspaces(points, DEFAULT_MAX_DEGREE, tol)?,
    };
    let basis = fit_vanishing_basis(points, degree, tol)?;
    if basis.s() == 0 {
        return Err(AscError::EmptyVanishingSpace { degree });
    }

    let units: Vec<DVector<f64>> = points
        .column_iter()
        .map(|c| {
            let norm = c.norm();
            if norm > 0.0 {
                c / norm
            } else {
                c.into_owned()
            }
        })
        .collect();
    let estimates = units
        .par_iter()
        .map(|x| match estimate_at(&basis, x.as_slice(), tol) {
            Ok(e) => Ok(Some(e)),
            Err(AscError::ZeroGradients) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(Work {
        degree,
        s: basis.s(),
        singular_values: basis.singular_values().to_vec(),
        units,
        estimates,
    })
}

/// Greedy grouping: the best-conditioned unassigned point seeds a cluster, which
/// absorbs every unassigned point whose estimate is within `grouping_angle` of the
/// seed or which lies on the seed subspace.
fn group(work: &Work, config: &ClusterConfig) -> Result<Grouping, AscError> {
    let tol = &config.tolerances;
    let mut order: Vec<usize> = (0..work.units.len())
        .filter(|&j| work.estimates[j].is_some())
        .collect();
    let conditioning = |j: usize| work.estimates[j].as_ref().map_or(0.0, |e| e.conditioning);
    // Stable sort keeps lower indices first among equal conditioning.
    order.sort_by(|&a, &b| conditioning(b).total_cmp(&conditioning(a)));

    let mut labels: Vec<Option<usize>> = vec![None; work.units.len()];
    let mut clusters: Vec<Cluster> = Vec::new();
    for &seed_idx in &order {
        if config.n_subspaces.is_some_and(|n| clusters.len() >= n) {
            break;
        }
        if labels[seed_idx].is_some() {
            continue;
        }
        let seed = work.estimates[seed_idx]
            .as_ref()
            .expect("ordered points have estimates")
            .subspace
            .clone();
        let label = clusters.len();
        let mut members = Vec::new();
        let mut core = Vec::new();
        for j in 0..work.units.len() {
            if labels[j].is_some() {
                continue;
            }
            let matches_seed = match &work.estimates[j] {
                Some(e) => {
                    e.subspace.dim() == seed.dim()
                        && seed.distance_to(&e.subspace)? <= config.grouping_angle
                }
                None => false,
            };
            let on_seed = seed.distance(work.units[j].as_slice())? <= tol.residual_tol;
            if matches_seed || on_seed {
                labels[j] = Some(label);
                members.push(j);
                if matches_seed {
                    core.push(j);
                }
            }
        }
        clusters.push(Cluster { seed, members, core });
    }

    if let Some(n) = config.n_subspaces {
        if clusters.len() != n {
            return Err(AscError::GroupingFailure {
                found: clusters.len(),
                expected: n,
            });
        }
    }
    if clusters.is_empty() {
        return Err(AscError::GroupingFailure {
            found: 0,
            expected: config.n_subspaces.unwrap_or(1),
        });
    }
    Ok(Grouping { clusters, labels })
}

/// Assigns leftovers to the nearest model and assembles the result. `lift` is the
/// number of coordinates added to the working space.
fn finish(
    points: &DMatrix<f64>,
    work: &Work,
    grouping: Grouping,
    models: Arrangement,
    lift: usize,
) -> Result<ClusteringResult, AscError> {
    let mut labels = Vec::with_capacity(points.ncols());
    let mut residuals = Vec::with_capacity(points.ncols());
    let mut deferred = Vec::new();
    for (j, col) in points.column_iter().enumerate() {
        let x = col.as_slice();
        match grouping.labels[j] {
            Some(l) => {
                labels.push(l);
                residuals.push(models.distance(l, x)?);
            }
            None => {
                let (l, d) = models.nearest(x)?;
                labels.push(l);
                residuals.push(d);
                deferred.push(j);
            }
        }
    }
    let per_point_dims = work
        .estimates
        .iter()
        .map(|e| e.as_ref().and_then(|e| e.subspace.dim().checked_sub(lift)))
        .collect();
    Ok(ClusteringResult {
        labels,
        models,
        diagnostics: Diagnostics {
            degree: work.degree,
            s: work.s,
            singular_values: work.singular_values.clone(),
            per_point_dims,
            residuals,
            deferred,
        },
    })
}

fn hstack(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    out
}
