mod data;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use varietal::asc::{
    best_label_matching, check_general_position, check_general_position_embedded, cluster,
    clustering_error, ClusterConfig, GeneralPositionReport,
};
use varietal::formats::{
    ModelFile, Polynomial, PolynomialFile, ResultFile, SynthSpec,
};
use varietal::numerics::ToleranceConfig;
use varietal::subspaces::{
    affine_vanishing_generators, check_transversality, embed_affine_union, random_arrangement,
    sample_union, samples_to_matrix, AffineSubspace, Arrangement, LinearSubspace, UnionOfAffine,
    DEFAULT_GENERATOR_CAP,
};

use crate::data::{emit_json, read_json, read_points, write_points};
use crate::error::CliError;

/// Environment variable capping the number of worker threads.
const THREADS_ENV: &str = "VARIETAL_THREADS";

/// Algebraic subspace clustering.
#[derive(Parser)]
#[command(name = "varietal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Relative threshold for numerical rank decisions.
    #[arg(long)]
    rank_rtol: Option<f64>,
    /// Largest principal angle (radians) at which two subspaces count as equal.
    #[arg(long)]
    angle_tol: Option<f64>,
    /// Largest distance at which a point counts as lying on a subspace.
    #[arg(long)]
    residual_tol: Option<f64>,
}

impl TolArgs {
    fn config(self) -> Result<ToleranceConfig, CliError> {
        let mut tol = ToleranceConfig::default();
        if let Some(v) = self.rank_rtol {
            tol.rank_rtol = v;
        }
        if let Some(v) = self.angle_tol {
            tol.angle_tol = v;
        }
        if let Some(v) = self.residual_tol {
            tol.residual_tol = v;
        }
        tol.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(tol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cluster the points of a CSV file and write the result as JSON.
    Cluster {
        points: PathBuf,
        /// Number of subspaces; estimated from the data when absent.
        #[arg(long)]
        n: Option<usize>,
        /// Treat the data as a union of affine subspaces.
        #[arg(long)]
        affine: bool,
        /// Degree of the fitted polynomials; defaults to --n.
        #[arg(long)]
        degree: Option<usize>,
        /// The last column holds labels, which are ignored.
        #[arg(long)]
        labeled: bool,
        /// Largest angle (radians) between point estimates of one cluster.
        #[arg(long)]
        grouping_angle: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Draw a random model and labeled samples from it.
    Synth {
        /// JSON: {"ambient_dim": D, "dims": [..], "affine": bool | [bool, ..], "radius": r}.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        per_subspace: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_points: PathBuf,
        #[arg(long)]
        out_model: PathBuf,
    },
    /// Check that a model is transversal.
    CheckTransversal {
        model: PathBuf,
        /// Check the homogenized embedding instead of the linear parts.
        #[arg(long)]
        embed: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Check that points on a model are in general position for degree n.
    CheckGenpos {
        points: PathBuf,
        model: PathBuf,
        /// Degree; defaults to the number of subspaces in the model.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        labeled: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Compare a clustering result with ground-truth labels.
    Eval {
        result: PathBuf,
        /// Labeled points CSV.
        truth: PathBuf,
        /// Ground-truth model; fitted from the labeled points when absent.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Evaluate a polynomial file at a point.
    Poly {
        poly: PathBuf,
        /// Comma-separated coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
    },
    /// Print the product polynomials that vanish on a model.
    Generators {
        model: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Serialize)]
struct GenposOutput {
    #[serde(flatten)]
    report: GeneralPositionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    embedded: Option<GeneralPositionReport>,
}

#[derive(Serialize)]
struct EvalOutput {
    clustering_error: f64,
    /// Largest principal angle between each found model and its matched truth.
    per_cluster_angles: Vec<Option<f64>>,
    /// Translation difference, measured in the complement of the truth.
    translation_errors: Vec<Option<f64>>,
}

#[derive(Serialize)]
struct PolyOutput {
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gradient: Option<Vec<f64>>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Cluster {
            points,
            n,
            affine,
            degree,
            labeled,
            grouping_angle,
            out,
            tol,
        } => {
            let mut config = ClusterConfig {
                n_subspaces: n,
                degree,
                tolerances: tol.config()?,
                affine,
                ..ClusterConfig::default()
            };
            if let Some(g) = grouping_angle {
                config.grouping_angle = g;
            }
            if let Some(out) = &out {
                check_writable(out)?;
            }
            let pts = read_points(&points, labeled)?;
            let res = cluster(&pts.matrix, &config)?;
            emit_json(&ResultFile::from(&res), out.as_deref())
        }
        Command::Synth {
            spec,
            per_subspace,
            seed,
            out_points,
            out_model,
        } => {
            let spec: SynthSpec = read_json(&spec)?;
            spec.validate()?;
            if per_subspace == 0 {
                return Err(CliError::Usage("--per-subspace must be at least 1".into()));
            }
            check_writable(&out_points)?;
            check_writable(&out_model)?;
            let model = random_arrangement(spec.ambient_dim, &spec.dims, &spec.flags()?, seed)?;
            let counts = vec![per_subspace; spec.dims.len()];
            let samples = sample_union(&model, &counts, seed.wrapping_add(1), spec.radius)?;
            let (pts, labels) = samples_to_matrix(&samples);
            write_points(&out_points, &pts, Some(&labels))?;
            emit_json(&ModelFile::from(&model), Some(&out_model))
        }
        Command::CheckTransversal { model, embed, tol } => {
            let tol = tol.config()?;
            let model = read_json::<ModelFile>(&model)?.to_arrangement(&tol)?;
            let union = match (&model, embed) {
                (Arrangement::Affine(u), true) => embed_affine_union(u)?,
                (Arrangement::Affine(u), false) => u.linear_parts(),
                (Arrangement::Linear(u), _) => u.clone(),
            };
            emit_json(&check_transversality(&union, &tol)?, None)
        }
        Command::CheckGenpos {
            points,
            model,
            n,
            labeled,
            tol,
        } => {
            let tol = tol.config()?;
            let model = read_json::<ModelFile>(&model)?.to_arrangement(&tol)?;
            let pts = read_points(&points, labeled)?;
            if pts.matrix.nrows() != model.ambient_dim() {
                return Err(CliError::Usage(format!(
                    "points have {} coordinates, the model lives in dimension {}",
                    pts.matrix.nrows(),
                    model.ambient_dim()
                )));
            }
            let n = n.unwrap_or(model.len());
            let report = check_general_position(&pts.matrix, &model, n, &tol)?;
            let embedded = match &model {
                Arrangement::Affine(u) => {
                    Some(check_general_position_embedded(&pts.matrix, u, n, &tol)?)
                }
                Arrangement::Linear(_) => None,
            };
            emit_json(&GenposOutput { report, embedded }, None)
        }
        Command::Eval {
            result,
            truth,
            model,
            tol,
        } => {
            let tol = tol.config()?;
            let result: ResultFile = read_json(&result)?;
            let truth_pts = read_points(&truth, true)?;
            let labels = truth_pts.labels.as_ref().expect("read with labels");
            if labels.len() != result.labels.len() {
                return Err(CliError::Usage(format!(
                    "{} labels in the result, {} in the truth file",
                    result.labels.len(),
                    labels.len()
                )));
            }
            let found = result.models.to_arrangement(&tol)?;
            let reference = match model {
                Some(path) => read_json::<ModelFile>(&path)?.to_arrangement(&tol)?.to_affine(),
                None => fit_reference(&truth_pts.matrix, labels, found.is_affine(), &tol)?,
            };
            emit_json(&evaluate(&result.labels, labels, &found, &reference)?, None)
        }
        Command::Poly { poly, at } => {
            let file: PolynomialFile = read_json(&poly)?;
            let out = match file.to_polynomial()? {
                Polynomial::Homogeneous(p) => PolyOutput {
                    value: p.evaluate(&at).map_err(usage)?,
                    gradient: Some(p.gradient(&at).map_err(usage)?.iter().copied().collect()),
                },
                Polynomial::Inhomogeneous(p) => PolyOutput {
                    value: p.evaluate(&at).map_err(usage)?,
                    gradient: None,
                },
            };
            emit_json(&out, None)
        }
        Command::Generators { model, tol } => {
            let tol = tol.config()?;
            let model = read_json::<ModelFile>(&model)?.to_arrangement(&tol)?;
            let union = UnionOfAffine::new(model.to_affine(), &tol)?;
            let gens = affine_vanishing_generators(&union, DEFAULT_GENERATOR_CAP)?;
            let files: Vec<PolynomialFile> = gens.iter().map(PolynomialFile::from).collect();
            emit_json(&files, None)
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

/// Output paths are validated before any computation.
fn check_writable(path: &std::path::Path) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => std::path::Path::new("."),
    };
    if dir.is_dir() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{}: directory does not exist",
            path.display()
        )))
    }
}

/// Ground-truth subspaces fitted to the labeled points: the span of each class,
/// or its affine hull.
fn fit_reference(
    points: &DMatrix<f64>,
    labels: &[usize],
    affine: bool,
    tol: &ToleranceConfig,
) -> Result<Vec<AffineSubspace>, CliError> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut out = Vec::with_capacity(k);
    for class in 0..k {
        let idx: Vec<usize> = (0..labels.len()).filter(|&j| labels[j] == class).collect();
        if idx.is_empty() {
            return Err(CliError::Usage(format!("truth label {class} has no points")));
        }
        let members = points.select_columns(&idx);
        let sub = if affine {
            let mean: DVector<f64> = members.column_mean();
            let mut diffs = members.clone();
            for mut c in diffs.column_iter_mut() {
                c -= &mean;
            }
            AffineSubspace::new(LinearSubspace::from_basis(&diffs, tol)?, mean)?
        } else {
            let s = LinearSubspace::from_basis(&members, tol)?;
            let c = s.codim();
            AffineSubspace::from_coords(s, DVector::zeros(c))?
        };
        out.push(sub);
    }
    Ok(out)
}

fn evaluate(
    predicted: &[usize],
    truth: &[usize],
    found: &Arrangement,
    reference: &[AffineSubspace],
) -> Result<EvalOutput, CliError> {
    let clustering_error = clustering_error(predicted, truth)?;
    let map = best_label_matching(predicted, truth)?;
    let found = found.to_affine();
    let mut per_cluster_angles = Vec::with_capacity(found.len());
    let mut translation_errors = Vec::with_capacity(found.len());
    for (k, a) in found.iter().enumerate() {
        match map.get(k).copied().flatten().and_then(|t| reference.get(t)) {
            Some(b) => {
                per_cluster_angles.push(Some(a.linear_part().distance_to(b.linear_part())?));
                let diff = a.translation() - b.translation();
                translation_errors.push(Some(b.linear_part().complement().tr_mul(&diff).norm()));
            }
            None => {
                per_cluster_angles.push(None);
                translation_errors.push(None);
            }
        }
    }
    Ok(EvalOutput {
        clustering_error,
        per_cluster_angles,
        translation_errors,
    })
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(usage)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
