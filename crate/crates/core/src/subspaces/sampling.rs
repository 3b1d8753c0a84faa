use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{
    AffineSubspace, Arrangement, LinearSubspace, SubspaceError, UnionOfAffine, UnionOfLinear,
};
use crate::numerics::ToleranceConfig;

/// Translation coordinates closer to the origin than this are redrawn when a nonzero
/// translation is requested.
const MIN_TRANSLATION_NORM: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub point: DVector<f64>,
    pub label: usize,
}

/// Uniform point in the centered `dim`-ball of the given radius.
fn ball_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> DVector<f64> {
    if dim == 0 {
        return DVector::zeros(0);
    }
    loop {
        let dir = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = dir.norm();
        if norm > 0.0 {
            let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
            return dir * (r / norm);
        }
    }
}

/// Draws `counts[i]` points from member `i` as `U_i y + mu_i`, `y` uniform in the
/// `d_i`-ball of radius `radius`. Samples are grouped by member, in member order.
pub fn sample_union(
    model: &Arrangement,
    counts: &[usize],
    seed: u64,
    radius: f64,
) -> Result<Vec<LabeledSample>, SubspaceError> {
    if counts.len() != model.len() {
        return Err(SubspaceError::InvalidCounts(format!(
            "{} counts for {} subspaces",
            counts.len(),
            model.len()
        )));
    }
    if counts.contains(&0) {
        return Err(SubspaceError::InvalidCounts("every count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = model.to_affine();
    let mut out = Vec::with_capacity(counts.iter().sum());
    for (label, (a, &count)) in members.iter().zip(counts).enumerate() {
        for _ in 0..count {
            let y = ball_point(&mut rng, a.dim(), radius);
            let point = a.linear_part().basis() * y + a.translation();
            out.push(LabeledSample { point, label });
        }
    }
    Ok(out)
}

/// Stacks samples into a `D x N` data matrix and a label vector.
pub fn samples_to_matrix(samples: &[LabeledSample]) -> (DMatrix<f64>, Vec<usize>) {
    let dim = samples.first().map_or(0, |s| s.point.len());
    let mut m = DMatrix::zeros(dim, samples.len());
    for (j, s) in samples.iter().enumerate() {
        m.set_column(j, &s.point);
    }
    (m, samples.iter().map(|s| s.label).collect())
}

/// A `dim`-dimensional subspace of `R^ambient` with a Gaussian-distributed basis.
pub fn random_linear_subspace<R: Rng + ?Sized>(
    rng: &mut R,
    ambient: usize,
    dim: usize,
) -> Result<LinearSubspace, SubspaceError> {
    if dim > ambient || ambient == 0 {
        return Err(SubspaceError::InvalidDimension { dim, ambient });
    }
    loop {
        let g = DMatrix::from_fn(ambient, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let s = LinearSubspace::from_basis(&g, &ToleranceConfig::default())?;
        if s.dim() == dim {
            return Ok(s);
        }
    }
}

/// Random linear part plus translation coordinates uniform in `[-1, 1]^c`; when
/// `nonzero_translation` is false the translation is zero.
pub fn random_affine_subspace<R: Rng + ?Sized>(
    rng: &mut R,
    ambient: usize,
    dim: usize,
    nonzero_translation: bool,
) -> Result<AffineSubspace, SubspaceError> {
    let linear = random_linear_subspace(rng, ambient, dim)?;
    let c = linear.codim();
    let coords = if nonzero_translation && c > 0 {
        loop {
            let a = DVector::from_fn(c, |_, _| rng.random_range(-1.0..=1.0));
            if a.norm() > MIN_TRANSLATION_NORM {
                break a;
            }
        }
    } else {
        DVector::zeros(c)
    };
    AffineSubspace::from_coords(linear, coords)
}

/// A random union with the given member dimensions. `affine[i]` asks for a nonzero
/// translation on member `i`; when no member asks, the result is a linear union.
pub fn random_arrangement(
    ambient: usize,
    dims: &[usize],
    affine: &[bool],
    seed: u64,
) -> Result<Arrangement, SubspaceError> {
    if affine.len() != dims.len() {
        return Err(SubspaceError::InvalidCounts(format!(
            "{} affine flags for {} subspaces",
            affine.len(),
            dims.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = ToleranceConfig::default();
    if affine.iter().any(|&f| f) {
        let members = dims
            .iter()
            .zip(affine)
            .map(|(&d, &f)| random_affine_subspace(&mut rng, ambient, d, f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arrangement::Affine(UnionOfAffine::new(members, &tol)?))
    } else {
        let members = dims
            .iter()
            .map(|&d| random_linear_subspace(&mut rng, ambient, d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arrangement::Linear(UnionOfLinear::new(members, &tol)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_lie_on_their_members() {
        for affine in [false, true] {
            let model = random_arrangement(4, &[2, 1, 3], &[affine; 3], 11).unwrap();
            let samples = sample_union(&model, &[5, 6, 7], 3, 1.0).unwrap();
            assert_eq!(samples.len(), 18);
            for s in &samples {
                assert!(model.distance(s.label, s.point.as_slice()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let model = random_arrangement(3, &[2, 1], &[true, true], 7).unwrap();
        let a = sample_union(&model, &[10, 10], 99, 1.0).unwrap();
        let b = sample_union(&model, &[10, 10], 99, 1.0).unwrap();
        assert_eq!(a, b);
        let c = sample_union(&model, &[10, 10], 100, 1.0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn radius_bounds_coordinates() {
        let model = random_arrangement(5, &[3], &[false], 1).unwrap();
        for s in sample_union(&model, &[200], 5, 0.5).unwrap() {
            assert!(s.point.norm() <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn bad_counts() {
        let model = random_arrangement(3, &[1, 1], &[false, false], 0).unwrap();
        assert!(sample_union(&model, &[1], 0, 1.0).is_err());
        assert!(sample_union(&model, &[1, 0], 0, 1.0).is_err());
    }

    #[test]
    fn nonzero_translations_when_requested() {
        let Arrangement::Affine(u) = random_arrangement(3, &[1, 2], &[true, false], 5).unwrap()
        else {
            panic!("expected an affine union");
        };
        assert!(u.subspaces()[0].translation().norm() > MIN_TRANSLATION_NORM);
        assert_eq!(u.subspaces()[1].translation().norm(), 0.0);
    }
}
