use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use varietal::asc::{
    check_general_position, cluster, cluster_affine, cluster_linear, clustering_error,
    estimate_num_subspaces, fit_vanishing_basis, AscError, ClusterConfig,
};
use varietal::numerics::ToleranceConfig;
use varietal::subspaces::{
    random_arrangement, random_linear_subspace, sample_union, samples_to_matrix, AffineSubspace,
    Arrangement, LinearSubspace, UnionOfAffine, UnionOfLinear,
};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn sampled(model: &Arrangement, counts: &[usize], seed: u64) -> (DMatrix<f64>, Vec<usize>) {
    samples_to_matrix(&sample_union(model, counts, seed, 1.0).unwrap())
}

#[test]
fn degree_is_estimated_from_the_data() {
    let one = random_arrangement(4, &[3], &[false], 1).unwrap();
    let (pts, _) = sampled(&one, &[30], 2);
    assert_eq!(estimate_num_subspaces(&pts, 4, &tol()).unwrap(), 1);

    let two = random_arrangement(3, &[2, 2], &[false, false], 3).unwrap();
    let (pts, _) = sampled(&two, &[30, 30], 4);
    assert_eq!(estimate_num_subspaces(&pts, 4, &tol()).unwrap(), 2);
}

#[test]
fn unknown_count_is_read_off_the_grouping() {
    // No quadric vanishes on three generic planes of R^3.
    let model = random_arrangement(3, &[2, 2, 2], &[false; 3], 5).unwrap();
    let (pts, truth) = sampled(&model, &[40, 30, 30], 6);
    let res = cluster(&pts, &ClusterConfig::default()).unwrap();
    assert_eq!(res.diagnostics.degree, 3);
    assert_eq!(res.models.len(), 3);
    assert_eq!(clustering_error(&res.labels, &truth).unwrap(), 0.0);
}

#[test]
fn three_random_linear_subspaces() {
    for seed in 0..10 {
        let model = random_arrangement(4, &[3, 2, 1], &[false; 3], seed).unwrap();
        let (pts, truth) = sampled(&model, &[60, 60, 60], 100 + seed);
        let res = cluster_linear(&pts, &ClusterConfig::with_subspaces(3)).unwrap();
        assert_eq!(clustering_error(&res.labels, &truth).unwrap(), 0.0, "seed {seed}");
        assert!(res.diagnostics.residuals.iter().all(|&r| r < 1e-9));
        assert!(res.diagnostics.deferred.is_empty());
    }
}

#[test]
fn starved_two_plane_sample_still_clusters() {
    // Two points per plane: the fit is not unique, but grouping proceeds.
    let planes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
    let pts = DMatrix::from_column_slice(
        3,
        4,
        &[0.0, 1.0, 2.0, 0.0, -1.5, 0.5, 1.0, 0.0, 0.7, -2.0, 0.0, 1.3],
    );
    let basis = fit_vanishing_basis(&pts, 2, &tol()).unwrap();
    assert!(basis.s() >= 2);
    let model = Arrangement::Linear(
        UnionOfLinear::new(
            planes
                .iter()
                .map(|b| LinearSubspace::from_complement(&DMatrix::from_column_slice(3, 1, b), &tol()))
                .collect::<Result<Vec<_>, _>>()
                .unwrap(),
            &tol(),
        )
        .unwrap(),
    );
    assert!(!check_general_position(&pts, &model, 2, &tol()).unwrap().in_general_position);
    if let Ok(res) = cluster_linear(&pts, &ClusterConfig::with_subspaces(2)) {
        assert!(res.diagnostics.s >= 2);
    }
}

#[test]
fn plane_and_line_in_space_recovered_to_high_accuracy() {
    let model = random_arrangement(3, &[2, 1], &[true, true], 77).unwrap();
    let (pts, truth) = sampled(&model, &[40, 40], 78);
    let res = cluster_affine(&pts, &ClusterConfig::with_subspaces(2).affine(true)).unwrap();
    assert_eq!(clustering_error(&res.labels, &truth).unwrap(), 0.0);
    let found = res.models.to_affine();
    let expected = model.to_affine();
    for (j, &l) in res.labels.iter().enumerate().step_by(40) {
        let (a, b) = (&found[l], &expected[truth[j]]);
        assert!(a.linear_part().distance_to(b.linear_part()).unwrap() < 1e-8);
        assert!((a.translation() - b.translation()).norm() < 1e-8);
    }
}

#[test]
fn line_through_origin_and_affine_line() {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let l1 = random_linear_subspace(&mut rng, 3, 1).unwrap();
    let l2 = random_linear_subspace(&mut rng, 3, 1).unwrap();
    let mu = l2.complement() * DVector::from_vec(vec![0.6, -0.4]);
    let union = UnionOfAffine::new(
        vec![
            AffineSubspace::new(l1, DVector::zeros(3)).unwrap(),
            AffineSubspace::new(l2, mu).unwrap(),
        ],
        &tol,
    )
    .unwrap();
    let model = Arrangement::Affine(union);
    let (pts, truth) = sampled(&model, &[30, 30], 13);
    let res = cluster_affine(&pts, &ClusterConfig::with_subspaces(2).affine(true)).unwrap();
    assert_eq!(clustering_error(&res.labels, &truth).unwrap(), 0.0);
}

#[test]
fn insufficient_and_degenerate_inputs() {
    let pts = DMatrix::from_column_slice(2, 1, &[1.0, 2.0]);
    assert!(matches!(
        cluster(&pts, &ClusterConfig::with_subspaces(3)),
        Err(AscError::TooFewPoints { points: 1, required: 3 })
    ));
    assert!(matches!(
        cluster(&DMatrix::zeros(3, 5), &ClusterConfig::with_subspaces(1)),
        Err(AscError::DegenerateData(_))
    ));
    let bad = ClusterConfig {
        grouping_angle: 2.0,
        ..ClusterConfig::with_subspaces(1)
    };
    assert!(matches!(cluster(&pts, &bad), Err(AscError::InvalidConfig(_))));
    // Twelve generic points of the plane lie on no cubic.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let scattered = DMatrix::from_fn(2, 12, |_, _| rng.random_range(-1.0..1.0));
    assert!(matches!(
        cluster(&scattered, &ClusterConfig::with_subspaces(3).affine(true)),
        Err(AscError::EmptyVanishingSpace { degree: 3 })
    ));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let model = random_arrangement(4, &[2, 1], &[true, true], 40).unwrap();
    let (pts, _) = sampled(&model, &[60, 60], 41);
    let config = ClusterConfig::with_subspaces(2).affine(true);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| cluster(&pts, &config).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| cluster(&pts, &config).unwrap());
    assert_eq!(single, many);
}
