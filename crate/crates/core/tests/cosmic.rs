use approx::assert_abs_diff_eq;
use geqie::cosmicweb::{
    cosmic_roundtrip, histogram, normalize, spread_sigma, voxelize, voxelize_with, NormScheme,
    PointCloud, SyntheticCloud, VoxelGrid,
};
use geqie::encodings::EXACT;
use geqie::exec::Exec;
use geqie::rng::stream;
use rand::Rng;

fn uniform_cloud(n: usize, box_size: f64, seed: u64) -> PointCloud {
    let mut rng = stream(seed);
    let pts = (0..n)
        .map(|_| [0, 1, 2].map(|_| rng.random::<f64>() * box_size))
        .collect();
    PointCloud::new(pts, box_size).unwrap()
}

#[test]
fn uniform_cloud_counting() {
    let g = voxelize(&uniform_cloud(100_000, 200.0, 1), 16).unwrap();
    assert_eq!(g.total(), 100_000.0);
    assert_abs_diff_eq!(g.total() / g.len() as f64, 24.4140625, epsilon = 1e-12);
}

#[test]
fn voxelize_is_policy_independent() {
    let cloud = uniform_cloud(200_000, 1.0, 2);
    assert_eq!(
        voxelize_with(&cloud, 8, Exec::Sequential).unwrap(),
        voxelize_with(&cloud, 8, Exec::Parallel).unwrap()
    );
}

#[test]
fn exact_roundtrip_has_unit_correlation() {
    let cloud = SyntheticCloud {
        points: 20_000,
        ..Default::default()
    }
    .generate(3)
    .unwrap();
    let g = voxelize(&cloud, 8).unwrap();
    let rt = cosmic_roundtrip(&g, NormScheme::E_MEAN, EXACT, 0).unwrap();
    assert_eq!(rt.qubits, 10);
    assert_abs_diff_eq!(rt.pcc_normalized, 1.0, epsilon = 1e-9);
}

#[test]
fn synthetic_cloud_is_mostly_empty_at_high_resolution() {
    let cloud = SyntheticCloud::default().generate(0).unwrap();
    assert!(voxelize(&cloud, 256).unwrap().zero_fraction() > 0.5);
}

#[test]
fn histogram_examples() {
    let zeros = VoxelGrid::new([2, 2, 2], vec![0.0; 8]).unwrap();
    let h = histogram(&zeros, 10).unwrap();
    assert_eq!(h.counts[0], 8);
    assert_eq!(h.counts.iter().sum::<u64>(), 8);

    let mut rng = stream(4);
    let n = 4096;
    let grid = VoxelGrid::new([16, 16, 16], (0..n).map(|_| rng.random::<f64>()).collect()).unwrap();
    let normalized = normalize(&grid, NormScheme::E_MEAN).unwrap();
    let uniform = VoxelGrid::with_normalization(
        [16, 16, 16],
        grid.values().to_vec(),
        normalized.normalization(),
    )
    .unwrap();
    let h = histogram(&uniform, 4).unwrap();
    let expect = n as f64 / 4.0;
    let sd = (n as f64 * 0.25 * 0.75).sqrt();
    for &c in &h.counts {
        assert!((c as f64 - expect).abs() <= 4.0 * sd, "{:?}", h.counts);
    }
    assert_eq!(h.edges, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
}

#[test]
fn sigma_examples() {
    let half = VoxelGrid::new([2, 2, 2], vec![0., 1., 0., 1., 0., 1., 0., 1.]).unwrap();
    assert_eq!(spread_sigma(&half), 0.5);
}
