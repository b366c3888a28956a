use coverax_core::geometry::DilationMode;
use coverax_core::selection::{
    build_coverage_matrix, compute_radii, dilate_radii, select_skeletal_points, SelectionConfig,
};
use coverax_core::Vec3;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Vec3> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn run(candidates: &[Vec3], samples: &[Vec3], delta: f64, omega: f64, v: usize) -> Vec<usize> {
    let radii = compute_radii(candidates, samples).unwrap();
    let dilated = dilate_radii(&radii, delta, DilationMode::Offset).unwrap();
    let matrix = build_coverage_matrix(candidates, &dilated, samples).unwrap();
    let config = SelectionConfig {
        target_v: v,
        omega,
        delta_r: delta,
        ..SelectionConfig::default()
    };
    select_skeletal_points(candidates, &matrix, &config)
        .unwrap()
        .0
        .selected()
        .to_vec()
}

proptest! {
    #[test]
    fn selection_is_translation_and_power_of_two_scale_invariant(
        cands in prop::collection::vec(point(), 1..15),
        samples in prop::collection::vec(point(), 1..20),
        delta in 0.01..0.2f64,
        omega in 0.0..2.0f64,
        v in 1usize..6,
        exp in -3i32..4,
    ) {
        // Power-of-two scales and the shift keep every distance comparison exact.
        let s = 2f64.powi(exp);
        let shift = Vec3::new(4.0, -8.0, 2.0);
        let map = |p: &Vec3| p * s + shift;
        let a = run(&cands, &samples, delta, omega, v);
        let c2: Vec<Vec3> = cands.iter().map(map).collect();
        let s2: Vec<Vec3> = samples.iter().map(map).collect();
        let b = run(&c2, &s2, delta * s, omega, v);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn omega_zero_first_pick_covers_most(
        cands in prop::collection::vec(point(), 1..15),
        samples in prop::collection::vec(point(), 1..20),
        delta in 0.01..0.2f64,
    ) {
        let radii = compute_radii(&cands, &samples).unwrap();
        let dilated = dilate_radii(&radii, delta, DilationMode::Offset).unwrap();
        let matrix = build_coverage_matrix(&cands, &dilated, &samples).unwrap();
        let first = run(&cands, &samples, delta, 0.0, 1)[0];
        let best = (0..cands.len()).map(|i| matrix.covered_by(i).len()).max().unwrap();
        prop_assert_eq!(matrix.covered_by(first).len(), best);
        prop_assert!((0..first).all(|i| matrix.covered_by(i).len() < best));
    }
}

#[test]
fn uniformity_spreads_points_on_a_grid() {
    // A line of candidates, each covering only its own sample: coverage ties
    // everywhere, so uniformity decides and the second pick is the far end.
    let cands: Vec<Vec3> = (0..11)
        .map(|i| Vec3::new(i as f64 * 0.1, 0.0, 0.0))
        .collect();
    let samples: Vec<Vec3> = cands
        .iter()
        .map(|c| c + Vec3::new(0.0, 0.01, 0.0))
        .collect();
    let picks = run(&cands, &samples, 0.0, 1.0, 3);
    assert_eq!(picks, vec![0, 10, 5]);
}
