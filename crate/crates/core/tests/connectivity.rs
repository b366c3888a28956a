use coverax_core::connectivity::{
    adjust_connection_radii, build_weighted_points, extract_skeleton, regular_triangulation,
    SelectedBall,
};
use coverax_core::geometry::{sample_surface, shapes};
use coverax_core::Vec3;

fn ball(center: Vec3, radius: f64, delta: f64) -> SelectedBall {
    SelectedBall {
        center,
        radius,
        dilated_radius: radius + delta,
    }
}

#[test]
fn separated_inner_points_give_no_edges() {
    // Two tiny balls far apart, separated by a wall of surface samples.
    let mut samples = Vec::new();
    for i in -3..=3 {
        for j in -3..=3 {
            samples.push(Vec3::new(0.0, i as f64 * 0.2, j as f64 * 0.2));
        }
    }
    samples.push(Vec3::new(-1.0, 0.1, 0.0));
    samples.push(Vec3::new(1.0, 0.1, 0.0));
    let balls = [
        ball(Vec3::new(-0.5, 0.0, 0.0), 0.01, 0.0),
        ball(Vec3::new(0.5, 0.0, 0.0), 0.01, 0.0),
    ];
    let points = build_weighted_points(&balls, &samples, 0.0);
    let rt = regular_triangulation(&points).unwrap();
    let skel = extract_skeleton(&rt, &points, &balls);
    assert_eq!(skel.vertices().len(), 2);
    assert!(skel.edges().is_empty());
    assert_eq!(skel.degrees(), vec![0, 0]);
}

#[test]
fn adjacent_inner_balls_share_an_edge() {
    let samples = [
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, -1.0, 0.3),
        Vec3::new(0.3, 0.0, 1.0),
        Vec3::new(0.0, 0.2, -1.0),
    ];
    let balls = [
        ball(Vec3::new(-0.2, 0.0, 0.0), 0.4, 0.02),
        ball(Vec3::new(0.2, 0.0, 0.0), 0.4, 0.02),
    ];
    let points = build_weighted_points(&balls, &samples, 0.02);
    let rt = regular_triangulation(&points).unwrap();
    let skel = extract_skeleton(&rt, &points, &balls);
    assert_eq!(skel.edges(), &[[0, 1]]);
    assert!(skel.triangles().is_empty());
}

#[test]
fn straight_tube_gives_a_path() {
    let tube = shapes::tube(1.0, 0.1, 32, 20);
    let samples = sample_surface(&tube, 1500, 3).unwrap().points;
    let balls: Vec<SelectedBall> = (0..5)
        .map(|i| ball(Vec3::new(-0.4 + 0.2 * i as f64, 0.0, 0.0), 0.1, 0.02))
        .collect();
    let points = build_weighted_points(&balls, &samples, 0.02);
    let rt = regular_triangulation(&points).unwrap();
    let skel = extract_skeleton(&rt, &points, &balls);
    let deg = skel.degrees();
    assert!(deg.iter().all(|&d| d <= 2), "{deg:?}");
    let expected: Vec<[usize; 2]> = (0..4).map(|i| [i, i + 1]).collect();
    assert_eq!(skel.edges(), &expected[..]);
}

#[test]
fn larger_connection_radii_never_lose_edges() {
    let torus = shapes::torus(1.0, 0.3, 48, 16);
    let samples = sample_surface(&torus, 800, 5).unwrap().points;
    let balls: Vec<SelectedBall> = (0..12)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / 12.0;
            ball(Vec3::new(a.cos(), a.sin(), 0.0), 0.25, 0.02)
        })
        .collect();
    let base = build_weighted_points(&balls, &samples, 0.02);
    let mut last = 0;
    for factor in [1.0, 1.5, 2.0] {
        let points = adjust_connection_radii(&base, factor).unwrap();
        let rt = regular_triangulation(&points).unwrap();
        let n = extract_skeleton(&rt, &points, &balls).edges().len();
        assert!(n >= last, "factor {factor}: {n} edges after {last}");
        last = n;
    }
    assert!(last >= 12);
}
