use super::{CandidateSet, GeometryError, Result, Shape, WindingBvh};
use crate::Vec3;
use rand::Rng;
use rayon::prelude::*;

/// Trial budget for interior rejection sampling.
pub const DEFAULT_MAX_TRIALS: u64 = 10_000_000;
/// Minimum acceptance rate before sampling is declared starved.
const MIN_ACCEPTANCE: f64 = 1e-4;
/// Trials after which the acceptance rate is checked early.
const EARLY_CHECK_TRIALS: u64 = 1_000_000;
const BATCH: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateOptions {
    pub inside_threshold: f64,
    pub max_trials: u64,
}

impl Default for CandidateOptions {
    fn default() -> Self {
        CandidateOptions {
            inside_threshold: 0.5,
            max_trials: DEFAULT_MAX_TRIALS,
        }
    }
}

/// Uniform bbox rejection sampling of `n` interior points
/// (winding number > `inside_threshold`).
///
/// Fails with `RejectionStarvation` when the budget runs out before `n`
/// points are accepted, or earlier once the acceptance rate is below `1e-4`
/// after a million trials.
pub fn generate_candidates(
    shape: &Shape,
    n: usize,
    seed: u64,
    opts: &CandidateOptions,
) -> Result<CandidateSet> {
    if n == 0 {
        return Err(GeometryError::InvalidArgument(
            "candidate count must be at least 1".into(),
        ));
    }
    let bvh = WindingBvh::from_shape(shape)?;
    let bb = shape.bbox();
    let ext = bb.extent();
    let mut rng = crate::rng::seeded(seed);
    let mut accepted = Vec::with_capacity(n);
    let mut trials: u64 = 0;
    let mut batch = Vec::with_capacity(BATCH);
    while accepted.len() < n && trials < opts.max_trials {
        let take = (BATCH as u64).min(opts.max_trials - trials) as usize;
        batch.clear();
        batch.extend((0..take).map(|_| {
            let u = Vec3::new(rng.random(), rng.random(), rng.random());
            bb.min + ext.component_mul(&u)
        }));
        let inside: Vec<bool> = batch
            .par_iter()
            .map(|q| bvh.eval(q) > opts.inside_threshold)
            .collect();
        for (q, ok) in batch.iter().zip(inside) {
            trials += 1;
            if ok {
                accepted.push(*q);
                if accepted.len() == n {
                    break;
                }
            }
        }
        if trials >= EARLY_CHECK_TRIALS.min(opts.max_trials)
            && (accepted.len() as f64) < MIN_ACCEPTANCE * trials as f64
        {
            break;
        }
    }
    if accepted.len() < n {
        return Err(GeometryError::RejectionStarvation {
            requested: n,
            accepted: accepted.len(),
            trials,
        });
    }
    Ok(CandidateSet::from_points(accepted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{shapes, winding_number, TriangleMesh};

    #[test]
    fn cube_candidates_are_inside() {
        let shape = Shape::Mesh(shapes::cuboid(Vec3::zeros(), Vec3::repeat(1.0)));
        let c = generate_candidates(&shape, 100, 0, &CandidateOptions::default()).unwrap();
        assert_eq!(c.len(), 100);
        for p in &c.points {
            assert!(winding_number(&shape, p).unwrap() > 0.5);
        }
    }

    #[test]
    fn torus_candidates_reevaluate_inside() {
        let shape = Shape::Mesh(shapes::torus(0.35, 0.12, 32, 16));
        let c = generate_candidates(&shape, 500, 4, &CandidateOptions::default()).unwrap();
        for p in &c.points {
            assert!(winding_number(&shape, p).unwrap() > 0.5);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let shape = Shape::Mesh(shapes::icosphere(1.0, 2));
        let opts = CandidateOptions::default();
        let a = generate_candidates(&shape, 200, 9, &opts).unwrap();
        let b = generate_candidates(&shape, 200, 9, &opts).unwrap();
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn needle_shell_starves() {
        // Closed sliver tetrahedron: interior is ~1e-7 of its bbox volume.
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1e-3, 0.0, 0.0),
            Vec3::new(0.0, 1e-3, 0.0),
        ];
        let mesh = shapes::orient_outward(
            TriangleMesh::new(v, vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]).unwrap(),
        );
        let shape = Shape::Mesh(mesh);
        let err = generate_candidates(&shape, 10, 0, &CandidateOptions::default()).unwrap_err();
        assert!(
            matches!(err, GeometryError::RejectionStarvation { .. }),
            "{err}"
        );
    }
}
