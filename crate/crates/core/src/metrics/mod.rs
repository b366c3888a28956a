//! Medial envelope reconstruction and error metrics.
//!
//! A skeleton is turned into a union of swept-ball primitives (spheres on
//! vertices, cones on edges, slabs on triangles). Errors are sampled
//! one-sided Hausdorff distances between that envelope and the input
//! surface, divided by the bounding-box diagonal.

mod envelope;
mod primitives;

pub use envelope::{envelope_distance, sample_envelope, Envelope, INSIDE_TOLERANCE};
pub use primitives::MedialPrimitive;

use crate::connectivity::Skeleton;
use crate::geometry::KdTree;
use crate::Vec3;
use rayon::prelude::*;
use thiserror::Error;

/// Default number of envelope samples for the reconstruction-to-surface side.
pub const DEFAULT_ENVELOPE_SAMPLES: usize = 100_000;

/// Default number of surface samples for the surface-to-reconstruction side.
pub const DEFAULT_SURFACE_SAMPLES: usize = 100_000;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("skeleton has no vertices")]
    EmptySkeleton,
    #[error("empty point set")]
    EmptySet,
    #[error("envelope sampling accepted {accepted} of {requested} points after {trials} trials")]
    RejectionStarvation {
        requested: usize,
        accepted: usize,
        trials: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// Surface to reconstruction.
    pub eps_s2r: f64,
    /// Reconstruction to surface.
    pub eps_r2s: f64,
    pub eps_two_sided: f64,
    pub coverage_rate: Option<f64>,
    pub bbox_diagonal: f64,
    /// `(surface samples, envelope samples)`.
    pub sample_counts: (usize, usize),
}

impl ErrorReport {
    pub fn with_coverage(self, rate: f64) -> ErrorReport {
        ErrorReport {
            coverage_rate: Some(rate),
            ..self
        }
    }
}

/// Sampled two-sided Hausdorff distance between the surface (given by dense
/// samples) and the envelope of `skeleton`, normalized by `bbox_diagonal`.
///
/// Surface to reconstruction uses the exact envelope distance of every
/// surface sample; the other side samples `m_env` envelope points and takes
/// their nearest surface sample.
pub fn hausdorff_errors(
    surface_samples: &[Vec3],
    skeleton: &Skeleton,
    bbox_diagonal: f64,
    m_env: usize,
    seed: u64,
) -> Result<ErrorReport> {
    if surface_samples.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    if !(bbox_diagonal > 0.0) {
        return Err(MetricsError::InvalidArgument(format!(
            "bounding-box diagonal must be positive, got {bbox_diagonal}"
        )));
    }
    let env = Envelope::from_skeleton(skeleton)?;
    let s2r = surface_samples
        .par_iter()
        .map(|q| env.distance(q).abs())
        .reduce(|| 0.0, f64::max);
    let env_pts = env.sample(m_env, seed)?;
    let tree = KdTree::new(surface_samples);
    let r2s = env_pts
        .par_iter()
        .map(|q| tree.nearest(q).map(|(d, _)| d).unwrap_or(0.0))
        .reduce(|| 0.0, f64::max);
    let eps_s2r = s2r / bbox_diagonal;
    let eps_r2s = r2s / bbox_diagonal;
    Ok(ErrorReport {
        eps_s2r,
        eps_r2s,
        eps_two_sided: eps_s2r.max(eps_r2s),
        coverage_rate: None,
        bbox_diagonal,
        sample_counts: (surface_samples.len(), m_env),
    })
}

/// Fraction of samples inside at least one ball `(centers[i], radii[i])`,
/// boundary included. An empty sample set counts as fully covered.
pub fn coverage_rate(samples: &[Vec3], centers: &[Vec3], radii: &[f64]) -> f64 {
    assert_eq!(centers.len(), radii.len(), "one radius per center");
    if samples.is_empty() {
        return 1.0;
    }
    let covered = samples
        .par_iter()
        .filter(|s| {
            centers
                .iter()
                .zip(radii)
                .any(|(c, &r)| (*s - c).norm() <= r)
        })
        .count();
    covered as f64 / samples.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::SkeletonVertex;

    fn ball(c: Vec3, r: f64) -> Skeleton {
        Skeleton::new(
            vec![SkeletonVertex {
                center: c,
                radius: r,
            }],
            vec![],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn coverage_examples() {
        let s = [Vec3::x(), Vec3::y(), Vec3::new(3.0, 0.0, 0.0)];
        assert_eq!(coverage_rate(&s, &[Vec3::zeros()], &[5.0]), 1.0);
        assert_eq!(coverage_rate(&s, &[], &[]), 0.0);
        assert!((coverage_rate(&s, &[Vec3::zeros()], &[1.0]) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_sided_is_the_max() {
        // Half-radius ball inside a sampled unit sphere: s2r = 0.5, r2s = 0.5.
        let mut rng = crate::rng::seeded(1);
        let pts: Vec<Vec3> = (0..2000)
            .map(|_| {
                use rand::Rng as _;
                Vec3::new(
                    rng.random::<f64>() - 0.5,
                    rng.random::<f64>() - 0.5,
                    rng.random::<f64>() - 0.5,
                )
                .normalize()
            })
            .collect();
        let diag = 2.0 * 3f64.sqrt();
        let r = hausdorff_errors(&pts, &ball(Vec3::zeros(), 0.5), diag, 500, 0).unwrap();
        assert!((r.eps_s2r - 0.5 / diag).abs() < 1e-12);
        assert!(r.eps_r2s >= 0.5 / diag - 1e-12);
        assert_eq!(r.eps_two_sided, r.eps_s2r.max(r.eps_r2s));
        assert_eq!(r.sample_counts, (2000, 500));
    }

    #[test]
    fn two_sided_follows_the_larger_side() {
        use rand::Rng as _;
        let mut rng = crate::rng::seeded(2);
        let sphere: Vec<Vec3> = (0..4000)
            .map(|_| {
                Vec3::new(
                    rng.random::<f64>() - 0.5,
                    rng.random::<f64>() - 0.5,
                    rng.random::<f64>() - 0.5,
                )
                .normalize()
            })
            .collect();
        // Small ball near the north pole: the far side of the surface dominates.
        let a =
            hausdorff_errors(&sphere, &ball(Vec3::new(0.0, 0.0, 0.9), 0.05), 1.0, 500, 0).unwrap();
        assert!(a.eps_s2r > a.eps_r2s);
        assert_eq!(a.eps_two_sided, a.eps_s2r);
        // Full ball against the upper hemisphere only: the envelope dominates.
        let upper: Vec<Vec3> = sphere.iter().copied().filter(|p| p.z >= 0.0).collect();
        let b = hausdorff_errors(&upper, &ball(Vec3::zeros(), 1.0), 1.0, 500, 0).unwrap();
        assert!(b.eps_r2s > b.eps_s2r);
        assert_eq!(b.eps_two_sided, b.eps_r2s);
    }

    #[test]
    fn argument_errors() {
        let s = ball(Vec3::zeros(), 1.0);
        assert!(matches!(
            hausdorff_errors(&[], &s, 1.0, 10, 0),
            Err(MetricsError::EmptySet)
        ));
        assert!(matches!(
            hausdorff_errors(&[Vec3::x()], &s, 0.0, 10, 0),
            Err(MetricsError::InvalidArgument(_))
        ));
        assert!(matches!(
            hausdorff_errors(&[Vec3::x()], &Skeleton::default(), 1.0, 10, 0),
            Err(MetricsError::EmptySkeleton)
        ));
    }
}
