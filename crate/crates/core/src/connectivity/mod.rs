//! Skeleton connectivity from the regular triangulation of the selected
//! (dilated) medial balls together with the surface samples.

mod predicates;
mod regular;
mod skeleton;

pub use predicates::{orient3d, power_test, Sign};
pub use regular::{
    regular_triangulation, regular_triangulation_seeded, Perturbation, RegularTriangulation,
    DEFAULT_PERTURBATION_SEED,
};
pub use skeleton::{extract_skeleton, parse_skel, read_skel, write_skel, Skeleton, SkeletonVertex};

use crate::Vec3;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConnectivityError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("connection factor must be positive, got {0}")]
    NonpositiveFactor(f64),
    #[error("invalid skeleton: {0}")]
    InvalidSkeleton(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ConnectivityError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointTag {
    Inner,
    Surface,
}

/// A point with a weight in squared-length units. `source_index` refers to
/// the selected ball (inner) or the surface sample (surface) it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPoint {
    pub position: Vec3,
    pub weight: f64,
    pub tag: PointTag,
    pub source_index: usize,
}

/// A selected medial ball: center, undilated radius `r` and dilated `r'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectedBall {
    pub center: Vec3,
    pub radius: f64,
    pub dilated_radius: f64,
}

/// Inner points (weight `r'^2`, in ball order) followed by surface samples
/// (weight `delta_r^2`).
pub fn build_weighted_points(
    balls: &[SelectedBall],
    samples: &[Vec3],
    delta_r: f64,
) -> Vec<WeightedPoint> {
    let inner = balls.iter().enumerate().map(|(i, b)| WeightedPoint {
        position: b.center,
        weight: b.dilated_radius * b.dilated_radius,
        tag: PointTag::Inner,
        source_index: i,
    });
    let surface = samples.iter().enumerate().map(|(j, s)| WeightedPoint {
        position: *s,
        weight: delta_r * delta_r,
        tag: PointTag::Surface,
        source_index: j,
    });
    inner.chain(surface).collect()
}

/// Scales every inner connection radius by `factor`, i.e. inner weights
/// become `(factor * r')^2`. Surface points are returned unchanged.
pub fn adjust_connection_radii(
    points: &[WeightedPoint],
    factor: f64,
) -> Result<Vec<WeightedPoint>> {
    if !(factor > 0.0) || !factor.is_finite() {
        return Err(ConnectivityError::NonpositiveFactor(factor));
    }
    let f2 = factor * factor;
    Ok(points
        .iter()
        .map(|p| match p.tag {
            PointTag::Inner => WeightedPoint {
                weight: p.weight * f2,
                ..*p
            },
            PointTag::Surface => *p,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(r: f64) -> SelectedBall {
        SelectedBall {
            center: Vec3::zeros(),
            radius: r - 0.02,
            dilated_radius: r,
        }
    }

    #[test]
    fn weights_follow_tags() {
        let pts = build_weighted_points(&[ball(0.1), ball(0.3)], &[Vec3::x()], 0.02);
        assert_eq!(pts.len(), 3);
        assert!((pts[0].weight - 0.01).abs() < 1e-15);
        assert!((pts[1].weight - 0.09).abs() < 1e-15);
        assert_eq!(pts[1].source_index, 1);
        assert_eq!(pts[2].tag, PointTag::Surface);
        assert!((pts[2].weight - 0.0004).abs() < 1e-15);
    }

    #[test]
    fn adjust_factor_examples() {
        let pts = build_weighted_points(&[ball(0.1)], &[Vec3::x()], 0.02);
        assert_eq!(adjust_connection_radii(&pts, 1.0).unwrap(), pts);
        let twice = adjust_connection_radii(&pts, 2.0).unwrap();
        assert!((twice[0].weight - 0.04).abs() < 1e-15);
        assert_eq!(twice[1], pts[1]);
        for f in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                adjust_connection_radii(&pts, f),
                Err(ConnectivityError::NonpositiveFactor(_))
            ));
        }
    }
}
