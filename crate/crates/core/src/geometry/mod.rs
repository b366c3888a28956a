//! Shape ingestion, surface sampling, inside tests and nearest-neighbour
//! queries.

mod candidates;
pub mod io;
mod kdtree;
mod normalize;
mod sampling;
pub mod shapes;
mod winding;

pub use candidates::{generate_candidates, CandidateOptions, DEFAULT_MAX_TRIALS};
pub use kdtree::KdTree;
pub use normalize::{normalize_shape, NormalizeTransform};
pub use sampling::{sample_cloud, sample_surface};
pub use winding::{
    estimate_point_areas, solid_angle, winding_number, winding_number_exact, WindingBvh,
    DEFAULT_AREA_NEIGHBOURS,
};

use crate::Vec3;
use thiserror::Error;

/// Triangles with area at or below this are dropped at construction.
pub const DEGENERATE_AREA: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("shape is empty or degenerate: {0}")]
    EmptyShape(String),
    #[error("point cloud has {0} points, at least 4 are required")]
    TooFewPoints(usize),
    #[error("point cloud has no normals; supply normals or a candidate file")]
    MissingNormals,
    #[error("nearest-neighbour query against an empty point set")]
    EmptySet,
    #[error("interior rejection sampling starved: accepted {accepted} of {requested} after {trials} trials")]
    RejectionStarvation {
        requested: usize,
        accepted: usize,
        trials: u64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Vec3>) -> Option<Aabb> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut bb = Aabb {
            min: first,
            max: first,
        };
        for p in it {
            bb.min = bb.min.inf(p);
            bb.max = bb.max.sup(p);
        }
        Some(bb)
    }

    pub fn extent(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn diagonal(&self) -> f64 {
        self.extent().norm()
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }
}

/// Indexed triangle set. Triangle soups are accepted as-is; only zero-area
/// triangles are removed.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    dropped_degenerate: usize,
}

impl TriangleMesh {
    /// Builds a mesh, dropping triangles whose area is at most
    /// [`DEGENERATE_AREA`]. Fails on out-of-range indices or when no valid
    /// triangle remains.
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<TriangleMesh> {
        let n = vertices.len();
        if let Some(bad) = triangles.iter().flatten().find(|&&i| i >= n) {
            return Err(GeometryError::EmptyShape(format!(
                "triangle index {bad} out of range for {n} vertices"
            )));
        }
        let total = triangles.len();
        let kept: Vec<[usize; 3]> = triangles
            .into_iter()
            .filter(|t| {
                triangle_area(&vertices[t[0]], &vertices[t[1]], &vertices[t[2]]) > DEGENERATE_AREA
            })
            .collect();
        if kept.is_empty() {
            return Err(GeometryError::EmptyShape("no valid triangles".into()));
        }
        let dropped_degenerate = total - kept.len();
        Ok(TriangleMesh {
            vertices,
            triangles: kept,
            dropped_degenerate,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Number of degenerate triangles removed at construction.
    pub fn dropped_degenerate(&self) -> usize {
        self.dropped_degenerate
    }

    pub fn corners(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        triangle_area(&a, &b, &c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.area(t)).sum()
    }

    /// Bounding box of the referenced vertices.
    pub fn bbox(&self) -> Aabb {
        Aabb::from_points(self.triangles.iter().flatten().map(|&i| &self.vertices[i]))
            .expect("mesh has at least one triangle")
    }

    pub fn bbox_diagonal(&self) -> f64 {
        self.bbox().diagonal()
    }

    pub fn map_vertices(&self, f: impl Fn(&Vec3) -> Vec3) -> TriangleMesh {
        TriangleMesh {
            vertices: self.vertices.iter().map(f).collect(),
            triangles: self.triangles.clone(),
            dropped_degenerate: self.dropped_degenerate,
        }
    }
}

pub fn triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

/// Point cloud with optional unit normals and optional per-point area weights.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedPointCloud {
    points: Vec<Vec3>,
    normals: Option<Vec<Vec3>>,
    areas: Option<Vec<f64>>,
}

impl OrientedPointCloud {
    /// Normals, when given, are normalised; a zero-length normal is an error.
    pub fn new(points: Vec<Vec3>, normals: Option<Vec<Vec3>>) -> Result<OrientedPointCloud> {
        if points.len() < 4 {
            return Err(GeometryError::TooFewPoints(points.len()));
        }
        let normals = match normals {
            None => None,
            Some(ns) => {
                if ns.len() != points.len() {
                    return Err(GeometryError::InvalidArgument(format!(
                        "{} normals for {} points",
                        ns.len(),
                        points.len()
                    )));
                }
                let mut out = Vec::with_capacity(ns.len());
                for (i, n) in ns.into_iter().enumerate() {
                    let len = n.norm();
                    if !(len > 0.0 && len.is_finite()) {
                        return Err(GeometryError::InvalidArgument(format!(
                            "normal {i} has zero or non-finite length"
                        )));
                    }
                    out.push(n / len);
                }
                Some(out)
            }
        };
        Ok(OrientedPointCloud {
            points,
            normals,
            areas: None,
        })
    }

    /// Attaches explicit per-point area weights.
    pub fn with_areas(mut self, areas: Vec<f64>) -> Result<OrientedPointCloud> {
        if areas.len() != self.points.len() {
            return Err(GeometryError::InvalidArgument(format!(
                "{} areas for {} points",
                areas.len(),
                self.points.len()
            )));
        }
        self.areas = Some(areas);
        Ok(self)
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn normals(&self) -> Option<&[Vec3]> {
        self.normals.as_deref()
    }

    pub fn areas(&self) -> Option<&[f64]> {
        self.areas.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::from_points(&self.points).expect("cloud has at least 4 points")
    }

    pub(crate) fn map_points(
        &self,
        f: impl Fn(&Vec3) -> Vec3,
        area_scale: f64,
    ) -> OrientedPointCloud {
        OrientedPointCloud {
            points: self.points.iter().map(f).collect(),
            normals: self.normals.clone(),
            areas: self
                .areas
                .as_ref()
                .map(|a| a.iter().map(|x| x * area_scale).collect()),
        }
    }
}

/// Any input the pipeline accepts.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Mesh(TriangleMesh),
    Cloud(OrientedPointCloud),
}

impl Shape {
    pub fn bbox(&self) -> Aabb {
        match self {
            Shape::Mesh(m) => m.bbox(),
            Shape::Cloud(c) => c.bbox(),
        }
    }
}

impl From<TriangleMesh> for Shape {
    fn from(m: TriangleMesh) -> Self {
        Shape::Mesh(m)
    }
}

impl From<OrientedPointCloud> for Shape {
    fn from(c: OrientedPointCloud) -> Self {
        Shape::Cloud(c)
    }
}

/// Where a surface sample came from.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleSource {
    /// Triangle index per sample.
    Mesh { faces: Vec<usize> },
    /// Input point index per sample.
    Cloud { indices: Vec<usize> },
}

/// The boundary sample set used for radii and coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSamples {
    pub points: Vec<Vec3>,
    pub source: SampleSource,
    pub seed: u64,
}

impl SurfaceSamples {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DilationMode {
    #[default]
    Offset,
    Scale,
}

impl std::str::FromStr for DilationMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "offset" => Ok(DilationMode::Offset),
            "scale" => Ok(DilationMode::Scale),
            other => Err(format!(
                "unknown dilation mode `{other}` (expected offset|scale)"
            )),
        }
    }
}

impl std::fmt::Display for DilationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DilationMode::Offset => "offset",
            DilationMode::Scale => "scale",
        })
    }
}

/// Interior candidate points with their raw and dilated radii.
///
/// `generate_candidates` fills only `points`; the radii are attached by
/// [`CandidateSet::with_radii`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CandidateSet {
    pub points: Vec<Vec3>,
    pub radii: Vec<f64>,
    pub dilated_radii: Vec<f64>,
    pub dilation_mode: DilationMode,
    pub delta_r: f64,
}

impl CandidateSet {
    pub fn from_points(points: Vec<Vec3>) -> CandidateSet {
        CandidateSet {
            points,
            ..CandidateSet::default()
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_radii(
        mut self,
        radii: Vec<f64>,
        dilated_radii: Vec<f64>,
        dilation_mode: DilationMode,
        delta_r: f64,
    ) -> CandidateSet {
        assert_eq!(radii.len(), self.points.len());
        assert_eq!(dilated_radii.len(), self.points.len());
        self.radii = radii;
        self.dilated_radii = dilated_radii;
        self.dilation_mode = dilation_mode;
        self.delta_r = delta_r;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_triangles_are_dropped_and_counted() {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
        ];
        let mesh = TriangleMesh::new(v, vec![[0, 1, 2], [0, 1, 3]]).unwrap();
        assert_eq!(mesh.triangles().len(), 1);
        assert_eq!(mesh.dropped_degenerate(), 1);
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let v = vec![Vec3::zeros(), Vec3::x(), Vec3::y()];
        assert!(TriangleMesh::new(v, vec![[0, 1, 3]]).is_err());
    }

    #[test]
    fn all_degenerate_is_empty_shape() {
        let v = vec![Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0];
        assert!(matches!(
            TriangleMesh::new(v, vec![[0, 1, 2]]),
            Err(GeometryError::EmptyShape(_))
        ));
    }

    #[test]
    fn cloud_normals_are_normalised() {
        let pts = vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()];
        let ns = vec![
            Vec3::x() * 3.0,
            Vec3::y() * 0.5,
            Vec3::z(),
            Vec3::new(1.0, 1.0, 0.0),
        ];
        let c = OrientedPointCloud::new(pts, Some(ns)).unwrap();
        for n in c.normals().unwrap() {
            assert!((n.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn three_points_is_too_few() {
        let pts = vec![Vec3::zeros(), Vec3::x(), Vec3::y()];
        assert!(matches!(
            OrientedPointCloud::new(pts, None),
            Err(GeometryError::TooFewPoints(3))
        ));
    }
}
