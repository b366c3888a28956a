use super::{Aabb, GeometryError, Result, Shape};
use crate::Vec3;

/// Uniform scale + translation taking the input bbox into `[0,1]^3`:
/// `normalized = (original - origin) * scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizeTransform {
    pub origin: Vec3,
    pub scale: f64,
    /// Bounding-box diagonal of the shape before normalisation.
    pub original_diagonal: f64,
}

impl NormalizeTransform {
    pub fn identity(original_diagonal: f64) -> NormalizeTransform {
        NormalizeTransform {
            origin: Vec3::zeros(),
            scale: 1.0,
            original_diagonal,
        }
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        (p - self.origin) * self.scale
    }

    pub fn inverse(&self, p: &Vec3) -> Vec3 {
        p / self.scale + self.origin
    }

    pub fn inverse_length(&self, len: f64) -> f64 {
        len / self.scale
    }

    pub fn is_identity(&self) -> bool {
        self.scale == 1.0 && self.origin == Vec3::zeros()
    }
}

/// Maps the shape so its longest bbox axis spans exactly `[0,1]`.
pub fn normalize_shape(shape: &Shape) -> Result<(Shape, NormalizeTransform)> {
    let bb: Aabb = shape.bbox();
    let longest = bb.extent().max();
    if !(longest > 0.0 && longest.is_finite()) {
        return Err(GeometryError::EmptyShape(
            "bounding box has zero extent".into(),
        ));
    }
    let t = NormalizeTransform {
        origin: bb.min,
        scale: 1.0 / longest,
        original_diagonal: bb.diagonal(),
    };
    if t.is_identity() {
        return Ok((shape.clone(), t));
    }
    let out = match shape {
        Shape::Mesh(m) => Shape::Mesh(m.map_vertices(|p| t.apply(p))),
        Shape::Cloud(c) => Shape::Cloud(c.map_points(|p| t.apply(p), t.scale * t.scale)),
    };
    Ok((out, t))
}
