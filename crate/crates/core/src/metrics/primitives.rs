use crate::Vec3;

/// Centers closer than this (relative to the primitive size) are merged.
const COINCIDENT: f64 = 1e-12;

/// Swept-ball primitive of the medial envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MedialPrimitive {
    Sphere {
        center: Vec3,
        radius: f64,
    },
    /// Linear interpolation of two balls.
    Cone {
        centers: [Vec3; 2],
        radii: [f64; 2],
    },
    /// Linear (barycentric) interpolation of three balls.
    Slab {
        centers: [Vec3; 3],
        radii: [f64; 3],
    },
}

impl MedialPrimitive {
    pub fn sphere(center: Vec3, radius: f64) -> MedialPrimitive {
        MedialPrimitive::Sphere { center, radius }
    }

    /// A cone, or the larger sphere when the centers coincide.
    pub fn cone(c0: Vec3, r0: f64, c1: Vec3, r1: f64) -> MedialPrimitive {
        let scale = 1.0 + c0.norm().max(c1.norm()) + r0.max(r1);
        if (c1 - c0).norm() <= COINCIDENT * scale {
            return MedialPrimitive::sphere(c0, r0.max(r1));
        }
        MedialPrimitive::Cone {
            centers: [c0, c1],
            radii: [r0, r1],
        }
    }

    /// A slab, or `None` when the centers are collinear: the swept volume is
    /// then the union of the three edge cones.
    pub fn slab(centers: [Vec3; 3], radii: [f64; 3]) -> Option<MedialPrimitive> {
        slab_frame(&centers, &radii)?;
        Some(MedialPrimitive::Slab { centers, radii })
    }

    /// Signed distance from `q` to the swept-ball surface (negative inside).
    pub fn distance(&self, q: &Vec3) -> f64 {
        match *self {
            MedialPrimitive::Sphere { center, radius } => (q - center).norm() - radius,
            MedialPrimitive::Cone { centers, radii } => {
                cone_distance(q, centers[0], radii[0], centers[1], radii[1])
            }
            MedialPrimitive::Slab { centers, radii } => slab_distance(q, &centers, &radii),
        }
    }

    /// A ball containing the primitive.
    pub fn bounding_ball(&self) -> (Vec3, f64) {
        match *self {
            MedialPrimitive::Sphere { center, radius } => (center, radius),
            MedialPrimitive::Cone { centers, radii } => {
                let c = (centers[0] + centers[1]) * 0.5;
                (
                    c,
                    (centers[1] - centers[0]).norm() * 0.5 + radii[0].max(radii[1]),
                )
            }
            MedialPrimitive::Slab { centers, radii } => {
                let c = (centers[0] + centers[1] + centers[2]) / 3.0;
                let r = (0..3)
                    .map(|i| (centers[i] - c).norm() + radii[i])
                    .fold(0.0, f64::max);
                (c, r)
            }
        }
    }
}

/// `min over s in [0, L]` of `|q - c(s)| - r(s)` along the segment.
///
/// With `u` the axial coordinate of `q`, `h` its distance from the axis and
/// `k = (r1 - r0) / L`, the function is convex in `s` and stationary at
/// `s = u + k h / sqrt(1 - k^2)` when `|k| < 1`; otherwise it is monotone.
pub(crate) fn cone_distance(q: &Vec3, c0: Vec3, r0: f64, c1: Vec3, r1: f64) -> f64 {
    let d = c1 - c0;
    let len = d.norm();
    let f_end0 = (q - c0).norm() - r0;
    let f_end1 = (q - c1).norm() - r1;
    let mut best = f_end0.min(f_end1);
    if len == 0.0 {
        return best;
    }
    let axis = d / len;
    let w = q - c0;
    let u = w.dot(&axis);
    let h = (w - axis * u).norm();
    let k = (r1 - r0) / len;
    if k.abs() < 1.0 {
        let s = (u + k * h / (1.0 - k * k).sqrt()).clamp(0.0, len);
        let f = ((u - s).powi(2) + h * h).sqrt() - (r0 + k * s);
        best = best.min(f);
    }
    best
}

/// Orthonormal in-plane basis of the three centers plus the in-plane radius
/// gradient. `None` for (nearly) collinear centers.
pub(crate) struct SlabFrame {
    pub e1: Vec3,
    pub e2: Vec3,
    pub normal: Vec3,
    /// Radius gradient in (e1, e2) coordinates.
    pub grad: [f64; 2],
    /// Centers 1 and 2 in (e1, e2) coordinates relative to center 0.
    pub p1: [f64; 2],
    pub p2: [f64; 2],
}

pub(crate) fn slab_frame(c: &[Vec3; 3], r: &[f64; 3]) -> Option<SlabFrame> {
    let a = c[1] - c[0];
    let b = c[2] - c[0];
    let scale = a.norm().max(b.norm());
    let n = a.cross(&b);
    if !(scale > 0.0) || n.norm() <= COINCIDENT * scale * scale * 1e3 {
        return None;
    }
    let normal = n.normalize();
    let e1 = a / a.norm();
    let e2 = normal.cross(&e1);
    let p1 = [a.dot(&e1), 0.0];
    let p2 = [b.dot(&e1), b.dot(&e2)];
    let g1 = (r[1] - r[0]) / p1[0];
    let g2 = (r[2] - r[0] - g1 * p2[0]) / p2[1];
    Some(SlabFrame {
        e1,
        e2,
        normal,
        grad: [g1, g2],
        p1,
        p2,
    })
}

/// `min over the triangle` of `|q - c(y)| - r(y)`. The unconstrained
/// minimizer is `y = q' + g h / sqrt(1 - |g|^2)` (with `q'` the projection of
/// `q` onto the center plane and `h` its height); if it falls outside the
/// triangle, convexity puts the minimum on one of the edge cones.
pub(crate) fn slab_distance(q: &Vec3, c: &[Vec3; 3], r: &[f64; 3]) -> f64 {
    let edges = || {
        cone_distance(q, c[0], r[0], c[1], r[1])
            .min(cone_distance(q, c[1], r[1], c[2], r[2]))
            .min(cone_distance(q, c[0], r[0], c[2], r[2]))
    };
    let Some(fr) = slab_frame(c, r) else {
        return edges();
    };
    let g2 = fr.grad[0] * fr.grad[0] + fr.grad[1] * fr.grad[1];
    if g2 < 1.0 {
        let w = q - c[0];
        let h = w.dot(&fr.normal).abs();
        let t = h / (1.0 - g2).sqrt();
        let y = [
            w.dot(&fr.e1) + fr.grad[0] * t,
            w.dot(&fr.e2) + fr.grad[1] * t,
        ];
        // Barycentric coordinates of y with respect to (0, p1, p2).
        let det = fr.p1[0] * fr.p2[1] - fr.p2[0] * fr.p1[1];
        let l1 = (y[0] * fr.p2[1] - fr.p2[0] * y[1]) / det;
        let l2 = (fr.p1[0] * y[1] - y[0] * fr.p1[1]) / det;
        let l0 = 1.0 - l1 - l2;
        if l0 >= 0.0 && l1 >= 0.0 && l2 >= 0.0 {
            let cy = c[0] * l0 + c[1] * l1 + c[2] * l2;
            let ry = r[0] * l0 + r[1] * l1 + r[2] * l2;
            return (q - cy).norm() - ry;
        }
    }
    edges()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_and_cylinder_examples() {
        let s = MedialPrimitive::sphere(Vec3::zeros(), 1.0);
        assert_eq!(s.distance(&Vec3::new(2.0, 0.0, 0.0)), 1.0);
        let c = MedialPrimitive::cone(Vec3::zeros(), 1.0, Vec3::new(2.0, 0.0, 0.0), 1.0);
        assert!(c.distance(&Vec3::new(1.0, 1.0, 0.0)).abs() < 1e-15);
        assert!((c.distance(&Vec3::new(1.0, 0.0, 0.0)) + 1.0).abs() < 1e-15);
        assert!((c.distance(&Vec3::new(4.0, 0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tapered_cone_lateral_distance() {
        // Balls r=1 at 0 and r=0.5 at x=2: the tangent line has slope
        // -1/sqrt(15) and distance along the normal is measured exactly.
        let c = MedialPrimitive::cone(Vec3::zeros(), 1.0, Vec3::new(2.0, 0.0, 0.0), 0.5);
        let q = Vec3::new(1.0, 2.0, 0.0);
        let s = 0.25f64;
        let n = Vec3::new(s, (1.0 - s * s).sqrt(), 0.0);
        // Plane through tangent point c0 + r0 n with normal n.
        let expected = (q - n).dot(&n);
        assert!((c.distance(&q) - expected).abs() < 1e-12);
    }

    #[test]
    fn contained_sphere_cone_uses_larger_ball() {
        let c = MedialPrimitive::cone(Vec3::zeros(), 2.0, Vec3::new(0.5, 0.0, 0.0), 0.1);
        let q = Vec3::new(0.0, 3.0, 0.0);
        assert!((c.distance(&q) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn demotions() {
        let c = MedialPrimitive::cone(Vec3::zeros(), 0.3, Vec3::zeros(), 0.5);
        assert_eq!(c, MedialPrimitive::sphere(Vec3::zeros(), 0.5));
        let line = [Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0];
        assert!(MedialPrimitive::slab(line, [0.1; 3]).is_none());
        assert!((slab_distance(&Vec3::new(1.0, 1.0, 0.0), &line, &[0.1; 3]) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn flat_slab_is_offset_triangle() {
        let c = [Vec3::zeros(), Vec3::x(), Vec3::y()];
        let s = MedialPrimitive::slab(c, [0.1; 3]).unwrap();
        assert!((s.distance(&Vec3::new(0.2, 0.2, 1.0)) - 0.9).abs() < 1e-12);
        assert!((s.distance(&Vec3::new(0.2, 0.2, -0.5)) - 0.4).abs() < 1e-12);
        // Beyond the hypotenuse the nearest point is on an edge cylinder.
        let q = Vec3::new(1.0, 1.0, 0.0);
        assert!((s.distance(&q) - (0.5f64.sqrt() - 0.1)).abs() < 1e-12);
    }
}
