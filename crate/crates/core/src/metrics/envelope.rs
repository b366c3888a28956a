use super::primitives::{slab_frame, MedialPrimitive};
use super::{MetricsError, Result};
use crate::connectivity::Skeleton;
use crate::Vec3;
use rand::Rng as _;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Samples on another primitive's surface count as interior only below this.
pub const INSIDE_TOLERANCE: f64 = -1e-9;

/// Rejection sampling gives up after this many draws per requested point.
const MAX_TRIALS_PER_POINT: usize = 200;

/// The union of all skeleton primitives: a sphere per vertex, a cone per edge
/// and a slab per triangle.
#[derive(Debug, Clone)]
pub struct Envelope {
    prims: Vec<MedialPrimitive>,
    bounds: Vec<(Vec3, f64)>,
}

impl Envelope {
    pub fn from_skeleton(skeleton: &Skeleton) -> Result<Envelope> {
        if skeleton.is_empty() {
            return Err(MetricsError::EmptySkeleton);
        }
        let v = skeleton.vertices();
        let mut prims: Vec<MedialPrimitive> = v
            .iter()
            .map(|v| MedialPrimitive::sphere(v.center, v.radius))
            .collect();
        for e in skeleton.edges() {
            let (a, b) = (v[e[0]], v[e[1]]);
            prims.push(MedialPrimitive::cone(
                a.center, a.radius, b.center, b.radius,
            ));
        }
        for t in skeleton.triangles() {
            let c = t.map(|i| v[i].center);
            let r = t.map(|i| v[i].radius);
            // Collinear triangles are already represented by their edges.
            if let Some(s) = MedialPrimitive::slab(c, r) {
                prims.push(s);
            }
        }
        Ok(Envelope::from_primitives(prims))
    }

    pub fn from_primitives(prims: Vec<MedialPrimitive>) -> Envelope {
        let bounds = prims.iter().map(|p| p.bounding_ball()).collect();
        Envelope { prims, bounds }
    }

    pub fn primitives(&self) -> &[MedialPrimitive] {
        &self.prims
    }

    /// Signed distance to the union surface: minimum over primitives.
    pub fn distance(&self, q: &Vec3) -> f64 {
        let mut best = f64::INFINITY;
        for (p, (c, r)) in self.prims.iter().zip(&self.bounds) {
            // |q - c| - r bounds the primitive distance from below.
            if (q - c).norm() - r < best {
                best = best.min(p.distance(q));
            }
        }
        best
    }

    /// Whether `q` lies strictly inside a primitive other than `skip`.
    fn inside_other(&self, q: &Vec3, skip: usize) -> bool {
        self.prims
            .iter()
            .zip(&self.bounds)
            .enumerate()
            .any(|(k, (p, (c, r)))| {
                k != skip
                    && (q - c).norm() - r < INSIDE_TOLERANCE
                    && p.distance(q) < INSIDE_TOLERANCE
            })
    }

    /// `m` points on the union surface, drawn area-weighted from the
    /// primitive surfaces and kept only if no other primitive contains them.
    pub fn sample(&self, m: usize, seed: u64) -> Result<Vec<Vec3>> {
        if m == 0 {
            return Err(MetricsError::InvalidArgument(
                "envelope sample count must be >= 1".into(),
            ));
        }
        let patches: Vec<(usize, Patch)> = self
            .prims
            .iter()
            .enumerate()
            .flat_map(|(k, p)| patches(p).into_iter().map(move |patch| (k, patch)))
            .collect();
        let mut cumulative = Vec::with_capacity(patches.len());
        let mut total = 0.0;
        for (_, p) in &patches {
            total += p.area();
            cumulative.push(total);
        }
        if !(total > 0.0) {
            return Err(MetricsError::RejectionStarvation {
                requested: m,
                accepted: 0,
                trials: 0,
            });
        }
        let mut rng = crate::rng::seeded(seed);
        let max_trials = m.saturating_mul(MAX_TRIALS_PER_POINT).max(10_000);
        let mut out = Vec::with_capacity(m);
        let mut trials = 0;
        const BATCH: usize = 4096;
        while out.len() < m && trials < max_trials {
            let n = BATCH.min(max_trials - trials);
            let draws: Vec<(usize, Vec3)> = (0..n)
                .map(|_| {
                    let x = rng.random::<f64>() * total;
                    let i = cumulative
                        .partition_point(|&c| c <= x)
                        .min(patches.len() - 1);
                    let (k, patch) = &patches[i];
                    (*k, patch.sample(&mut rng))
                })
                .collect();
            trials += n;
            let keep: Vec<bool> = draws
                .par_iter()
                .map(|(k, q)| !self.inside_other(q, *k))
                .collect();
            for ((_, q), ok) in draws.into_iter().zip(keep) {
                if ok && out.len() < m {
                    out.push(q);
                }
            }
        }
        if out.len() < m {
            return Err(MetricsError::RejectionStarvation {
                requested: m,
                accepted: out.len(),
                trials,
            });
        }
        Ok(out)
    }
}

/// Signed distance from `q` to the envelope of `skeleton`.
pub fn envelope_distance(q: &Vec3, skeleton: &Skeleton) -> Result<f64> {
    Ok(Envelope::from_skeleton(skeleton)?.distance(q))
}

/// See [`Envelope::sample`].
pub fn sample_envelope(skeleton: &Skeleton, m: usize, seed: u64) -> Result<Vec<Vec3>> {
    Envelope::from_skeleton(skeleton)?.sample(m, seed)
}

/// A piece of a primitive's boundary that can be sampled uniformly.
#[derive(Debug, Clone, Copy)]
enum Patch {
    Sphere {
        center: Vec3,
        radius: f64,
    },
    /// Lateral surface of a truncated cone between two tangent circles.
    Frustum {
        base: Vec3,
        axis: Vec3,
        u: Vec3,
        v: Vec3,
        z: [f64; 2],
        rho: [f64; 2],
    },
    Triangle([Vec3; 3]),
}

fn orthonormal_pair(axis: &Vec3) -> (Vec3, Vec3) {
    let helper = if axis.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    let u = axis.cross(&helper).normalize();
    (u, axis.cross(&u))
}

fn patches(p: &MedialPrimitive) -> Vec<Patch> {
    match *p {
        MedialPrimitive::Sphere { center, radius } => vec![Patch::Sphere { center, radius }],
        MedialPrimitive::Cone { centers, radii } => {
            let d = centers[1] - centers[0];
            let len = d.norm();
            // Tangent normals make angle acos(s) with the axis.
            let s = (radii[0] - radii[1]) / len;
            if s.abs() >= 1.0 {
                return Vec::new();
            }
            let axis = d / len;
            let (u, v) = orthonormal_pair(&axis);
            let c = (1.0 - s * s).sqrt();
            vec![Patch::Frustum {
                base: centers[0],
                axis,
                u,
                v,
                z: [radii[0] * s, len + radii[1] * s],
                rho: [radii[0] * c, radii[1] * c],
            }]
        }
        MedialPrimitive::Slab { centers, radii } => {
            let Some(fr) = slab_frame(&centers, &radii) else {
                return Vec::new();
            };
            let g = fr.e1 * fr.grad[0] + fr.e2 * fr.grad[1];
            let g2 = g.norm_squared();
            if g2 >= 1.0 {
                return Vec::new();
            }
            let h = (1.0 - g2).sqrt();
            [1.0, -1.0]
                .iter()
                .map(|sign| {
                    let n = -g + fr.normal * (sign * h);
                    Patch::Triangle(std::array::from_fn(|i| centers[i] + n * radii[i]))
                })
                .collect()
        }
    }
}

impl Patch {
    fn area(&self) -> f64 {
        match *self {
            Patch::Sphere { radius, .. } => 4.0 * PI * radius * radius,
            Patch::Frustum { z, rho, .. } => {
                let slant = ((z[1] - z[0]).powi(2) + (rho[1] - rho[0]).powi(2)).sqrt();
                PI * (rho[0] + rho[1]) * slant
            }
            Patch::Triangle([a, b, c]) => 0.5 * (b - a).cross(&(c - a)).norm(),
        }
    }

    fn sample(&self, rng: &mut crate::rng::Rng) -> Vec3 {
        match *self {
            Patch::Sphere { center, radius } => {
                let z: f64 = rng.random_range(-1.0..=1.0);
                let phi = rng.random::<f64>() * 2.0 * PI;
                let s = (1.0 - z * z).max(0.0).sqrt();
                center + Vec3::new(s * phi.cos(), s * phi.sin(), z) * radius
            }
            Patch::Frustum {
                base,
                axis,
                u,
                v,
                z,
                rho,
            } => {
                // Density along the slant is proportional to the circle radius.
                let x: f64 = rng.random();
                let dr = rho[1] - rho[0];
                let t = if dr.abs() < 1e-12 * (rho[0] + rho[1]).max(1e-300) {
                    x
                } else {
                    (((1.0 - x) * rho[0] * rho[0] + x * rho[1] * rho[1]).sqrt() - rho[0]) / dr
                };
                let phi = rng.random::<f64>() * 2.0 * PI;
                let r = rho[0] + t * dr;
                base + axis * (z[0] + t * (z[1] - z[0])) + (u * phi.cos() + v * phi.sin()) * r
            }
            Patch::Triangle([a, b, c]) => {
                let (mut s, mut t): (f64, f64) = (rng.random(), rng.random());
                if s + t > 1.0 {
                    s = 1.0 - s;
                    t = 1.0 - t;
                }
                a + (b - a) * s + (c - a) * t
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::SkeletonVertex;

    fn skel(v: &[(Vec3, f64)], e: Vec<[usize; 2]>, t: Vec<[usize; 3]>) -> Skeleton {
        Skeleton::new(
            v.iter()
                .map(|&(center, radius)| SkeletonVertex { center, radius })
                .collect(),
            e,
            t,
        )
        .unwrap()
    }

    #[test]
    fn patch_samples_lie_on_their_primitive() {
        let prims = [
            MedialPrimitive::sphere(Vec3::new(0.1, 0.2, 0.3), 0.7),
            MedialPrimitive::cone(Vec3::zeros(), 0.5, Vec3::new(1.0, 0.5, -0.2), 0.2),
            MedialPrimitive::slab(
                [
                    Vec3::zeros(),
                    Vec3::new(1.0, 0.0, 0.1),
                    Vec3::new(0.2, 1.0, 0.0),
                ],
                [0.3, 0.2, 0.1],
            )
            .unwrap(),
        ];
        let mut rng = crate::rng::seeded(3);
        for p in &prims {
            for patch in patches(p) {
                for _ in 0..200 {
                    let q = patch.sample(&mut rng);
                    assert!(p.distance(&q).abs() < 1e-9, "{p:?}");
                }
            }
        }
    }

    #[test]
    fn frustum_area_matches_cylinder() {
        let p = MedialPrimitive::cone(Vec3::zeros(), 0.5, Vec3::new(2.0, 0.0, 0.0), 0.5);
        let a: f64 = patches(&p).iter().map(|x| x.area()).sum();
        assert!((a - 2.0 * PI * 0.5 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_skeleton_errors() {
        let s = Skeleton::default();
        assert!(matches!(
            envelope_distance(&Vec3::zeros(), &s),
            Err(MetricsError::EmptySkeleton)
        ));
        assert!(matches!(
            sample_envelope(&s, 10, 0),
            Err(MetricsError::EmptySkeleton)
        ));
    }

    #[test]
    fn single_sphere_samples() {
        let s = skel(&[(Vec3::new(1.0, 2.0, 3.0), 0.5)], vec![], vec![]);
        let pts = sample_envelope(&s, 1000, 0).unwrap();
        assert_eq!(pts.len(), 1000);
        for p in &pts {
            assert!(((p - Vec3::new(1.0, 2.0, 3.0)).norm() - 0.5).abs() < 1e-9);
        }
        assert_eq!(pts, sample_envelope(&s, 1000, 0).unwrap());
        assert_ne!(pts, sample_envelope(&s, 1000, 1).unwrap());
    }

    #[test]
    fn single_vertex_distance_is_sphere_sdf() {
        let s = skel(&[(Vec3::zeros(), 1.0)], vec![], vec![]);
        assert_eq!(
            envelope_distance(&Vec3::new(2.0, 0.0, 0.0), &s).unwrap(),
            1.0
        );
        let mut rng = crate::rng::seeded(0);
        for _ in 0..100 {
            let q = Vec3::new(rng.random(), rng.random(), rng.random()) * 4.0;
            assert_eq!(envelope_distance(&q, &s).unwrap(), q.norm() - 1.0);
        }
    }

    #[test]
    fn disjoint_equal_spheres_split_binomially() {
        let s = skel(
            &[(Vec3::zeros(), 1.0), (Vec3::new(5.0, 0.0, 0.0), 1.0)],
            vec![],
            vec![],
        );
        let m = 10_000;
        let pts = sample_envelope(&s, m, 11).unwrap();
        let left = pts.iter().filter(|p| p.x < 2.5).count() as f64;
        let sigma = (m as f64 * 0.25).sqrt();
        assert!(
            (left - m as f64 / 2.0).abs() <= 3.0 * sigma,
            "left = {left}"
        );
    }

    #[test]
    fn overlapping_spheres_sample_only_the_union_boundary() {
        let s = skel(
            &[(Vec3::zeros(), 1.0), (Vec3::new(0.5, 0.0, 0.0), 1.0)],
            vec![],
            vec![],
        );
        let env = Envelope::from_skeleton(&s).unwrap();
        for p in sample_envelope(&s, 2000, 5).unwrap() {
            assert!(env.distance(&p) >= INSIDE_TOLERANCE);
            assert!(env.distance(&p).abs() < 1e-9);
        }
    }
}
