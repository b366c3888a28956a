use super::{GeometryError, KdTree, OrientedPointCloud, Result, Shape, TriangleMesh};
use crate::Vec3;
use nalgebra::Matrix3;
use std::f64::consts::PI;

/// Neighbour rank used for the default per-point area estimate of clouds.
pub const DEFAULT_AREA_NEIGHBOURS: usize = 8;

/// Far-field acceptance ratio of the hierarchical evaluator: a node is
/// replaced by its expansion when `|q - center| > ACCEPT_RATIO * radius`.
const ACCEPT_RATIO: f64 = 4.0;
const LEAF_SIZE: usize = 8;

/// Signed solid angle subtended by triangle `(a, b, c)` at `q`
/// (Van Oosterom & Strackee). Positive when `q` sees the back side of a
/// counter-clockwise triangle.
pub fn solid_angle(q: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let a = a - q;
    let b = b - q;
    let c = c - q;
    let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
    let num = a.dot(&b.cross(&c));
    let den = la * lb * lc + a.dot(&b) * lc + a.dot(&c) * lb + b.dot(&c) * la;
    2.0 * num.atan2(den)
}

/// Reference winding number of a triangle set: sum of signed solid angles
/// divided by 4π.
pub fn winding_number_exact(mesh: &TriangleMesh, q: &Vec3) -> f64 {
    let v = mesh.vertices();
    mesh.triangles()
        .iter()
        .map(|t| solid_angle(q, &v[t[0]], &v[t[1]], &v[t[2]]))
        .sum::<f64>()
        / (4.0 * PI)
}

fn dipole(q: &Vec3, p: &Vec3, area_normal: &Vec3) -> f64 {
    let d = p - q;
    let r2 = d.norm_squared();
    if r2 == 0.0 {
        return 0.0;
    }
    d.dot(area_normal) / (4.0 * PI * r2 * r2.sqrt())
}

/// `(pi * d_k^2) / k` per point, with `d_k` the distance to the k-th nearest
/// other point.
pub fn estimate_point_areas(points: &[Vec3], k: usize) -> Vec<f64> {
    let tree = KdTree::new(points);
    let k = k.min(points.len().saturating_sub(1)).max(1);
    points
        .iter()
        .map(|p| {
            let nn = tree.k_nearest(p, k + 1).expect("non-empty tree");
            let dk = nn.last().map(|e| e.0).unwrap_or(0.0);
            PI * dk * dk / k as f64
        })
        .collect()
}

fn cloud_area_normals(cloud: &OrientedPointCloud) -> Result<Vec<Vec3>> {
    let normals = cloud.normals().ok_or(GeometryError::MissingNormals)?;
    let estimated;
    let areas = match cloud.areas() {
        Some(a) => a,
        None => {
            estimated = estimate_point_areas(cloud.points(), DEFAULT_AREA_NEIGHBOURS);
            &estimated
        }
    };
    Ok(normals.iter().zip(areas).map(|(n, a)| n * *a).collect())
}

/// Generalised winding number of `q` with respect to `shape`.
///
/// Meshes use the exact per-triangle solid-angle sum. Clouds use the oriented
/// dipole sum and need normals; missing areas are estimated with
/// [`estimate_point_areas`].
pub fn winding_number(shape: &Shape, q: &Vec3) -> Result<f64> {
    match shape {
        Shape::Mesh(m) => Ok(winding_number_exact(m, q)),
        Shape::Cloud(c) => {
            let an = cloud_area_normals(c)?;
            Ok(c.points()
                .iter()
                .zip(&an)
                .map(|(p, a)| dipole(q, p, a))
                .sum())
        }
    }
}

#[derive(Debug, Clone)]
enum Elements {
    Triangles(Vec<[Vec3; 3]>),
    Dipoles(Vec<Vec3>),
}

#[derive(Debug, Clone)]
struct BvhNode {
    center: Vec3,
    radius: f64,
    area_normal: Vec3,
    /// `sum_t area_normal_t (p_t - center)^T`, row index = normal component.
    moment: Matrix3<f64>,
    /// `T[k][j][l] = sum_t a_k y_j y_l` with `y` the offset from `center`,
    /// integrated over each triangle.
    second: [[[f64; 3]; 3]; 3],
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

/// Hierarchical winding-number evaluator: exact near field, second-order
/// dipole expansion for distant clusters.
#[derive(Debug, Clone)]
pub struct WindingBvh {
    elements: Elements,
    centroids: Vec<Vec3>,
    area_normals: Vec<Vec3>,
    weights: Vec<f64>,
    order: Vec<usize>,
    nodes: Vec<BvhNode>,
}

impl WindingBvh {
    pub fn from_mesh(mesh: &TriangleMesh) -> WindingBvh {
        let tris: Vec<[Vec3; 3]> = (0..mesh.triangles().len())
            .map(|t| mesh.corners(t))
            .collect();
        let centroids = tris.iter().map(|[a, b, c]| (a + b + c) / 3.0).collect();
        let area_normals: Vec<Vec3> = tris
            .iter()
            .map(|[a, b, c]| (b - a).cross(&(c - a)) * 0.5)
            .collect();
        let weights = area_normals.iter().map(|a| a.norm()).collect();
        WindingBvh::build(Elements::Triangles(tris), centroids, area_normals, weights)
    }

    pub fn from_cloud(cloud: &OrientedPointCloud) -> Result<WindingBvh> {
        let an = cloud_area_normals(cloud)?;
        let weights = an.iter().map(|a| a.norm()).collect();
        Ok(WindingBvh::build(
            Elements::Dipoles(cloud.points().to_vec()),
            cloud.points().to_vec(),
            an,
            weights,
        ))
    }

    pub fn from_shape(shape: &Shape) -> Result<WindingBvh> {
        match shape {
            Shape::Mesh(m) => Ok(WindingBvh::from_mesh(m)),
            Shape::Cloud(c) => WindingBvh::from_cloud(c),
        }
    }

    fn build(
        elements: Elements,
        centroids: Vec<Vec3>,
        area_normals: Vec<Vec3>,
        weights: Vec<f64>,
    ) -> WindingBvh {
        let n = centroids.len();
        let mut bvh = WindingBvh {
            elements,
            centroids,
            area_normals,
            weights,
            order: (0..n).collect(),
            nodes: Vec::new(),
        };
        if n > 0 {
            bvh.build_node(0, n);
        }
        bvh
    }

    fn element_extent(&self, e: usize, center: &Vec3) -> f64 {
        match &self.elements {
            Elements::Triangles(t) => t[e].iter().map(|v| (v - center).norm()).fold(0.0, f64::max),
            Elements::Dipoles(p) => (p[e] - center).norm(),
        }
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let idx = &self.order[start..end];
        let total_w: f64 = idx.iter().map(|&e| self.weights[e]).sum();
        let center = if total_w > 0.0 {
            idx.iter()
                .map(|&e| self.centroids[e] * self.weights[e])
                .sum::<Vec3>()
                / total_w
        } else {
            idx.iter().map(|&e| self.centroids[e]).sum::<Vec3>() / idx.len() as f64
        };
        let mut area_normal = Vec3::zeros();
        let mut moment = Matrix3::zeros();
        let mut second = [[[0.0; 3]; 3]; 3];
        let mut radius: f64 = 0.0;
        for &e in idx {
            let a = self.area_normals[e];
            let y = self.centroids[e] - center;
            area_normal += a;
            moment += a * y.transpose();
            let mut yy = y * y.transpose();
            if let Elements::Triangles(t) = &self.elements {
                // Spread of a uniform triangle about its centroid.
                for v in &t[e] {
                    let d = v - self.centroids[e];
                    yy += d * d.transpose() / 12.0;
                }
            }
            for k in 0..3 {
                for j in 0..3 {
                    for l in 0..3 {
                        second[k][j][l] += a[k] * yy[(j, l)];
                    }
                }
            }
            radius = radius.max(self.element_extent(e, &center));
        }
        let id = self.nodes.len();
        self.nodes.push(BvhNode {
            center,
            radius,
            area_normal,
            moment,
            second,
            start,
            end,
            children: None,
        });
        if end - start > LEAF_SIZE {
            let mut lo = Vec3::repeat(f64::INFINITY);
            let mut hi = Vec3::repeat(f64::NEG_INFINITY);
            for &e in &self.order[start..end] {
                lo = lo.inf(&self.centroids[e]);
                hi = hi.sup(&self.centroids[e]);
            }
            let axis = (hi - lo).imax();
            let mid = start + (end - start) / 2;
            let c = &self.centroids;
            self.order[start..end]
                .select_nth_unstable_by(mid - start, |&a, &b| c[a][axis].total_cmp(&c[b][axis]));
            let l = self.build_node(start, mid);
            let r = self.build_node(mid, end);
            self.nodes[id].children = Some((l, r));
        }
        id
    }

    pub fn eval(&self, q: &Vec3) -> f64 {
        if self.nodes.is_empty() {
            return 0.0;
        }
        let mut stack = vec![0usize];
        let mut total = 0.0;
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            let x = node.center - q;
            let d = x.norm();
            if d > ACCEPT_RATIO * node.radius {
                let d2 = d * d;
                let d3 = d2 * d;
                let d5 = d3 * d2;
                let zeroth = x.dot(&node.area_normal) / d3;
                let first = node.moment.trace() / d3 - 3.0 * x.dot(&(node.moment * x)) / d5;
                let t = &node.second;
                let mut contracted = 0.0;
                let mut cubic = 0.0;
                for k in 0..3 {
                    for j in 0..3 {
                        contracted += t[k][k][j] * x[j] + t[k][j][j] * x[k] + t[k][j][k] * x[j];
                        for l in 0..3 {
                            cubic += t[k][j][l] * x[k] * x[j] * x[l];
                        }
                    }
                }
                let second = 0.5 * (-3.0 * contracted / d5 + 15.0 * cubic / (d5 * d2));
                total += (zeroth + first + second) / (4.0 * PI);
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => {
                    for &e in &self.order[node.start..node.end] {
                        total += match &self.elements {
                            Elements::Triangles(t) => {
                                let [a, b, c] = &t[e];
                                solid_angle(q, a, b, c) / (4.0 * PI)
                            }
                            Elements::Dipoles(p) => dipole(q, &p[e], &self.area_normals[e]),
                        };
                    }
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;
    use rand::Rng;

    fn unit_cube() -> TriangleMesh {
        shapes::cuboid(Vec3::zeros(), Vec3::repeat(1.0))
    }

    #[test]
    fn cube_inside_and_outside() {
        let m = unit_cube();
        assert!((winding_number_exact(&m, &Vec3::repeat(0.5)) - 1.0).abs() < 1e-9);
        assert!(winding_number_exact(&m, &Vec3::repeat(10.0)).abs() < 1e-9);
    }

    #[test]
    fn open_cube_centroid_is_five_sixths() {
        // By symmetry each face subtends 4π/6 at the centroid.
        let m = unit_cube();
        let tris: Vec<[usize; 3]> = m
            .triangles()
            .iter()
            .copied()
            .filter(|t| !t.iter().all(|&i| m.vertices()[i].z == 1.0))
            .collect();
        assert_eq!(tris.len(), 10);
        let open = TriangleMesh::new(m.vertices().to_vec(), tris).unwrap();
        let w = winding_number_exact(&open, &Vec3::repeat(0.5));
        assert!((w - 5.0 / 6.0).abs() < 1e-12, "{w}");
    }

    #[test]
    fn closed_meshes_give_integers_off_surface() {
        let mut rng = crate::rng::seeded(1);
        for mesh in [
            shapes::icosphere(0.5, 2),
            shapes::torus(0.35, 0.12, 20, 10),
            shapes::l_bracket(),
        ] {
            for _ in 0..300 {
                let q =
                    Vec3::new(rng.random(), rng.random(), rng.random()) * 1.4 - Vec3::repeat(0.7);
                let w = winding_number_exact(&mesh, &q);
                assert!((w - w.round()).abs() < 1e-6, "{w}");
            }
        }
    }

    #[test]
    fn bvh_matches_exact() {
        let mut rng = crate::rng::seeded(2);
        let meshes = [
            shapes::icosphere(0.5, 3),
            shapes::torus(0.35, 0.12, 48, 24),
            shapes::tube(1.0, 0.15, 32, 16),
            shapes::two_ball_union(),
        ];
        for mesh in &meshes {
            let bvh = WindingBvh::from_mesh(mesh);
            let bb = mesh.bbox();
            let ext = bb.extent();
            let mut worst: f64 = 0.0;
            for _ in 0..2000 {
                let u = Vec3::new(rng.random(), rng.random(), rng.random());
                let q = bb.min - ext * 0.2 + ext.component_mul(&u) * 1.4;
                worst = worst.max((bvh.eval(&q) - winding_number_exact(mesh, &q)).abs());
            }
            assert!(worst < 1e-3, "worst deviation {worst}");
        }
    }

    #[test]
    fn cloud_dipole_sum_on_sphere() {
        // Uniform random points: the k-NN area estimate is unbiased for a
        // Poisson process, unlike for the regular icosphere lattice.
        let mut rng = crate::rng::seeded(5);
        let pts: Vec<Vec3> = (0..5000)
            .map(|_| loop {
                let v =
                    Vec3::new(rng.random(), rng.random(), rng.random()) * 2.0 - Vec3::repeat(1.0);
                let n = v.norm();
                if n > 1e-3 && n <= 1.0 {
                    break v / n;
                }
            })
            .collect();
        let normals = pts.clone();
        let cloud = OrientedPointCloud::new(pts, Some(normals)).unwrap();
        let shape = Shape::Cloud(cloud.clone());
        let inside = winding_number(&shape, &Vec3::new(0.1, -0.2, 0.05)).unwrap();
        let outside = winding_number(&shape, &Vec3::new(3.0, 0.0, 0.0)).unwrap();
        assert!((inside - 1.0).abs() < 0.1, "{inside}");
        assert!(outside.abs() < 0.1, "{outside}");
        let bvh = WindingBvh::from_cloud(&cloud).unwrap();
        let fast = bvh.eval(&Vec3::new(0.1, -0.2, 0.05));
        assert!((fast - inside).abs() < 1e-3, "{fast} vs {inside}");
    }

    #[test]
    fn cloud_without_normals_is_rejected() {
        let c = OrientedPointCloud::new(vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()], None)
            .unwrap();
        assert!(matches!(
            winding_number(&Shape::Cloud(c), &Vec3::zeros()),
            Err(GeometryError::MissingNormals)
        ));
    }
}
