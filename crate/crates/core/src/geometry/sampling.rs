use super::{
    GeometryError, OrientedPointCloud, Result, SampleSource, SurfaceSamples, TriangleMesh,
};
use crate::Vec3;
use rand::Rng;

/// Area-weighted uniform samples on the mesh surface: the triangle is drawn
/// with probability proportional to its area, the point by uniform barycentric
/// sampling.
pub fn sample_surface(mesh: &TriangleMesh, m: usize, seed: u64) -> Result<SurfaceSamples> {
    if m == 0 {
        return Err(GeometryError::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let mut cumulative = Vec::with_capacity(mesh.triangles().len());
    let mut acc = 0.0;
    for t in 0..mesh.triangles().len() {
        acc += mesh.area(t);
        cumulative.push(acc);
    }
    if !(acc > 0.0) {
        return Err(GeometryError::EmptyShape("mesh has zero area".into()));
    }
    let mut rng = crate::rng::seeded(seed);
    let mut points = Vec::with_capacity(m);
    let mut faces = Vec::with_capacity(m);
    let last = cumulative.len() - 1;
    for _ in 0..m {
        let target = rng.random::<f64>() * acc;
        let t = cumulative.partition_point(|&c| c <= target).min(last);
        let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        let [a, b, c] = mesh.corners(t);
        points.push(a + (b - a) * u + (c - a) * v);
        faces.push(t);
    }
    Ok(SurfaceSamples {
        points,
        source: SampleSource::Mesh { faces },
        seed,
    })
}

/// Draws `m` distinct input points of a cloud (without replacement, returned
/// in ascending index order).
pub fn sample_cloud(cloud: &OrientedPointCloud, m: usize, seed: u64) -> Result<SurfaceSamples> {
    if m == 0 {
        return Err(GeometryError::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    if m > cloud.len() {
        return Err(GeometryError::InvalidArgument(format!(
            "requested {m} samples from a cloud of {} points",
            cloud.len()
        )));
    }
    let mut rng = crate::rng::seeded(seed);
    let mut indices = rand::seq::index::sample(&mut rng, cloud.len(), m).into_vec();
    indices.sort_unstable();
    let points = indices
        .iter()
        .map(|&i| cloud.points()[i])
        .collect::<Vec<Vec3>>();
    Ok(SurfaceSamples {
        points,
        source: SampleSource::Cloud { indices },
        seed,
    })
}
