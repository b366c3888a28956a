//! Procedural closed test shapes with outward-facing triangles.

use super::TriangleMesh;
use crate::Vec3;
use std::collections::HashMap;
use std::f64::consts::PI;

fn mesh(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> TriangleMesh {
    orient_outward(TriangleMesh::new(vertices, triangles).expect("procedural mesh is valid"))
}

/// Flips every triangle when the signed enclosed volume is negative.
pub fn orient_outward(mesh: TriangleMesh) -> TriangleMesh {
    let v = mesh.vertices();
    let volume: f64 = mesh
        .triangles()
        .iter()
        .map(|t| v[t[0]].dot(&v[t[1]].cross(&v[t[2]])))
        .sum();
    if volume >= 0.0 {
        return mesh;
    }
    let tris = mesh
        .triangles()
        .iter()
        .map(|&[a, b, c]| [a, c, b])
        .collect();
    TriangleMesh::new(v.to_vec(), tris).expect("flipping keeps the mesh valid")
}

/// Axis-aligned box (12 triangles).
pub fn cuboid(min: Vec3, max: Vec3) -> TriangleMesh {
    let v: Vec<Vec3> = (0..8)
        .map(|i| {
            Vec3::new(
                if i & 1 == 0 { min.x } else { max.x },
                if i & 2 == 0 { min.y } else { max.y },
                if i & 4 == 0 { min.z } else { max.z },
            )
        })
        .collect();
    let quads = [
        [0, 2, 3, 1],
        [4, 5, 7, 6],
        [0, 1, 5, 4],
        [2, 6, 7, 3],
        [0, 4, 6, 2],
        [1, 3, 7, 5],
    ];
    let tris = quads
        .iter()
        .flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]])
        .collect();
    mesh(v, tris)
}

/// Icosphere centred at the origin with `20 * 4^subdivisions` faces.
pub fn icosphere(radius: f64, subdivisions: u32) -> TriangleMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    let verts = verts.into_iter().map(|v| v * radius).collect();
    mesh(verts, faces)
}

/// Ellipsoid with the given semi-axes, built from an icosphere.
pub fn ellipsoid(semi_axes: Vec3, subdivisions: u32) -> TriangleMesh {
    let s = icosphere(1.0, subdivisions);
    mesh(
        s.vertices()
            .iter()
            .map(|v| v.component_mul(&semi_axes))
            .collect(),
        s.triangles().to_vec(),
    )
}

/// Torus around the z axis, centred at the origin.
pub fn torus(major: f64, minor: f64, major_segments: usize, minor_segments: usize) -> TriangleMesh {
    let mut verts = Vec::with_capacity(major_segments * minor_segments);
    for i in 0..major_segments {
        let u = 2.0 * PI * i as f64 / major_segments as f64;
        for j in 0..minor_segments {
            let v = 2.0 * PI * j as f64 / minor_segments as f64;
            let ring = major + minor * v.cos();
            verts.push(Vec3::new(ring * u.cos(), ring * u.sin(), minor * v.sin()));
        }
    }
    let id = |i: usize, j: usize| (i % major_segments) * minor_segments + (j % minor_segments);
    let mut tris = Vec::new();
    for i in 0..major_segments {
        for j in 0..minor_segments {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    mesh(verts, tris)
}

/// Capped cylinder along the x axis, centred at the origin.
pub fn tube(length: f64, radius: f64, segments: usize, rings: usize) -> TriangleMesh {
    let rings = rings.max(1);
    let mut verts = Vec::new();
    for r in 0..=rings {
        let x = -length / 2.0 + length * r as f64 / rings as f64;
        for s in 0..segments {
            let a = 2.0 * PI * s as f64 / segments as f64;
            verts.push(Vec3::new(x, radius * a.cos(), radius * a.sin()));
        }
    }
    let id = |r: usize, s: usize| r * segments + s % segments;
    let mut tris = Vec::new();
    for r in 0..rings {
        for s in 0..segments {
            tris.push([id(r, s), id(r, s + 1), id(r + 1, s + 1)]);
            tris.push([id(r, s), id(r + 1, s + 1), id(r + 1, s)]);
        }
    }
    let c0 = verts.len();
    verts.push(Vec3::new(-length / 2.0, 0.0, 0.0));
    let c1 = verts.len();
    verts.push(Vec3::new(length / 2.0, 0.0, 0.0));
    for s in 0..segments {
        tris.push([c0, id(0, s + 1), id(0, s)]);
        tris.push([c1, id(rings, s), id(rings, s + 1)]);
    }
    mesh(verts, tris)
}

/// L-shaped extruded bracket spanning `[0,1] x [0,1] x [0,0.3]`.
pub fn l_bracket() -> TriangleMesh {
    let outline = [
        (0.0, 0.0),
        (1.0, 0.0),
        (1.0, 0.3),
        (0.3, 0.3),
        (0.3, 1.0),
        (0.0, 1.0),
    ];
    let h = 0.3;
    let n = outline.len();
    let mut verts: Vec<Vec3> = outline.iter().map(|&(x, y)| Vec3::new(x, y, 0.0)).collect();
    verts.extend(outline.iter().map(|&(x, y)| Vec3::new(x, y, h)));
    let mut tris = Vec::new();
    // The outline is star-shaped around its first vertex.
    for k in 1..n - 1 {
        tris.push([0, k + 1, k]);
        tris.push([n, n + k, n + k + 1]);
    }
    for k in 0..n {
        let k1 = (k + 1) % n;
        tris.push([k, k1, n + k1]);
        tris.push([k, n + k1, n + k]);
    }
    mesh(verts, tris)
}

/// Union of two overlapping balls as a triangle soup: each icosphere keeps
/// only the triangles whose centroid lies outside the other ball, leaving a
/// small crack along the intersection circle.
pub fn two_ball_union() -> TriangleMesh {
    let r = 0.3;
    let centers = [Vec3::new(-0.2, 0.0, 0.0), Vec3::new(0.2, 0.0, 0.0)];
    let sphere = icosphere(r, 3);
    let mut verts = Vec::new();
    let mut tris = Vec::new();
    for (k, c) in centers.iter().enumerate() {
        let other = centers[1 - k];
        let base = verts.len();
        verts.extend(sphere.vertices().iter().map(|v| v + c));
        for t in sphere.triangles() {
            let centroid = (verts[base + t[0]] + verts[base + t[1]] + verts[base + t[2]]) / 3.0;
            if (centroid - other).norm() > r {
                tris.push([base + t[0], base + t[1], base + t[2]]);
            }
        }
    }
    TriangleMesh::new(verts, tris).expect("union soup is valid")
}
