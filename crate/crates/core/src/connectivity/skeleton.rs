use super::{
    ConnectivityError, PointTag, RegularTriangulation, Result, SelectedBall, WeightedPoint,
};
use crate::Vec3;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkeletonVertex {
    pub center: Vec3,
    /// Undilated medial radius.
    pub radius: f64,
}

/// Skeletal points with their edges and triangles. Edges are stored as
/// ascending pairs, sorted and unique; every triangle's edges are present.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Skeleton {
    vertices: Vec<SkeletonVertex>,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
}

impl Skeleton {
    /// Validates indices and radii, canonicalizes and deduplicates edges and
    /// triangles and adds any missing triangle edges.
    pub fn new(
        vertices: Vec<SkeletonVertex>,
        edges: Vec<[usize; 2]>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Skeleton> {
        let n = vertices.len();
        for (i, v) in vertices.iter().enumerate() {
            if !(v.radius >= 0.0) || !v.center.iter().all(|c| c.is_finite()) {
                return Err(ConnectivityError::InvalidSkeleton(format!(
                    "vertex {i} has radius {}",
                    v.radius
                )));
            }
        }
        let mut tris = Vec::with_capacity(triangles.len());
        for t in triangles {
            let mut s = t;
            s.sort_unstable();
            if s[2] >= n || s[0] == s[1] || s[1] == s[2] {
                return Err(ConnectivityError::InvalidSkeleton(format!(
                    "bad triangle {t:?}"
                )));
            }
            tris.push(s);
        }
        tris.sort_unstable();
        tris.dedup();
        let mut es = Vec::with_capacity(edges.len() + 3 * tris.len());
        for e in edges {
            if e[0] >= n || e[1] >= n || e[0] == e[1] {
                return Err(ConnectivityError::InvalidSkeleton(format!(
                    "bad edge {e:?}"
                )));
            }
            es.push([e[0].min(e[1]), e[0].max(e[1])]);
        }
        for t in &tris {
            es.extend([[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]);
        }
        es.sort_unstable();
        es.dedup();
        Ok(Skeleton {
            vertices,
            edges: es,
            triangles: tris,
        })
    }

    pub fn vertices(&self) -> &[SkeletonVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for e in &self.edges {
            d[e[0]] += 1;
            d[e[1]] += 1;
        }
        d
    }

    /// Applies `f` to every center and multiplies radii by `radius_scale`.
    pub fn map(&self, f: impl Fn(&Vec3) -> Vec3, radius_scale: f64) -> Skeleton {
        Skeleton {
            vertices: self
                .vertices
                .iter()
                .map(|v| SkeletonVertex {
                    center: f(&v.center),
                    radius: v.radius * radius_scale,
                })
                .collect(),
            edges: self.edges.clone(),
            triangles: self.triangles.clone(),
        }
    }

    pub fn to_skel_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "skel {} {} {}",
            self.vertices.len(),
            self.edges.len(),
            self.triangles.len()
        );
        for v in &self.vertices {
            let _ = writeln!(
                s,
                "v {} {} {} {}",
                v.center.x, v.center.y, v.center.z, v.radius
            );
        }
        for e in &self.edges {
            let _ = writeln!(s, "e {} {}", e[0], e[1]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "t {} {} {}", t[0], t[1], t[2]);
        }
        s
    }
}

/// Skeleton over the selected balls: one vertex per ball (undilated radius)
/// and the triangulation's edges and triangles whose endpoints are all inner
/// points. Balls that appear in no such simplex stay as isolated vertices.
pub fn extract_skeleton(
    rt: &RegularTriangulation,
    points: &[WeightedPoint],
    balls: &[SelectedBall],
) -> Skeleton {
    let ball_of = |v: usize| match points[v].tag {
        PointTag::Inner => Some(points[v].source_index),
        PointTag::Surface => None,
    };
    let edges = rt
        .edges()
        .into_iter()
        .filter_map(|[a, b]| Some([ball_of(a)?, ball_of(b)?]))
        .collect();
    let triangles = rt
        .triangles()
        .into_iter()
        .filter_map(|[a, b, c]| Some([ball_of(a)?, ball_of(b)?, ball_of(c)?]))
        .collect();
    let vertices = balls
        .iter()
        .map(|b| SkeletonVertex {
            center: b.center,
            radius: b.radius,
        })
        .collect();
    Skeleton::new(vertices, edges, triangles)
        .expect("triangulation indices refer to selected balls")
}

pub fn write_skel(path: &Path, skeleton: &Skeleton) -> Result<()> {
    std::fs::write(path, skeleton.to_skel_string()).map_err(|source| ConnectivityError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_skel(path: &Path) -> Result<Skeleton> {
    let text = std::fs::read_to_string(path).map_err(|source| ConnectivityError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_skel(&text)
}

pub fn parse_skel(text: &str) -> Result<Skeleton> {
    let bad =
        |line: usize, msg: &str| ConnectivityError::Parse(format!("line {}: {msg}", line + 1));
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines
        .next()
        .ok_or_else(|| ConnectivityError::Parse("empty file".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "skel" {
        return Err(bad(hl, "expected `skel <nv> <ne> <nt>`"));
    }
    let count = |s: &str| s.parse::<usize>().map_err(|_| bad(hl, "bad count"));
    let (nv, ne, nt) = (count(h[1])?, count(h[2])?, count(h[3])?);

    let mut vertices = Vec::with_capacity(nv);
    let mut edges = Vec::with_capacity(ne);
    let mut triangles = Vec::with_capacity(nt);
    for (ln, line) in lines {
        let mut tok = line.split_whitespace();
        let kind = tok.next().unwrap_or_default();
        let rest: Vec<&str> = tok.collect();
        match kind {
            "v" if rest.len() == 4 => {
                let f: Vec<f64> = rest
                    .iter()
                    .map(|s| s.parse::<f64>().map_err(|_| bad(ln, "bad number")))
                    .collect::<Result<_>>()?;
                vertices.push(SkeletonVertex {
                    center: Vec3::new(f[0], f[1], f[2]),
                    radius: f[3],
                });
            }
            "e" if rest.len() == 2 => {
                let i: Vec<usize> = rest
                    .iter()
                    .map(|s| s.parse::<usize>().map_err(|_| bad(ln, "bad index")))
                    .collect::<Result<_>>()?;
                edges.push([i[0], i[1]]);
            }
            "t" if rest.len() == 3 => {
                let i: Vec<usize> = rest
                    .iter()
                    .map(|s| s.parse::<usize>().map_err(|_| bad(ln, "bad index")))
                    .collect::<Result<_>>()?;
                triangles.push([i[0], i[1], i[2]]);
            }
            _ => return Err(bad(ln, "unrecognized record")),
        }
    }
    if vertices.len() != nv || edges.len() != ne || triangles.len() != nt {
        return Err(ConnectivityError::Parse(format!(
            "header announces {nv}/{ne}/{nt} records, found {}/{}/{}",
            vertices.len(),
            edges.len(),
            triangles.len()
        )));
    }
    Skeleton::new(vertices, edges, triangles)
}
