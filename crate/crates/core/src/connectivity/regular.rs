use super::predicates::{orient3d, power_test, Sign, REL_TOL};
use super::{ConnectivityError, Result, WeightedPoint};
use crate::geometry::Aabb;
use rand::Rng as _;
use std::collections::HashMap;

/// Seed used by [`regular_triangulation`] when a perturbation is needed.
pub const DEFAULT_PERTURBATION_SEED: u64 = 0x5eed;

const INF: u32 = u32::MAX;
const PERTURBATION_SCALE: f64 = 1e-9;
const MAX_PERTURBATION_ATTEMPTS: u32 = 3;

/// Record of the random perturbation applied to break a degeneracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub seed: u64,
    /// Maximum per-coordinate displacement, in input units.
    pub magnitude: f64,
    /// Number of perturbed rebuilds (1 means the first one succeeded).
    pub attempts: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularTriangulation {
    /// Finite tetrahedra as indices into the input points.
    pub tetrahedra: Vec<[usize; 4]>,
    /// Points whose power cell is empty; they appear in no tetrahedron.
    pub redundant: Vec<usize>,
    pub perturbation: Option<Perturbation>,
}

impl RegularTriangulation {
    /// Unique edges as `(lo, hi)` pairs, sorted.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::with_capacity(self.tetrahedra.len() * 7);
        for t in &self.tetrahedra {
            for a in 0..4 {
                for b in a + 1..4 {
                    out.push([t[a].min(t[b]), t[a].max(t[b])]);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Unique triangles with ascending indices, sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(self.tetrahedra.len() * 3);
        for t in &self.tetrahedra {
            for skip in 0..4 {
                let mut f = [0; 3];
                let mut k = 0;
                for (i, &v) in t.iter().enumerate() {
                    if i != skip {
                        f[k] = v;
                        k += 1;
                    }
                }
                f.sort_unstable();
                out.push(f);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Regular triangulation with the default perturbation seed.
pub fn regular_triangulation(points: &[WeightedPoint]) -> Result<RegularTriangulation> {
    regular_triangulation_seeded(points, DEFAULT_PERTURBATION_SEED)
}

/// Incremental (Bowyer-Watson style) regular triangulation of weighted
/// points. Every returned tetrahedron has an orthosphere that no other input
/// point is closer to in power distance.
///
/// Predicates that come out too close to zero to trust abort the build; it is
/// then repeated on copies of the points jittered by up to `1e-9` times the
/// bounding-box diagonal, at most three times.
pub fn regular_triangulation_seeded(
    points: &[WeightedPoint],
    seed: u64,
) -> Result<RegularTriangulation> {
    if points.len() < 4 {
        return Err(ConnectivityError::DegenerateInput(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    let bbox = Aabb::from_points(points.iter().map(|p| &p.position)).expect("non-empty");
    let diag = bbox.diagonal();
    if !(diag > 0.0) || !diag.is_finite() {
        return Err(ConnectivityError::DegenerateInput(
            "all points coincide".into(),
        ));
    }
    let center = bbox.center();
    let inv = 1.0 / diag;
    let base: Vec<[f64; 3]> = points
        .iter()
        .map(|p| {
            let q = (p.position - center) * inv;
            [q.x, q.y, q.z]
        })
        .collect();
    let weights: Vec<f64> = points.iter().map(|p| p.weight * inv * inv).collect();

    let initial = initial_simplex(&base)?;
    let order = insertion_order(&base, &initial);

    for attempt in 0..=MAX_PERTURBATION_ATTEMPTS {
        let pts = if attempt == 0 {
            base.clone()
        } else {
            let mut rng = crate::rng::derived(seed, attempt as u64);
            base.iter()
                .map(|p| {
                    let mut q = *p;
                    for c in &mut q {
                        *c += PERTURBATION_SCALE * rng.random_range(-1.0..=1.0);
                    }
                    q
                })
                .collect()
        };
        let mut b = Builder::new(&pts, &weights);
        if b.build(initial, &order).is_ok() {
            let perturbation = (attempt > 0).then_some(Perturbation {
                seed,
                magnitude: PERTURBATION_SCALE * diag,
                attempts: attempt,
            });
            return Ok(b.finish(perturbation));
        }
    }
    Err(ConnectivityError::DegenerateInput(format!(
        "predicates stayed degenerate after {MAX_PERTURBATION_ATTEMPTS} perturbations"
    )))
}

/// Picks a well-spread, positively oriented starting tetrahedron or reports
/// that all points are coplanar.
fn initial_simplex(p: &[[f64; 3]]) -> Result<[u32; 4]> {
    let d2 = |a: &[f64; 3], b: &[f64; 3]| (0..3).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>();
    let argmax = |f: &dyn Fn(usize) -> f64| {
        (0..p.len())
            .map(|i| (f(i), i))
            .fold((f64::NEG_INFINITY, 0), |best, cur| {
                if cur.0 > best.0 {
                    cur
                } else {
                    best
                }
            })
    };
    let i0 = 0;
    let (_, i1) = argmax(&|i| d2(&p[i0], &p[i]));
    let cross_norm = |i: usize| {
        let u: [f64; 3] = std::array::from_fn(|k| p[i1][k] - p[i0][k]);
        let v: [f64; 3] = std::array::from_fn(|k| p[i][k] - p[i0][k]);
        let c = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        c[0] * c[0] + c[1] * c[1] + c[2] * c[2]
    };
    let (_, i2) = argmax(&cross_norm);
    let vol = |i: usize| {
        let a = p[i0];
        let m: [[f64; 3]; 3] = [p[i1], p[i2], p[i]].map(|q| std::array::from_fn(|k| q[k] - a[k]));
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let (best, i3) = argmax(&|i| vol(i).abs());
    if !(best > REL_TOL) {
        return Err(ConnectivityError::DegenerateInput(
            "all points are coplanar".into(),
        ));
    }
    let t = [i0 as u32, i1 as u32, i2 as u32, i3 as u32];
    Ok(if vol(i3) > 0.0 {
        t
    } else {
        [t[0], t[2], t[1], t[3]]
    })
}

/// Remaining points in Morton order so consecutive insertions stay local.
fn insertion_order(p: &[[f64; 3]], initial: &[u32; 4]) -> Vec<u32> {
    fn spread(mut x: u64) -> u64 {
        x &= 0x1f_ffff;
        x = (x | x << 32) & 0x1f00000000ffff;
        x = (x | x << 16) & 0x1f0000ff0000ff;
        x = (x | x << 8) & 0x100f00f00f00f00f;
        x = (x | x << 4) & 0x10c30c30c30c30c3;
        (x | x << 2) & 0x1249249249249249
    }
    let key = |q: &[f64; 3]| {
        let c = |v: f64| (((v + 1.0) * 0.5).clamp(0.0, 1.0) * 2_097_151.0) as u64;
        spread(c(q[0])) | spread(c(q[1])) << 1 | spread(c(q[2])) << 2
    };
    let mut order: Vec<(u64, u32)> = (0..p.len() as u32)
        .filter(|i| !initial.contains(i))
        .map(|i| (key(&p[i as usize]), i))
        .collect();
    order.sort_unstable();
    order.into_iter().map(|(_, i)| i).collect()
}

struct Degenerate;

struct Builder<'a> {
    pts: &'a [[f64; 3]],
    w: &'a [f64],
    tets: Vec<[u32; 4]>,
    nbr: Vec<[u32; 4]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    stamp: Vec<u32>,
    in_cavity: Vec<bool>,
    epoch: u32,
    hint: u32,
}

impl<'a> Builder<'a> {
    fn new(pts: &'a [[f64; 3]], w: &'a [f64]) -> Builder<'a> {
        let cap = pts.len() * 7 + 16;
        Builder {
            pts,
            w,
            tets: Vec::with_capacity(cap),
            nbr: Vec::with_capacity(cap),
            alive: Vec::with_capacity(cap),
            free: Vec::new(),
            stamp: Vec::with_capacity(cap),
            in_cavity: Vec::with_capacity(cap),
            epoch: 0,
            hint: 0,
        }
    }

    fn alloc(&mut self, t: [u32; 4]) -> u32 {
        if let Some(id) = self.free.pop() {
            let i = id as usize;
            self.tets[i] = t;
            self.nbr[i] = [INF; 4];
            self.alive[i] = true;
            id
        } else {
            self.tets.push(t);
            self.nbr.push([INF; 4]);
            self.alive.push(true);
            self.stamp.push(0);
            self.in_cavity.push(false);
            (self.tets.len() - 1) as u32
        }
    }

    fn build(&mut self, init: [u32; 4], order: &[u32]) -> std::result::Result<(), Degenerate> {
        if orient3d(
            self.p(init[0]),
            self.p(init[1]),
            self.p(init[2]),
            self.p(init[3]),
        ) != Sign::Positive
        {
            return Err(Degenerate);
        }
        let mut created = vec![self.alloc(init)];
        for i in 0..4 {
            // Replace vertex i by infinity and swap two finite vertices so
            // the hull face is seen positively from outside.
            let mut t = init;
            t[i] = INF;
            let (a, b) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            t.swap(a, b);
            created.push(self.alloc(t));
        }
        self.link(&created);
        self.hint = created[0];
        for &v in order {
            self.insert(v)?;
        }
        Ok(())
    }

    /// Connects face-adjacent tetrahedra among `ids` by matching faces.
    fn link(&mut self, ids: &[u32]) {
        let mut faces: HashMap<[u32; 3], (u32, usize)> = HashMap::new();
        for &t in ids {
            for k in 0..4 {
                let key = face_key(&self.tets[t as usize], k);
                if let Some((u, j)) = faces.remove(&key) {
                    self.nbr[t as usize][k] = u;
                    self.nbr[u as usize][j] = t;
                } else {
                    faces.insert(key, (t, k));
                }
            }
        }
    }

    fn p(&self, v: u32) -> [f64; 3] {
        self.pts[v as usize]
    }

    fn conflict(&self, t: u32, v: u32) -> std::result::Result<bool, Degenerate> {
        let tet = self.tets[t as usize];
        let q = self.p(v);
        let sign = if let Some(k) = tet.iter().position(|&x| x == INF) {
            let mut c = [[0.0; 3]; 4];
            for i in 0..4 {
                c[i] = if i == k { q } else { self.p(tet[i]) };
            }
            orient3d(c[0], c[1], c[2], c[3])
        } else {
            let c = tet.map(|x| self.p(x));
            let w = tet.map(|x| self.w[x as usize]);
            power_test(c, w, q, self.w[v as usize])
        };
        match sign {
            Sign::Positive => Ok(true),
            Sign::Negative => Ok(false),
            Sign::Zero => Err(Degenerate),
        }
    }

    /// Walks from the hint towards `v`. Returns a finite tetrahedron whose
    /// closure contains `v`, or an infinite one whose hull face `v` lies
    /// strictly beyond.
    fn locate(&self, v: u32) -> Option<u32> {
        let q = self.p(v);
        let mut t = self.hint;
        if !self.alive[t as usize] || self.tets[t as usize].contains(&INF) {
            t = (0..self.tets.len() as u32)
                .find(|&i| self.alive[i as usize] && !self.tets[i as usize].contains(&INF))?;
        }
        let max_steps = 4 * self.tets.len() + 16;
        let mut rot = v as usize;
        for _ in 0..max_steps {
            let tet = self.tets[t as usize];
            if tet.contains(&INF) {
                return Some(t);
            }
            let c = tet.map(|x| self.p(x));
            rot = rot.wrapping_add(1);
            let mut moved = false;
            for s in 0..4 {
                let i = (s + rot) % 4;
                let mut c2 = c;
                c2[i] = q;
                if orient3d(c2[0], c2[1], c2[2], c2[3]) == Sign::Negative {
                    t = self.nbr[t as usize][i];
                    moved = true;
                    break;
                }
            }
            if !moved {
                return Some(t);
            }
        }
        None
    }

    fn insert(&mut self, v: u32) -> std::result::Result<(), Degenerate> {
        let seed = match self.locate(v) {
            Some(t) => {
                if self.conflict(t, v)? {
                    Some(t)
                } else if self.tets[t as usize].contains(&INF) {
                    return Err(Degenerate);
                } else {
                    // The lifted point is above the facet beneath it, hence
                    // above the whole lower hull.
                    None
                }
            }
            None => {
                let mut found = None;
                for t in (0..self.tets.len() as u32).rev() {
                    if self.alive[t as usize] && self.conflict(t, v)? {
                        found = Some(t);
                        break;
                    }
                }
                found
            }
        };
        let Some(seed) = seed else {
            return Ok(());
        };

        self.epoch = self.epoch.wrapping_add(1);
        let epoch = self.epoch;
        let mut cavity = vec![seed];
        self.stamp[seed as usize] = epoch;
        self.in_cavity[seed as usize] = true;
        let mut boundary: Vec<(u32, usize, u32)> = Vec::new();
        let mut head = 0;
        while head < cavity.len() {
            let t = cavity[head];
            head += 1;
            for i in 0..4 {
                let n = self.nbr[t as usize][i];
                if self.stamp[n as usize] != epoch {
                    self.stamp[n as usize] = epoch;
                    let c = self.conflict(n, v)?;
                    self.in_cavity[n as usize] = c;
                    if c {
                        cavity.push(n);
                    }
                }
                if !self.in_cavity[n as usize] {
                    boundary.push((t, i, n));
                }
            }
        }

        let mut created = Vec::with_capacity(boundary.len());
        let mut faces: HashMap<[u32; 3], (u32, usize)> = HashMap::with_capacity(boundary.len() * 2);
        for &(t, i, n) in &boundary {
            let mut tet = self.tets[t as usize];
            tet[i] = v;
            if !tet.contains(&INF) {
                let c = tet.map(|x| self.p(x));
                if orient3d(c[0], c[1], c[2], c[3]) != Sign::Positive {
                    return Err(Degenerate);
                }
            }
            let id = self.alloc(tet);
            created.push(id);
            self.nbr[id as usize][i] = n;
            let back = self.nbr[n as usize]
                .iter()
                .position(|&x| x == t)
                .expect("adjacency is symmetric");
            self.nbr[n as usize][back] = id;
            for k in (0..4).filter(|&k| k != i) {
                let key = face_key(&tet, k);
                if let Some((u, j)) = faces.remove(&key) {
                    self.nbr[id as usize][k] = u;
                    self.nbr[u as usize][j] = id;
                } else {
                    faces.insert(key, (id, k));
                }
            }
        }
        if !faces.is_empty() {
            return Err(Degenerate);
        }
        for &t in &cavity {
            self.alive[t as usize] = false;
            self.in_cavity[t as usize] = false;
            self.free.push(t);
        }
        for &n in boundary.iter().map(|(_, _, n)| n) {
            self.in_cavity[n as usize] = false;
        }
        self.hint = created
            .iter()
            .copied()
            .find(|&t| !self.tets[t as usize].contains(&INF))
            .unwrap_or(created[0]);
        Ok(())
    }

    fn finish(self, perturbation: Option<Perturbation>) -> RegularTriangulation {
        let mut tetrahedra: Vec<[usize; 4]> = self
            .tets
            .iter()
            .zip(&self.alive)
            .filter(|(t, &a)| a && !t.contains(&INF))
            .map(|(t, _)| t.map(|v| v as usize))
            .collect();
        tetrahedra.sort_unstable();
        // Points hidden at insertion plus vertices later swallowed by heavier
        // neighbours.
        let mut used = vec![false; self.pts.len()];
        for t in &tetrahedra {
            for &v in t {
                used[v] = true;
            }
        }
        let redundant = (0..self.pts.len()).filter(|&i| !used[i]).collect();
        RegularTriangulation {
            tetrahedra,
            redundant,
            perturbation,
        }
    }
}

fn face_key(t: &[u32; 4], skip: usize) -> [u32; 3] {
    let mut f = [0; 3];
    let mut k = 0;
    for (i, &v) in t.iter().enumerate() {
        if i != skip {
            f[k] = v;
            k += 1;
        }
    }
    f.sort_unstable();
    f
}
