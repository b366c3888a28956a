use super::{GeometryError, Result};
use crate::Vec3;

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Exact k-d tree over a fixed point set.
///
/// Every query returns the same answer as a linear scan: distances are
/// computed as `(p - q).norm()` and ties are broken by the lowest point index.
#[derive(Debug, Clone)]
pub struct KdTree {
    points: Vec<Vec3>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub fn new(points: &[Vec3]) -> KdTree {
        let mut tree = KdTree {
            points: points.to_vec(),
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        if !points.is_empty() {
            tree.build(0, points.len());
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for &i in &self.order[start..end] {
            lo = lo.inf(&self.points[i]);
            hi = hi.sup(&self.points[i]);
        }
        let axis = (hi - lo).imax();
        let mid = start + (end - start) / 2;
        let pts = &self.points;
        self.order[start..end]
            .select_nth_unstable_by(mid - start, |&a, &b| pts[a][axis].total_cmp(&pts[b][axis]));
        let value = self.points[self.order[mid]][axis];
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    /// Nearest point to `q` as `(distance, index)`.
    pub fn nearest(&self, q: &Vec3) -> Result<(f64, usize)> {
        if self.points.is_empty() {
            return Err(GeometryError::EmptySet);
        }
        let mut best = (f64::INFINITY, usize::MAX);
        self.nearest_rec(0, q, &mut best);
        Ok(best)
    }

    fn nearest_rec(&self, node: usize, q: &Vec3, best: &mut (f64, usize)) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let d = (self.points[i] - q).norm();
                    if d < best.0 || (d == best.0 && i < best.1) {
                        *best = (d, i);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = q[axis] - value;
                let (near, far) = if diff < 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                self.nearest_rec(near, q, best);
                // `<=` keeps equal-distance points on the far side reachable
                // for the lowest-index tie break.
                if diff.abs() <= best.0 {
                    self.nearest_rec(far, q, best);
                }
            }
        }
    }

    /// The `k` nearest points sorted by `(distance, index)`.
    pub fn k_nearest(&self, q: &Vec3, k: usize) -> Result<Vec<(f64, usize)>> {
        if self.points.is_empty() {
            return Err(GeometryError::EmptySet);
        }
        let mut heap: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        if k > 0 {
            self.knn_rec(0, q, k, &mut heap);
        }
        Ok(heap)
    }

    fn knn_rec(&self, node: usize, q: &Vec3, k: usize, found: &mut Vec<(f64, usize)>) {
        let worst = |found: &Vec<(f64, usize)>| {
            if found.len() < k {
                f64::INFINITY
            } else {
                found[found.len() - 1].0
            }
        };
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let d = (self.points[i] - q).norm();
                    if found.len() == k {
                        let last = found[k - 1];
                        if (d, i) >= last {
                            continue;
                        }
                        found.pop();
                    }
                    let pos = found.partition_point(|&e| e < (d, i));
                    found.insert(pos, (d, i));
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = q[axis] - value;
                let (near, far) = if diff < 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                self.knn_rec(near, q, k, found);
                if diff.abs() <= worst(found) {
                    self.knn_rec(far, q, k, found);
                }
            }
        }
    }

    /// Indices of all points with `(p - q).norm() <= radius`, ascending.
    pub fn within(&self, q: &Vec3, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.points.is_empty() && radius >= 0.0 {
            self.within_rec(0, q, radius, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn within_rec(&self, node: usize, q: &Vec3, radius: f64, out: &mut Vec<usize>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    if (self.points[i] - q).norm() <= radius {
                        out.push(i);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = q[axis] - value;
                if diff <= radius {
                    self.within_rec(left, q, radius, out);
                }
                if -diff <= radius {
                    self.within_rec(right, q, radius, out);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn brute_nearest(points: &[Vec3], q: &Vec3) -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, p) in points.iter().enumerate() {
            let d = (p - q).norm();
            if d < best.0 {
                best = (d, i);
            }
        }
        best
    }

    fn random_points(n: usize, seed: u64) -> Vec<Vec3> {
        let mut rng = crate::rng::seeded(seed);
        (0..n)
            .map(|_| Vec3::new(rng.random(), rng.random(), rng.random()))
            .collect()
    }

    #[test]
    fn simple_nearest() {
        let t = KdTree::new(&[Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 2.0, 0.0)]);
        assert_eq!(t.nearest(&Vec3::zeros()).unwrap(), (1.0, 0));
    }

    #[test]
    fn query_on_a_target_point() {
        let pts = random_points(50, 3);
        let t = KdTree::new(&pts);
        assert_eq!(t.nearest(&pts[17]).unwrap(), (0.0, 17));
    }

    #[test]
    fn empty_set_errors() {
        let t = KdTree::new(&[]);
        assert!(matches!(
            t.nearest(&Vec3::zeros()),
            Err(GeometryError::EmptySet)
        ));
    }

    #[test]
    fn ties_pick_lowest_index() {
        // Many duplicates of the same point spread across leaves.
        let mut pts = random_points(200, 9);
        let dup = Vec3::new(0.5, 0.5, 0.5);
        for i in [3usize, 77, 150, 199] {
            pts[i] = dup;
        }
        let t = KdTree::new(&pts);
        assert_eq!(t.nearest(&dup).unwrap(), (0.0, 3));
        // Grid points equidistant from the query.
        let grid: Vec<Vec3> = (0..4)
            .flat_map(|x| (0..4).map(move |y| Vec3::new(x as f64, y as f64, 0.0)))
            .collect();
        let t = KdTree::new(&grid);
        let q = Vec3::new(1.5, 1.5, 0.0);
        assert_eq!(t.nearest(&q).unwrap(), brute_nearest(&grid, &q));
    }

    #[test]
    fn matches_brute_force_on_random_queries() {
        let pts = random_points(2000, 1);
        let t = KdTree::new(&pts);
        let queries = random_points(10_000, 2);
        for q in &queries {
            assert_eq!(t.nearest(q).unwrap(), brute_nearest(&pts, q));
        }
    }

    #[test]
    fn knn_and_within_match_brute_force() {
        let pts = random_points(500, 5);
        let t = KdTree::new(&pts);
        for q in random_points(200, 6) {
            let mut all: Vec<(f64, usize)> = pts
                .iter()
                .enumerate()
                .map(|(i, p)| ((p - q).norm(), i))
                .collect();
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(t.k_nearest(&q, 8).unwrap(), all[..8].to_vec());
            let r = 0.2;
            let mut expect: Vec<usize> = all.iter().filter(|e| e.0 <= r).map(|e| e.1).collect();
            expect.sort_unstable();
            assert_eq!(t.within(&q, r), expect);
        }
    }
}
