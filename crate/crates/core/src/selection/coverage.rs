use super::{Result, SelectionError};
use crate::geometry::{DilationMode, KdTree};
use crate::Vec3;

/// `radii[i]` is the exact distance from `candidates[i]` to the nearest
/// surface sample.
pub fn compute_radii(candidates: &[Vec3], samples: &[Vec3]) -> Result<Vec<f64>> {
    if candidates.is_empty() || samples.is_empty() {
        return Err(SelectionError::EmptySet);
    }
    let tree = KdTree::new(samples);
    Ok(candidates
        .iter()
        .map(|p| tree.nearest(p).expect("non-empty sample tree").0)
        .collect())
}

/// Offset: `r + delta`; scale: `r * (1 + delta)`.
pub fn dilate_radii(radii: &[f64], delta_r: f64, mode: DilationMode) -> Result<Vec<f64>> {
    if !(delta_r >= 0.0) {
        return Err(SelectionError::NegativeDilation(delta_r));
    }
    Ok(match mode {
        DilationMode::Offset => radii.iter().map(|r| r + delta_r).collect(),
        DilationMode::Scale => radii.iter().map(|r| r * (1.0 + delta_r)).collect(),
    })
}

/// Sparse boolean incidence between surface samples (rows) and dilated
/// candidate balls (columns), stored in both orientations.
///
/// Entry `(j, i)` is set iff `(candidates[i] - samples[j]).norm() <= r'[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageMatrix {
    m: usize,
    n: usize,
    row_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    col_ptr: Vec<usize>,
    col_idx: Vec<u32>,
}

impl CoverageMatrix {
    /// Builds the matrix from per-candidate lists of covered samples.
    pub fn from_columns(m: usize, columns: &[Vec<usize>]) -> CoverageMatrix {
        let n = columns.len();
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut row_count = vec![0usize; m];
        col_ptr.push(0);
        for col in columns {
            let mut sorted = col.clone();
            sorted.sort_unstable();
            sorted.dedup();
            for &j in &sorted {
                assert!(j < m, "sample index {j} out of range");
                row_count[j] += 1;
                col_idx.push(j as u32);
            }
            col_ptr.push(col_idx.len());
        }
        let mut row_ptr = Vec::with_capacity(m + 1);
        row_ptr.push(0);
        for c in &row_count {
            row_ptr.push(row_ptr.last().unwrap() + c);
        }
        let mut fill = row_ptr[..m].to_vec();
        let mut row_idx = vec![0u32; col_idx.len()];
        for i in 0..n {
            for &j in &col_idx[col_ptr[i]..col_ptr[i + 1]] {
                row_idx[fill[j as usize]] = i as u32;
                fill[j as usize] += 1;
            }
        }
        CoverageMatrix {
            m,
            n,
            row_ptr,
            row_idx,
            col_ptr,
            col_idx,
        }
    }

    /// Number of surface samples.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of candidates.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Candidates whose dilated ball covers sample `j`, ascending.
    pub fn covering(&self, j: usize) -> &[u32] {
        &self.row_idx[self.row_ptr[j]..self.row_ptr[j + 1]]
    }

    /// Samples covered by candidate `i`, ascending.
    pub fn covered_by(&self, i: usize) -> &[u32] {
        &self.col_idx[self.col_ptr[i]..self.col_ptr[i + 1]]
    }

    pub fn get(&self, j: usize, i: usize) -> bool {
        self.covered_by(i).binary_search(&(j as u32)).is_ok()
    }
}

/// Exact incidence of samples in dilated balls; the boundary counts as
/// covered.
pub fn build_coverage_matrix(
    candidates: &[Vec3],
    dilated_radii: &[f64],
    samples: &[Vec3],
) -> Result<CoverageMatrix> {
    if candidates.len() != dilated_radii.len() {
        return Err(SelectionError::LengthMismatch(
            candidates.len(),
            dilated_radii.len(),
        ));
    }
    if candidates.is_empty() || samples.is_empty() {
        return Err(SelectionError::EmptySet);
    }
    let tree = KdTree::new(samples);
    let columns: Vec<Vec<usize>> = candidates
        .iter()
        .zip(dilated_radii)
        .map(|(p, &r)| tree.within(p, r))
        .collect();
    Ok(CoverageMatrix::from_columns(samples.len(), &columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_points(n: usize, seed: u64) -> Vec<Vec3> {
        let mut rng = crate::rng::seeded(seed);
        (0..n)
            .map(|_| Vec3::new(rng.random(), rng.random(), rng.random()))
            .collect()
    }

    #[test]
    fn sphere_center_radius_is_one() {
        let mut rng = crate::rng::seeded(0);
        let samples: Vec<Vec3> = (0..100)
            .map(|_| {
                Vec3::new(
                    rng.random::<f64>() - 0.5,
                    rng.random::<f64>() - 0.5,
                    rng.random::<f64>() - 0.5,
                )
                .normalize()
            })
            .collect();
        let r = compute_radii(&[Vec3::zeros()], &samples).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coincident_candidate_has_zero_radius() {
        let samples = random_points(30, 1);
        assert_eq!(compute_radii(&[samples[4]], &samples).unwrap(), vec![0.0]);
    }

    #[test]
    fn radii_match_brute_force() {
        let samples = random_points(1500, 2);
        let cands = random_points(500, 3);
        let r = compute_radii(&cands, &samples).unwrap();
        for (p, ri) in cands.iter().zip(&r) {
            let brute = samples
                .iter()
                .map(|s| (p - s).norm())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(*ri, brute);
        }
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(
            compute_radii(&[], &[Vec3::zeros()]),
            Err(SelectionError::EmptySet)
        );
        assert_eq!(
            compute_radii(&[Vec3::zeros()], &[]),
            Err(SelectionError::EmptySet)
        );
    }

    #[test]
    fn dilation_modes() {
        let off = dilate_radii(&[0.10], 0.02, DilationMode::Offset).unwrap();
        assert!((off[0] - 0.12).abs() < 1e-15);
        let sc = dilate_radii(&[0.10], 0.02, DilationMode::Scale).unwrap();
        assert!((sc[0] - 0.102).abs() < 1e-15);
        let r = [0.1, 0.5, 0.0];
        assert_eq!(
            dilate_radii(&r, 0.0, DilationMode::Offset).unwrap(),
            r.to_vec()
        );
        assert_eq!(
            dilate_radii(&r, 0.0, DilationMode::Scale).unwrap(),
            r.to_vec()
        );
        assert_eq!(
            dilate_radii(&r, -0.1, DilationMode::Offset),
            Err(SelectionError::NegativeDilation(-0.1))
        );
    }

    #[test]
    fn boundary_cases() {
        let s = [Vec3::new(1.0, 0.0, 0.0)];
        let m = build_coverage_matrix(&[Vec3::zeros()], &[1.02], &s).unwrap();
        assert!(m.get(0, 0));
        let m = build_coverage_matrix(&[Vec3::zeros()], &[0.99], &s).unwrap();
        assert!(!m.get(0, 0));
        let m = build_coverage_matrix(&[Vec3::zeros()], &[1.0], &s).unwrap();
        assert!(m.get(0, 0));
    }

    #[test]
    fn matches_dense_brute_force() {
        let samples = random_points(50, 4);
        let cands = random_points(80, 5);
        let mut rng = crate::rng::seeded(6);
        let radii: Vec<f64> = (0..80).map(|_| rng.random::<f64>() * 0.4).collect();
        let m = build_coverage_matrix(&cands, &radii, &samples).unwrap();
        assert_eq!((m.m(), m.n()), (50, 80));
        for (j, s) in samples.iter().enumerate() {
            for i in 0..80 {
                let dense = (cands[i] - s).norm() <= radii[i];
                assert_eq!(m.get(j, i), dense);
                assert_eq!(m.covering(j).contains(&(i as u32)), dense);
            }
        }
    }
}
