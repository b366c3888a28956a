use super::{CoverageMatrix, Result, SelectionError, SelectionState};
use crate::Vec3;

/// Standard deviations below this are treated as zero.
pub const ZERO_STD: f64 = 1e-12;

/// Scores of one remaining candidate in one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateScore {
    pub index: usize,
    pub raw_cove: f64,
    pub raw_unif: f64,
    pub std_cove: f64,
    pub std_unif: f64,
    pub score: f64,
}

/// Number of still-uncovered samples each remaining candidate covers,
/// aligned with `state.remaining()`.
pub fn coverage_scores(matrix: &CoverageMatrix, state: &SelectionState) -> Vec<usize> {
    state
        .remaining()
        .iter()
        .map(|&i| {
            matrix
                .covered_by(i)
                .iter()
                .filter(|&&j| state.is_uncovered(j as usize))
                .count()
        })
        .collect()
}

/// Distance from each remaining candidate to the nearest selected point,
/// aligned with `state.remaining()`. All zeros while nothing is selected.
pub fn uniformity_scores(candidates: &[Vec3], state: &SelectionState) -> Vec<f64> {
    state
        .remaining()
        .iter()
        .map(|&i| {
            state
                .selected()
                .iter()
                .map(|&s| (candidates[i] - candidates[s]).norm())
                .fold(None, |acc: Option<f64>, d| {
                    Some(acc.map_or(d, |a| a.min(d)))
                })
                .unwrap_or(0.0)
        })
        .collect()
}

/// `(v - mean) / std` with the sample standard deviation; all zeros for a
/// single element or a standard deviation below [`ZERO_STD`].
pub fn standardize(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    let std = var.sqrt();
    if !(std >= ZERO_STD) {
        return vec![0.0; n];
    }
    values.iter().map(|v| (v - mean) / std).collect()
}

/// `cove + omega * unif`, elementwise.
pub fn final_scores(cove_std: &[f64], unif_std: &[f64], omega: f64) -> Result<Vec<f64>> {
    if cove_std.len() != unif_std.len() {
        return Err(SelectionError::LengthMismatch(
            cove_std.len(),
            unif_std.len(),
        ));
    }
    Ok(cove_std
        .iter()
        .zip(unif_std)
        .map(|(c, u)| c + omega * u)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::CoverageMatrix;

    #[test]
    fn standardize_examples() {
        assert_eq!(standardize(&[1.0, 2.0, 3.0]), vec![-1.0, 0.0, 1.0]);
        assert_eq!(standardize(&[5.0, 5.0, 5.0]), vec![0.0; 3]);
        assert_eq!(standardize(&[2.0]), vec![0.0]);
        assert!(standardize(&[]).is_empty());
    }

    #[test]
    fn final_score_examples() {
        assert!((final_scores(&[0.5], &[-0.2], 1.0).unwrap()[0] - 0.3).abs() < 1e-15);
        let c = [0.7, -1.3, 2.0];
        assert_eq!(
            final_scores(&c, &[9.0, 9.0, -4.0], 0.0).unwrap(),
            c.to_vec()
        );
        assert_eq!(
            final_scores(&[1.0, -1.0], &[-1.0, 1.0], 2.0).unwrap(),
            vec![-1.0, 1.0]
        );
        assert_eq!(
            final_scores(&[1.0], &[1.0, 2.0], 1.0),
            Err(SelectionError::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn coverage_counts_only_uncovered_samples() {
        // Candidate 0 covers samples 0..7, candidate 1 covers 0..3.
        let m = CoverageMatrix::from_columns(10, &[(0..7).collect(), (0..3).collect()]);
        let mut st = SelectionState::new(2, 10);
        assert_eq!(coverage_scores(&m, &st), vec![7, 3]);
        st.select(0, &m);
        assert_eq!(coverage_scores(&m, &st), vec![0]);
    }

    #[test]
    fn uniformity_examples() {
        let pts = [
            Vec3::zeros(),
            Vec3::x(),
            Vec3::new(0.4, 0.0, 0.0),
            Vec3::x(),
        ];
        let m = CoverageMatrix::from_columns(1, &[vec![], vec![], vec![], vec![]]);
        let mut st = SelectionState::new(4, 1);
        assert_eq!(uniformity_scores(&pts, &st), vec![0.0; 4]);
        st.select(0, &m);
        st.select(1, &m);
        let u = uniformity_scores(&pts, &st);
        assert_eq!(st.remaining(), &[2, 3]);
        assert!((u[0] - 0.4).abs() < 1e-15);
        assert_eq!(u[1], 0.0);
    }
}
