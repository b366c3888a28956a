use super::{CoverageMatrix, SelectionError};

/// Result of the greedy set-cover baseline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyCover {
    /// Chosen candidates in pick order.
    pub selected: Vec<usize>,
    /// Samples still uncovered at the end (infeasible ones plus any left when
    /// `max_points` ran out).
    pub uncovered: Vec<usize>,
    /// Samples no candidate covers at all.
    pub infeasible: Vec<usize>,
}

impl GreedyCover {
    /// `CoverageInfeasible` listing the samples no candidate covers.
    pub fn check_feasible(&self) -> Result<(), SelectionError> {
        if self.infeasible.is_empty() {
            Ok(())
        } else {
            Err(SelectionError::CoverageInfeasible {
                uncovered: self.infeasible.clone(),
            })
        }
    }
}

/// Classic greedy set cover: repeatedly take the candidate covering the most
/// uncovered samples (lowest index on ties) until nothing more can be covered
/// or `max_points` candidates are chosen.
pub fn greedy_scp_baseline(matrix: &CoverageMatrix, max_points: usize) -> GreedyCover {
    let n = matrix.n();
    let m = matrix.m();
    let mut gain: Vec<usize> = (0..n).map(|i| matrix.covered_by(i).len()).collect();
    let mut uncovered = vec![true; m];
    let mut taken = vec![false; n];
    let mut selected = Vec::new();
    while selected.len() < max_points {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if !taken[i] && gain[i] > 0 && best.is_none_or(|b| gain[i] > gain[b]) {
                best = Some(i);
            }
        }
        let Some(b) = best else { break };
        taken[b] = true;
        selected.push(b);
        for &j in matrix.covered_by(b) {
            let j = j as usize;
            if uncovered[j] {
                uncovered[j] = false;
                for &i in matrix.covering(j) {
                    gain[i as usize] -= 1;
                }
            }
        }
    }
    let infeasible = (0..m).filter(|&j| matrix.covering(j).is_empty()).collect();
    GreedyCover {
        selected,
        uncovered: (0..m).filter(|&j| uncovered[j]).collect(),
        infeasible,
    }
}
