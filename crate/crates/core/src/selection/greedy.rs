use super::scoring::{standardize, CandidateScore};
use super::{CoverageMatrix, Result, SelectionError};
use crate::geometry::DilationMode;
use crate::Vec3;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionConfig {
    /// Target number of skeletal points `|V|`.
    pub target_v: usize,
    /// Weight of the uniformity score.
    pub omega: f64,
    pub delta_r: f64,
    pub dilation_mode: DilationMode,
    /// Pick the lowest score instead of the highest.
    pub argmin: bool,
}

impl SelectionConfig {
    pub fn new(target_v: usize) -> SelectionConfig {
        SelectionConfig {
            target_v,
            ..SelectionConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_v == 0 {
            return Err(SelectionError::InvalidConfig(
                "target_v must be at least 1".into(),
            ));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(SelectionError::InvalidConfig(format!(
                "omega must be >= 0, got {}",
                self.omega
            )));
        }
        if !(self.delta_r >= 0.0 && self.delta_r.is_finite()) {
            return Err(SelectionError::NegativeDilation(self.delta_r));
        }
        Ok(())
    }
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            target_v: 1,
            omega: 1.0,
            delta_r: 0.02,
            dilation_mode: DilationMode::Offset,
            argmin: false,
        }
    }
}

/// Partition of the candidates into selected / remaining plus the set of
/// samples not covered by any selected ball.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionState {
    selected: Vec<usize>,
    remaining: Vec<usize>,
    uncovered: Vec<bool>,
    uncovered_count: usize,
    k: usize,
    pub last_scores: Vec<CandidateScore>,
}

impl SelectionState {
    /// Initial state: nothing selected, every sample uncovered, `k = 1`.
    pub fn new(n_candidates: usize, m_samples: usize) -> SelectionState {
        SelectionState {
            selected: Vec::new(),
            remaining: (0..n_candidates).collect(),
            uncovered: vec![true; m_samples],
            uncovered_count: m_samples,
            k: 1,
            last_scores: Vec::new(),
        }
    }

    /// Selected candidates in selection order.
    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    /// Unselected candidates, ascending.
    pub fn remaining(&self) -> &[usize] {
        &self.remaining
    }

    pub fn is_uncovered(&self, j: usize) -> bool {
        self.uncovered[j]
    }

    pub fn uncovered_count(&self) -> usize {
        self.uncovered_count
    }

    pub fn uncovered_indices(&self) -> Vec<usize> {
        (0..self.uncovered.len())
            .filter(|&j| self.uncovered[j])
            .collect()
    }

    /// 1-based iteration counter; always `selected().len() + 1`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Fraction of samples covered by the selected balls.
    pub fn coverage_rate(&self) -> f64 {
        if self.uncovered.is_empty() {
            return 1.0;
        }
        1.0 - self.uncovered_count as f64 / self.uncovered.len() as f64
    }

    /// Moves `i` from remaining to selected and marks its samples covered.
    /// Returns the newly covered sample indices.
    pub fn select(&mut self, i: usize, matrix: &CoverageMatrix) -> Vec<usize> {
        let pos = self
            .remaining
            .binary_search(&i)
            .unwrap_or_else(|_| panic!("candidate {i} is not remaining"));
        self.remaining.remove(pos);
        self.selected.push(i);
        self.k += 1;
        let mut newly = Vec::new();
        for &j in matrix.covered_by(i) {
            let j = j as usize;
            if self.uncovered[j] {
                self.uncovered[j] = false;
                self.uncovered_count -= 1;
                newly.push(j);
            }
        }
        newly
    }
}

/// One row of the selection trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub chosen: usize,
    pub raw_cove: f64,
    pub raw_unif: f64,
    pub std_cove: f64,
    pub std_unif: f64,
    pub score: f64,
    pub uncovered_after: usize,
}

/// Full score vectors of one iteration, aligned with `remaining`.
#[derive(Debug, Clone, Copy)]
pub struct IterationScores<'a> {
    pub k: usize,
    pub remaining: &'a [usize],
    pub raw_cove: &'a [f64],
    pub raw_unif: &'a [f64],
    pub std_cove: &'a [f64],
    pub std_unif: &'a [f64],
    pub score: &'a [f64],
    pub chosen: usize,
}

/// Runs the greedy selection loop. See [`select_skeletal_points_observed`].
pub fn select_skeletal_points(
    candidates: &[Vec3],
    matrix: &CoverageMatrix,
    config: &SelectionConfig,
) -> Result<(SelectionState, Vec<IterationRecord>)> {
    select_skeletal_points_observed(candidates, matrix, config, |_| {})
}

/// Greedy selection: while samples remain uncovered and fewer than `target_v`
/// points are selected, score every remaining candidate by standardized
/// coverage plus `omega` times standardized uniformity and take the best
/// (ties go to the lowest index).
///
/// Coverage counts and nearest-selected distances are maintained
/// incrementally; both are exact (integer counts and a running minimum), so
/// every iteration sees the same values a full recount would produce.
pub fn select_skeletal_points_observed(
    candidates: &[Vec3],
    matrix: &CoverageMatrix,
    config: &SelectionConfig,
    mut observer: impl FnMut(&IterationScores<'_>),
) -> Result<(SelectionState, Vec<IterationRecord>)> {
    config.validate()?;
    if candidates.is_empty() {
        return Err(SelectionError::EmptyCandidates);
    }
    if candidates.len() != matrix.n() {
        return Err(SelectionError::LengthMismatch(candidates.len(), matrix.n()));
    }
    let n = candidates.len();
    let mut state = SelectionState::new(n, matrix.m());
    let mut cove_count: Vec<usize> = (0..n).map(|i| matrix.covered_by(i).len()).collect();
    let mut nearest_selected = vec![f64::INFINITY; n];
    let mut trace = Vec::new();

    let mut raw_cove = Vec::with_capacity(n);
    let mut raw_unif = Vec::with_capacity(n);
    let mut score = Vec::with_capacity(n);
    while state.uncovered_count() > 0
        && state.k() <= config.target_v
        && !state.remaining().is_empty()
    {
        let first = state.selected().is_empty();
        raw_cove.clear();
        raw_unif.clear();
        for &i in state.remaining() {
            raw_cove.push(cove_count[i] as f64);
            raw_unif.push(if first { 0.0 } else { nearest_selected[i] });
        }
        let std_cove = standardize(&raw_cove);
        let std_unif = standardize(&raw_unif);
        score.clear();
        score.extend(
            std_cove
                .iter()
                .zip(&std_unif)
                .map(|(c, u)| c + config.omega * u),
        );

        let mut best = 0usize;
        for (pos, &s) in score.iter().enumerate().skip(1) {
            let better = if config.argmin {
                s < score[best]
            } else {
                s > score[best]
            };
            if better {
                best = pos;
            }
        }
        let chosen = state.remaining()[best];
        observer(&IterationScores {
            k: state.k(),
            remaining: state.remaining(),
            raw_cove: &raw_cove,
            raw_unif: &raw_unif,
            std_cove: &std_cove,
            std_unif: &std_unif,
            score: &score,
            chosen,
        });
        state.last_scores = state
            .remaining()
            .iter()
            .enumerate()
            .map(|(pos, &index)| CandidateScore {
                index,
                raw_cove: raw_cove[pos],
                raw_unif: raw_unif[pos],
                std_cove: std_cove[pos],
                std_unif: std_unif[pos],
                score: score[pos],
            })
            .collect();
        let record_k = state.k();

        for j in state.select(chosen, matrix) {
            for &i in matrix.covering(j) {
                cove_count[i as usize] -= 1;
            }
        }
        let c = candidates[chosen];
        for &i in state.remaining() {
            let d = (candidates[i] - c).norm();
            if d < nearest_selected[i] {
                nearest_selected[i] = d;
            }
        }
        trace.push(IterationRecord {
            k: record_k,
            chosen,
            raw_cove: raw_cove[best],
            raw_unif: raw_unif[best],
            std_cove: std_cove[best],
            std_unif: std_unif[best],
            score: score[best],
            uncovered_after: state.uncovered_count(),
        });
    }
    Ok((state, trace))
}

pub const TRACE_CSV_HEADER: &str =
    "k,chosen_index,raw_cove,raw_unif,std_cove,std_unif,score,uncovered_remaining";

/// One CSV row per iteration, with [`TRACE_CSV_HEADER`].
pub fn trace_to_csv(trace: &[IterationRecord]) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for r in trace {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.k,
            r.chosen,
            r.raw_cove,
            r.raw_unif,
            r.std_cove,
            r.std_unif,
            r.score,
            r.uncovered_after
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::{coverage_scores, uniformity_scores};

    fn line(n: usize) -> Vec<Vec3> {
        (0..n).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect()
    }

    #[test]
    fn single_full_cover_terminates_early() {
        let m = CoverageMatrix::from_columns(6, &[(0..6).collect(), vec![0, 1], vec![2]]);
        let (st, trace) = select_skeletal_points(&line(3), &m, &SelectionConfig::new(5)).unwrap();
        assert_eq!(st.selected(), &[0]);
        assert_eq!(trace.len(), 1);
        assert_eq!(st.uncovered_count(), 0);
        assert_eq!(st.coverage_rate(), 1.0);
    }

    #[test]
    fn disjoint_coverage_picks_in_descending_order() {
        // Coverage 1, 5, 3 over disjoint samples. Iteration 1 is pure coverage;
        // the two leftovers are equidistant from the first pick, so the
        // uniformity term standardizes to zero.
        let cols = vec![vec![8], (0..5).collect(), (5..8).collect()];
        let m = CoverageMatrix::from_columns(9, &cols);
        let pts = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
        ];
        let (st, trace) = select_skeletal_points(&pts, &m, &SelectionConfig::new(3)).unwrap();
        assert_eq!(st.selected(), &[1, 2, 0]);
        assert_eq!(trace[0].raw_cove, 5.0);
        assert_eq!(trace[0].raw_unif, 0.0);
        assert_eq!(trace.last().unwrap().uncovered_after, 0);
    }

    #[test]
    fn deterministic_trace() {
        let cols: Vec<Vec<usize>> = (0..20).map(|i| ((i % 7)..(i % 7 + 4)).collect()).collect();
        let m = CoverageMatrix::from_columns(12, &cols);
        let pts: Vec<Vec3> = (0..20)
            .map(|i| Vec3::new((i * 7 % 5) as f64, i as f64 * 0.1, 0.0))
            .collect();
        let cfg = SelectionConfig::new(6);
        let a = select_skeletal_points(&pts, &m, &cfg).unwrap();
        let b = select_skeletal_points(&pts, &m, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn incremental_scores_equal_recount() {
        let cols: Vec<Vec<usize>> = (0..30)
            .map(|i| (0..40).filter(|j| (i * 13 + j * 7) % 5 < 2).collect())
            .collect();
        let m = CoverageMatrix::from_columns(40, &cols);
        let pts: Vec<Vec3> = (0..30)
            .map(|i| {
                Vec3::new(
                    (i as f64 * 0.37).sin(),
                    (i as f64 * 1.3).cos(),
                    i as f64 * 0.01,
                )
            })
            .collect();
        let mut replay = SelectionState::new(30, 40);
        let mut checked = 0;
        select_skeletal_points_observed(&pts, &m, &SelectionConfig::new(8), |it| {
            assert_eq!(it.remaining, replay.remaining());
            let cove: Vec<f64> = coverage_scores(&m, &replay)
                .into_iter()
                .map(|c| c as f64)
                .collect();
            assert_eq!(it.raw_cove, cove.as_slice());
            assert_eq!(it.raw_unif, uniformity_scores(&pts, &replay).as_slice());
            replay.select(it.chosen, &m);
            checked += 1;
        })
        .unwrap();
        assert!(checked > 1);
    }

    #[test]
    fn stops_when_candidates_run_out() {
        let m = CoverageMatrix::from_columns(5, &[vec![0], vec![1]]);
        let (st, _) = select_skeletal_points(&line(2), &m, &SelectionConfig::new(10)).unwrap();
        assert_eq!(st.selected().len(), 2);
        assert_eq!(st.uncovered_count(), 3);
    }

    #[test]
    fn errors() {
        let m = CoverageMatrix::from_columns(1, &[]);
        assert_eq!(
            select_skeletal_points(&[], &m, &SelectionConfig::new(1)).unwrap_err(),
            SelectionError::EmptyCandidates
        );
        let m = CoverageMatrix::from_columns(1, &[vec![0]]);
        assert!(select_skeletal_points(&line(1), &m, &SelectionConfig::new(0)).is_err());
    }

    #[test]
    fn argmin_switch_picks_lowest_score() {
        let cols = vec![vec![0, 1, 2], vec![3], vec![4, 5]];
        let m = CoverageMatrix::from_columns(6, &cols);
        let mut cfg = SelectionConfig::new(1);
        cfg.argmin = true;
        let (st, _) = select_skeletal_points(&line(3), &m, &cfg).unwrap();
        assert_eq!(st.selected(), &[1]);
    }

    #[test]
    fn trace_csv_has_one_row_per_iteration() {
        let m = CoverageMatrix::from_columns(3, &[vec![0], vec![1], vec![2]]);
        let (_, trace) = select_skeletal_points(&line(3), &m, &SelectionConfig::new(3)).unwrap();
        let csv = trace_to_csv(&trace);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], TRACE_CSV_HEADER);
        assert_eq!(lines.len(), 4);
    }
}
