//! Candidate ball radii, the coverage matrix and the greedy coverage +
//! uniformity selection loop, with a classic greedy set-cover baseline.

mod baseline;
mod coverage;
mod greedy;
mod scoring;

pub use baseline::{greedy_scp_baseline, GreedyCover};
pub use coverage::{build_coverage_matrix, compute_radii, dilate_radii, CoverageMatrix};
pub use greedy::{
    select_skeletal_points, select_skeletal_points_observed, trace_to_csv, IterationRecord,
    IterationScores, SelectionConfig, SelectionState, TRACE_CSV_HEADER,
};
pub use scoring::{
    coverage_scores, final_scores, standardize, uniformity_scores, CandidateScore, ZERO_STD,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SelectionError {
    #[error("empty point set")]
    EmptySet,
    #[error("dilation must be non-negative, got {0}")]
    NegativeDilation(f64),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no candidates to select from")]
    EmptyCandidates,
    #[error("invalid selection config: {0}")]
    InvalidConfig(String),
    #[error("{} sample(s) are covered by no candidate", uncovered.len())]
    CoverageInfeasible { uncovered: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, SelectionError>;
