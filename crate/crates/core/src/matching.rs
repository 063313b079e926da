//! MST and MST-LIS matching with the `μ + k·σ` threshold.
//!
//! A score of exactly 0 carries no information (degenerate sentences, no shared
//! term), so a simple sentence whose row maximum is 0 is never matched, with or
//! without a threshold.

use alloc::string::ToString;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::lis::longest_nondecreasing_subsequence;
use crate::model::{AlignmentSet, Match, Matcher};
use crate::similarity::SimilarityMatrix;

pub const DEFAULT_K: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThresholdPolicy {
    None,
    MeanPlusKSigma { k: f64 },
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        ThresholdPolicy::MeanPlusKSigma { k: DEFAULT_K }
    }
}

impl ThresholdPolicy {
    pub fn from_k(k: Option<f64>) -> Self {
        k.map_or(ThresholdPolicy::None, |k| ThresholdPolicy::MeanPlusKSigma { k })
    }

    pub fn k(self) -> Option<f64> {
        match self {
            ThresholdPolicy::None => None,
            ThresholdPolicy::MeanPlusKSigma { k } => Some(k),
        }
    }

    /// Minimum accepted score for `matrix`; `-∞` without a threshold.
    pub fn threshold(self, matrix: &SimilarityMatrix) -> f64 {
        match self {
            ThresholdPolicy::None => f64::NEG_INFINITY,
            ThresholdPolicy::MeanPlusKSigma { k } => matrix.mean + k * matrix.stddev,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchOptions {
    /// Also fill the gaps before the first and after the last LIS anchor.
    pub boundary_gaps: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions { boundary_gaps: true }
    }
}

/// First index of the highest value in `row[lo..=hi]`.
fn argmax_in(row: &[f64], lo: usize, hi: usize) -> usize {
    (lo..=hi).fold(lo, |best, j| if row[j] > row[best] { j } else { best })
}

fn row_is_informative(row: &[f64]) -> bool {
    row.iter().copied().fold(f64::NEG_INFINITY, f64::max) != 0.0
}

/// Unthresholded MST proposals: `(simple, complex)` for every informative row.
fn mst_proposals(matrix: &SimilarityMatrix) -> Vec<(usize, usize)> {
    (0..matrix.rows())
        .filter_map(|i| {
            let row = matrix.row(i);
            row_is_informative(row).then(|| (i, argmax_in(row, 0, matrix.cols() - 1)))
        })
        .collect()
}

fn finish(
    matrix: &SimilarityMatrix,
    matcher: Matcher,
    policy: ThresholdPolicy,
    pairs: Vec<(usize, usize)>,
) -> AlignmentSet {
    let threshold = policy.threshold(matrix);
    let matches = pairs
        .into_iter()
        .map(|(i, j)| Match { simple_index: i, complex_index: j, similarity: matrix.get(i, j) })
        .filter(|m| m.similarity >= threshold)
        .collect();
    AlignmentSet {
        pair_id: matrix.pair_id.to_string(),
        measure: matrix.measure,
        matcher,
        threshold_k: policy.k(),
        matches,
    }
}

/// Each simple sentence is matched to its most similar complex sentence
/// (smallest index on ties) if that score reaches the threshold.
pub fn match_mst(matrix: &SimilarityMatrix, policy: ThresholdPolicy) -> AlignmentSet {
    finish(matrix, Matcher::Mst, policy, mst_proposals(matrix))
}

/// MST followed by keeping the longest non-decreasing run of proposed complex
/// indices, then order-preserving gap filling.
///
/// Unmatched simple sentences between two anchors `(i → k)` and `(j → l)` are
/// matched in order to their best column in `[lower, l]`, where `lower`
/// starts at `k` and moves to each gap sentence's chosen column (a zero
/// score is not a choice and leaves `lower` in place). The whole
/// construction is threshold-independent; the threshold only filters the
/// final matches, so raising `k` can only remove matches.
pub fn match_mst_lis(matrix: &SimilarityMatrix, policy: ThresholdPolicy, options: MatchOptions) -> AlignmentSet {
    let proposals = mst_proposals(matrix);
    let columns: Vec<usize> = proposals.iter().map(|&(_, j)| j).collect();
    let anchors: Vec<(usize, usize)> =
        longest_nondecreasing_subsequence(&columns).into_iter().map(|p| proposals[p]).collect();

    let last_col = matrix.cols() - 1;
    let mut pairs = Vec::with_capacity(matrix.rows());
    let fill = |from: usize, to: usize, lo: usize, hi: usize, pairs: &mut Vec<(usize, usize)>| {
        let mut lower = lo;
        for m in from..to {
            let row = matrix.row(m);
            if !row_is_informative(row) {
                continue;
            }
            let c = argmax_in(row, lower, hi);
            if row[c] != 0.0 {
                pairs.push((m, c));
                lower = c;
            }
        }
    };

    if let (Some(&(first_row, first_col)), Some(&(last_row, last_anchor_col))) = (anchors.first(), anchors.last()) {
        if options.boundary_gaps {
            fill(0, first_row, 0, first_col, &mut pairs);
        }
        for window in anchors.windows(2) {
            let ((i, k), (j, l)) = (window[0], window[1]);
            pairs.push((i, k));
            fill(i + 1, j, k, l, &mut pairs);
        }
        pairs.push((last_row, last_anchor_col));
        if options.boundary_gaps {
            fill(last_row + 1, matrix.rows(), last_anchor_col, last_col, &mut pairs);
        }
    }
    finish(matrix, Matcher::MstLis, policy, pairs)
}

/// Dispatches on `matcher`.
pub fn align(
    matrix: &SimilarityMatrix,
    matcher: Matcher,
    policy: ThresholdPolicy,
    options: MatchOptions,
) -> AlignmentSet {
    match matcher {
        Matcher::Mst => match_mst(matrix, policy),
        Matcher::MstLis => match_mst_lis(matrix, policy, options),
    }
}
