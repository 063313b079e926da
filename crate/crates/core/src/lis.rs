//! Longest non-decreasing subsequence by patience sorting.

use alloc::vec;
use alloc::vec::Vec;

/// Positions (ascending) of one longest non-decreasing subsequence of `values`.
///
/// Runs in O(n log n). Among equally long subsequences the one whose last
/// element is reached first by the pile construction is returned, so the
/// output is fully determined by the input.
pub fn longest_nondecreasing_subsequence<T: Ord>(values: &[T]) -> Vec<usize> {
    // tails[k]: position of the smallest possible last element of a run of length k + 1.
    let mut tails: Vec<usize> = Vec::new();
    let mut predecessor = vec![usize::MAX; values.len()];
    for (pos, value) in values.iter().enumerate() {
        // First pile whose top is strictly greater; equal values extend a run.
        let pile = tails.partition_point(|&t| values[t] <= *value);
        if pile > 0 {
            predecessor[pos] = tails[pile - 1];
        }
        if pile == tails.len() {
            tails.push(pos);
        } else {
            tails[pile] = pos;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cursor = tails.last().copied();
    while let Some(pos) = cursor {
        out.push(pos);
        cursor = (predecessor[pos] != usize::MAX).then(|| predecessor[pos]);
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// O(n²) dynamic programme over run lengths ending at each position.
    fn dp_length(values: &[u32]) -> usize {
        let mut best = vec![1usize; values.len()];
        for i in 0..values.len() {
            for j in 0..i {
                if values[j] <= values[i] {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    #[test]
    fn examples() {
        assert_eq!(longest_nondecreasing_subsequence(&[1, 2, 3]), vec![0, 1, 2]);
        assert_eq!(dp_length(&[3, 1, 2, 5, 4]), 3);
        let picked = longest_nondecreasing_subsequence(&[3, 1, 2, 5, 4]);
        assert_eq!(picked, vec![1, 2, 4]);
        assert_eq!(longest_nondecreasing_subsequence(&[2, 2, 2]), vec![0, 1, 2]);
        assert!(longest_nondecreasing_subsequence::<u32>(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn agrees_with_dp(values in proptest::collection::vec(0u32..20, 0..120)) {
            let picked = longest_nondecreasing_subsequence(&values);
            prop_assert_eq!(picked.len(), dp_length(&values));
            prop_assert!(picked.windows(2).all(|w| w[0] < w[1] && values[w[0]] <= values[w[1]]));
        }
    }
}
