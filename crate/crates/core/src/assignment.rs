//! Exact maximum-weight assignment on a dense rectangular weight matrix.
//!
//! Shortest augmenting path Hungarian method with row/column potentials,
//! O(r²·c). The smaller side is always fully matched, so the result is a
//! maximum-cardinality matching of maximum total weight. Weights may be
//! negative.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `(row, column)` pairs sorted by row.
    pub pairs: Vec<(usize, usize)>,
    pub total: f64,
}

/// `weights` is row-major with `rows * cols` entries.
pub fn max_weight_assignment(weights: &[f64], rows: usize, cols: usize) -> Assignment {
    assert_eq!(weights.len(), rows * cols, "weight matrix has wrong size");
    if rows == 0 || cols == 0 {
        return Assignment { pairs: Vec::new(), total: 0.0 };
    }
    let mut pairs = if rows <= cols {
        solve(rows, cols, |i, j| -weights[i * cols + j])
    } else {
        let mut t = solve(cols, rows, |i, j| -weights[j * cols + i]);
        for p in &mut t {
            *p = (p.1, p.0);
        }
        t
    };
    pairs.sort_unstable();
    let total = pairs.iter().map(|&(i, j)| weights[i * cols + j]).sum();
    Assignment { pairs, total }
}

/// Minimum-cost assignment of every row (`n <= m`) to a distinct column.
fn solve(n: usize, m: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<(usize, usize)> {
    // 1-based; column 0 is the virtual source of each augmentation.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[col0] = true;
            let row0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let reduced = cost(row0 - 1, j - 1) - u[row0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = col0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    col1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    (1..=m).filter(|&j| owner[j] != 0).map(|j| (owner[j] - 1, j - 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Best total over all injections of the smaller side into the larger.
    fn brute_force(weights: &[f64], rows: usize, cols: usize) -> f64 {
        fn rec(w: &[f64], rows: usize, cols: usize, row: usize, used: &mut Vec<bool>, transpose: bool) -> f64 {
            let (small, large) = if transpose { (cols, rows) } else { (rows, cols) };
            if row == small {
                return 0.0;
            }
            let mut best = f64::NEG_INFINITY;
            for j in 0..large {
                if used[j] {
                    continue;
                }
                used[j] = true;
                let here = if transpose { w[j * cols + row] } else { w[row * cols + j] };
                best = best.max(here + rec(w, rows, cols, row + 1, used, transpose));
                used[j] = false;
            }
            best
        }
        let transpose = rows > cols;
        let mut used = vec![false; rows.max(cols)];
        rec(weights, rows, cols, 0, &mut used, transpose)
    }

    #[test]
    fn picks_the_anti_diagonal_when_it_wins() {
        let w = [1.0, 5.0, 5.0, 1.0];
        let a = max_weight_assignment(&w, 2, 2);
        assert_eq!(a.pairs, vec![(0, 1), (1, 0)]);
        assert_eq!(a.total, 10.0);
    }

    #[test]
    fn rectangular_and_negative() {
        let w = [-0.5, -0.2, -0.9, 0.3, -0.1, -0.4];
        let a = max_weight_assignment(&w, 3, 2);
        assert_eq!(a.pairs.len(), 2);
        assert!((a.total - brute_force(&w, 3, 2)).abs() < 1e-12);
        assert!(max_weight_assignment(&[], 0, 4).pairs.is_empty());
    }

    proptest! {
        #[test]
        fn matches_enumeration((rows, cols, w) in (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(-1.0f64..1.0, r * c))
        })) {
            let a = max_weight_assignment(&w, rows, cols);
            prop_assert_eq!(a.pairs.len(), rows.min(cols));
            let mut seen_rows = vec![false; rows];
            let mut seen_cols = vec![false; cols];
            for &(i, j) in &a.pairs {
                prop_assert!(!seen_rows[i] && !seen_cols[j]);
                seen_rows[i] = true;
                seen_cols[j] = true;
            }
            prop_assert!((a.total - brute_force(&w, rows, cols)).abs() < 1e-9);
        }
    }
}
