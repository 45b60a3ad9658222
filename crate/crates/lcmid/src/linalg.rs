//! Numeric rank with an explicit tolerance policy, plus Kruskal rank by
//! exhaustive subset testing.
//!
//! Rank decisions are made once, by singular values against a recorded
//! threshold; every other predicate in the crate (full column rank, subset
//! independence) reuses the same rule so borderline cases are visible in the
//! reported spectral gap.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the number of columns for Kruskal-rank computation
/// (subset enumeration is exponential in the column count).
pub const DEFAULT_KRUSKAL_MAX_COLS: usize = 16;

/// Default budget of subset independence tests for one Kruskal-rank call.
pub const DEFAULT_SUBSET_BUDGET: u64 = 200_000;

/// Outcome of a numeric rank computation, with the spectral-gap evidence
/// needed to audit borderline decisions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankResult {
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub tolerance_used: f64,
    /// Smallest singular value counted toward the rank, when any is.
    pub smallest_retained: Option<f64>,
    /// Largest singular value below the tolerance, when any is.
    pub largest_discarded: Option<f64>,
}

/// Outcome of a Kruskal-rank computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KruskalRankResult {
    /// Largest `k` such that every `k`-subset of columns is linearly
    /// independent.
    pub k_rank: usize,
    /// A dependent subset of size `k_rank + 1`, when `k_rank < n_cols`
    /// (the first one in lexicographic order).
    pub witness: Option<Vec<usize>>,
    pub subsets_tested: u64,
    pub tolerance_used: f64,
}

/// Default rank tolerance: `max(rows, cols) * eps * sigma_max`.
pub fn default_tolerance(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Numeric rank by singular value decomposition. `tol` overrides the default
/// threshold of `max(rows, cols) * eps * sigma_max`.
pub fn numeric_rank(m: &DMatrix<f64>, tol: Option<f64>) -> Result<RankResult> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix contains a NaN or infinity".into()));
    }
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(RankResult {
            rank: 0,
            rows,
            cols,
            tolerance_used: tol.unwrap_or(0.0),
            smallest_retained: None,
            largest_discarded: None,
        });
    }
    let mut singular: Vec<f64> = m.singular_values().iter().cloned().collect();
    singular.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sigma_max = singular[0];
    let tolerance = tol.unwrap_or_else(|| default_tolerance(rows, cols, sigma_max));
    let rank = singular.iter().take_while(|&&s| s > tolerance).count();
    Ok(RankResult {
        rank,
        rows,
        cols,
        tolerance_used: tolerance,
        smallest_retained: (rank > 0).then(|| singular[rank - 1]),
        largest_discarded: (rank < singular.len()).then(|| singular[rank]),
    })
}

/// True iff the numeric rank equals the column count; the rank evidence is
/// returned alongside.
pub fn has_full_column_rank(m: &DMatrix<f64>, tol: Option<f64>) -> Result<(bool, RankResult)> {
    let result = numeric_rank(m, tol)?;
    let full = result.rank == result.cols;
    Ok((full, result))
}

/// Kruskal rank with default caps; see [`kruskal_rank_capped`].
pub fn kruskal_rank(m: &DMatrix<f64>, tol: Option<f64>) -> Result<KruskalRankResult> {
    kruskal_rank_capped(m, tol, DEFAULT_KRUSKAL_MAX_COLS, DEFAULT_SUBSET_BUDGET)
}

/// Kruskal rank: the largest `k` such that every `k`-subset of columns is
/// linearly independent. Subset independence reuses [`numeric_rank`] with a
/// tolerance shared across the whole search (derived from the full matrix
/// when not supplied). Sizes are searched ascending and subsets in
/// lexicographic order, so the witness is the lexicographically first
/// smallest dependent subset.
pub fn kruskal_rank_capped(
    m: &DMatrix<f64>,
    tol: Option<f64>,
    max_cols: usize,
    subset_budget: u64,
) -> Result<KruskalRankResult> {
    let (rows, cols) = m.shape();
    if cols > max_cols {
        return Err(Error::CapExceeded {
            what: format!("Kruskal rank over {cols} columns"),
            limit: max_cols as u64,
        });
    }
    // One tolerance for the whole search, anchored at the full matrix so a
    // subset cannot be judged by a different yardstick than its parent.
    let full = numeric_rank(m, tol)?;
    let tolerance = full.tolerance_used;
    let mut tested = 0u64;

    // Every k-subset of a matrix with rank < k is dependent, so sizes past
    // the numeric rank can only terminate at their first subset; the loop
    // below reaches that conclusion on its own.
    for k in 1..=cols {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            tested += 1;
            if tested > subset_budget {
                return Err(Error::CapExceeded {
                    what: "Kruskal-rank subset tests".into(),
                    limit: subset_budget,
                });
            }
            let sub = m.select_columns(subset.iter());
            let sub_rank = numeric_rank(&sub, Some(tolerance))?;
            if sub_rank.rank < k {
                return Ok(KruskalRankResult {
                    k_rank: k - 1,
                    witness: Some(subset),
                    subsets_tested: tested,
                    tolerance_used: tolerance,
                });
            }
            if !next_combination(&mut subset, cols) {
                break;
            }
        }
    }
    let _ = rows;
    Ok(KruskalRankResult {
        k_rank: cols,
        witness: None,
        subsets_tested: tested,
        tolerance_used: tolerance,
    })
}

/// Advance `subset` to the next k-combination of `0..n` in lexicographic
/// order; returns false after the last one.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        let m = DMatrix::<f64>::identity(5, 5);
        let r = numeric_rank(&m, None).unwrap();
        assert_eq!(r.rank, 5);
        assert_eq!(r.smallest_retained, Some(1.0));
        assert_eq!(r.largest_discarded, None);
    }

    #[test]
    fn duplicated_column_drops_rank() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 2.0, 0.0, 1.0, 1.0, 3.0, -1.0, -1.0]);
        let r = numeric_rank(&m, None).unwrap();
        assert_eq!(r.rank, 2);
        let (full, _) = has_full_column_rank(&m, None).unwrap();
        assert!(!full);
    }

    #[test]
    fn rank_rejects_non_finite_entries() {
        let m = DMatrix::from_row_slice(1, 2, &[1.0, f64::INFINITY]);
        assert!(matches!(numeric_rank(&m, None), Err(Error::NonFinite(_))));
    }

    #[test]
    fn intercept_plus_mixed_binary_column_has_full_rank() {
        // Ones column plus a binary column with both values present.
        let m = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0]);
        let (full, _) = has_full_column_rank(&m, None).unwrap();
        assert!(full);
        // The constant-column version is collinear with the intercept.
        let m = DMatrix::from_row_slice(4, 2, &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        let (full, _) = has_full_column_rank(&m, None).unwrap();
        assert!(!full);
    }

    #[test]
    fn kruskal_rank_of_identity() {
        let m = DMatrix::<f64>::identity(4, 4);
        let r = kruskal_rank(&m, None).unwrap();
        assert_eq!(r.k_rank, 4);
        assert!(r.witness.is_none());
    }

    #[test]
    fn kruskal_rank_zero_column() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 2.0, 0.0, 0.0, 1.0]);
        let r = kruskal_rank(&m, None).unwrap();
        assert_eq!(r.k_rank, 0);
        assert_eq!(r.witness, Some(vec![1]));
    }

    #[test]
    fn kruskal_rank_duplicated_pair() {
        // Nonzero columns with one duplicated pair: singletons independent,
        // the pair dependent.
        let m = DMatrix::from_row_slice(3, 4, &[
            1.0, 1.0, 0.0, 2.0, //
            2.0, 2.0, 1.0, 0.0, //
            0.0, 0.0, 1.0, 1.0,
        ]);
        let r = kruskal_rank(&m, None).unwrap();
        assert_eq!(r.k_rank, 1);
        assert_eq!(r.witness, Some(vec![0, 1]));
    }

    #[test]
    fn kruskal_never_exceeds_numeric_rank() {
        let m = DMatrix::from_row_slice(2, 4, &[
            1.0, 0.0, 1.0, 2.0, //
            0.0, 1.0, 1.0, -1.0,
        ]);
        let nr = numeric_rank(&m, None).unwrap();
        let kr = kruskal_rank(&m, None).unwrap();
        assert!(kr.k_rank <= nr.rank);
        assert_eq!(nr.rank, 2);
        assert_eq!(kr.k_rank, 2);
    }

    #[test]
    fn kruskal_respects_column_cap() {
        let m = DMatrix::<f64>::identity(17, 17);
        match kruskal_rank(&m, None) {
            Err(Error::CapExceeded { .. }) => {}
            other => panic!("expected cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn combination_iterator_is_lexicographic() {
        let mut subset = vec![0, 1];
        let mut seen = vec![subset.clone()];
        while next_combination(&mut subset, 4) {
            seen.push(subset.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
