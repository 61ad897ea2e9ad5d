//! Brute-force reference implementations.
//!
//! These are deliberately naive and share no code with the fast paths they
//! check. Sizes are expected to stay small.

use crate::exact_oracles::edit_distance;
use crate::partition_tree::{PartitionNode, PartitionTree};
use crate::shift_combiner::ShiftProfile;
use crate::string_oracle::clamped_range;

/// `B_s = min_{s'} A_{s'} + 2|s − s'|` by direct minimisation.
pub fn combine_brute_force(a: &ShiftProfile) -> ShiftProfile {
    ShiftProfile::from_fn(a.k, |s| {
        a.shifts()
            .map(|t| a.get(t) + (2 * (s - t).abs()) as f64)
            .fold(f64::INFINITY, f64::min)
    })
}

/// True when `x` has period `p`: `x[i] = x[i+p]` wherever both exist.
pub fn has_period(x: &[u8], p: usize) -> bool {
    p >= 1 && (p..x.len()).all(|i| x[i] == x[i - p])
}

/// Smallest `p ≥ 1` with [`has_period`].
pub fn smallest_period_naive(x: &[u8]) -> usize {
    (1..=x.len()).find(|&p| has_period(x, p)).unwrap_or(0)
}

/// No nontrivial rotation of `p` equals `p`.
pub fn is_primitive(p: &[u8]) -> bool {
    (1..p.len()).all(|r| p[r..].iter().chain(&p[..r]).ne(p.iter()))
}

/// `bp_K(y)` by DP over every split point.
pub fn block_periodicity_exhaustive(y: &[u8], k: usize) -> usize {
    let n = y.len();
    let mut best = vec![usize::MAX; n + 1];
    best[0] = 0;
    for j in 1..=n {
        for i in 0..j {
            if best[i] != usize::MAX && smallest_period_naive(&y[i..j]) <= k {
                best[j] = best[j].min(best[i] + 1);
            }
        }
    }
    best[n]
}

/// `bp_K(y)` by DP over split points, using that K-periodicity is inherited
/// by substrings: from each start, any prefix of the longest K-periodic run
/// is a valid block.
pub fn block_periodicity_reach(y: &[u8], k: usize) -> usize {
    let n = y.len();
    let reach: Vec<usize> = (0..n)
        .map(|i| {
            let mut best = (i + k).min(n);
            for p in 1..=k {
                let mut t = i + p;
                while t < n && y[t] == y[t - p] {
                    t += 1;
                }
                best = best.max(t.min(n));
            }
            best
        })
        .collect();
    let mut dp = vec![usize::MAX; n + 1];
    dp[0] = 0;
    for i in 0..n {
        if dp[i] == usize::MAX {
            continue;
        }
        for j in i + 1..=reach[i] {
            dp[j] = dp[j].min(dp[i] + 1);
        }
    }
    dp[n]
}

/// Smallest `|s| ≤ k` (ties to the left) with `X_v = Y_{v,s}` exactly.
pub fn matching_shift(x: &[u8], y: &[u8], v: &PartitionNode, k: usize) -> Option<i64> {
    let k = k as i64;
    let mut shifts: Vec<i64> = (-k..=k).collect();
    shifts.sort_by_key(|s| (s.abs(), *s));
    shifts.into_iter().find(|&s| {
        let (lo, hi) = clamped_range(y.len(), v.start as i64 + s, v.end as i64 + s);
        y[lo..hi] == x[v.start..v.end]
    })
}

/// Per level of `tree`, the number of nodes with no exact-match shift.
pub fn unmatched_per_level(x: &[u8], y: &[u8], tree: &PartitionTree, k: usize) -> Vec<usize> {
    (0..=tree.depth())
        .map(|d| {
            tree.level(d)
                .iter()
                .filter(|v| matching_shift(x, y, v, k).is_none())
                .count()
        })
        .collect()
}

/// `ED^{≤K}(X_v, Y_{v,s})` for every shift, by full DP.
pub fn node_profile_exact(x: &[u8], y: &[u8], v: &PartitionNode, k: usize) -> ShiftProfile {
    ShiftProfile::from_fn(k, |s| {
        let (lo, hi) = clamped_range(y.len(), v.start as i64 + s, v.end as i64 + s);
        edit_distance(&x[v.start..v.end], &y[lo..hi]).min(k) as f64
    })
}
