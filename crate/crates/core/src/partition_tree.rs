//! Balanced B-ary partition trees and the exact tree distance.
//!
//! Trees are implicit: a node is a contiguous run of leaves, and leaf `l`
//! covers `[l·q + min(l, r), …)` where `n = q·L + r`. Nothing is allocated
//! per node, so trees over millions of characters cost nothing to build.

use std::collections::BTreeMap;

use crate::exact_oracles::edit_distance;
use crate::shift_combiner::ShiftProfile;
use crate::string_oracle::clamped_range;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTree {
    n: usize,
    branching: usize,
    leaves: usize,
}

/// A node with interval `[start, end)`.
///
/// Rates and multiplicative accuracies are per-run quantities and live in the
/// solvers, not here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartitionNode {
    pub start: usize,
    pub end: usize,
    pub depth: usize,
    first_leaf: usize,
    leaf_count: usize,
}

impl PartitionNode {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn is_leaf(&self) -> bool {
        self.leaf_count == 1
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }
}

/// Balanced tree over `[0, n)` with `min(n, leaf_cap)` leaves.
pub fn build_tree(n: usize, branching: usize, leaf_cap: usize) -> Result<PartitionTree, Error> {
    PartitionTree::new(n, branching, leaf_cap)
}

impl PartitionTree {
    pub fn new(n: usize, branching: usize, leaf_cap: usize) -> Result<Self, Error> {
        if n == 0 || branching < 2 || leaf_cap == 0 {
            return Err(Error::InvalidParameter(format!(
                "tree needs n ≥ 1, B ≥ 2, leaf_cap ≥ 1 (got {n}, {branching}, {leaf_cap})"
            )));
        }
        Ok(Self {
            n,
            branching,
            leaves: n.min(leaf_cap),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    fn leaf_start(&self, l: usize) -> usize {
        let (q, r) = (self.n / self.leaves, self.n % self.leaves);
        l * q + l.min(r)
    }

    fn node(&self, first_leaf: usize, leaf_count: usize, depth: usize) -> PartitionNode {
        PartitionNode {
            start: self.leaf_start(first_leaf),
            end: self.leaf_start(first_leaf + leaf_count),
            depth,
            first_leaf,
            leaf_count,
        }
    }

    pub fn root(&self) -> PartitionNode {
        self.node(0, self.leaves, 0)
    }

    /// Children in left-to-right order; empty for leaves.
    pub fn children(&self, v: &PartitionNode) -> Vec<PartitionNode> {
        if v.is_leaf() {
            return Vec::new();
        }
        let c = self.branching.min(v.leaf_count);
        let (q, r) = (v.leaf_count / c, v.leaf_count % c);
        let mut first = v.first_leaf;
        (0..c)
            .map(|t| {
                let cnt = q + usize::from(t < r);
                let child = self.node(first, cnt, v.depth + 1);
                first += cnt;
                child
            })
            .collect()
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        let mut d = 0;
        let mut count = self.leaves;
        while count > 1 {
            count = count.div_ceil(self.branching);
            d += 1;
        }
        d
    }

    /// All nodes at one depth, left to right.
    pub fn level(&self, depth: usize) -> Vec<PartitionNode> {
        let mut cur = vec![self.root()];
        for _ in 0..depth {
            cur = cur.iter().flat_map(|v| self.children(v)).collect();
        }
        cur
    }

    /// Number of nodes per depth, without materialising the levels.
    ///
    /// Even splitting keeps at most two distinct leaf counts per level, so
    /// each level is a small multiset of `(leaf_count, multiplicity)`.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur: BTreeMap<usize, usize> = BTreeMap::from([(self.leaves, 1)]);
        loop {
            out.push(cur.values().sum());
            let mut next = BTreeMap::new();
            for (&cnt, &mult) in cur.iter().filter(|(&c, _)| c > 1) {
                let c = self.branching.min(cnt);
                let (q, r) = (cnt / c, cnt % c);
                *next.entry(q).or_insert(0) += mult * (c - r);
                if r > 0 {
                    *next.entry(q + 1).or_insert(0) += mult * r;
                }
            }
            if next.is_empty() {
                return out;
            }
            cur = next;
        }
    }

    pub fn node_count(&self) -> usize {
        self.level_sizes().iter().sum()
    }
}

/// Exact tree-distance profile of `v` over shifts `|s| ≤ radius`.
///
/// With `cap` set, values are clamped to `radius` at every node, giving the
/// capped tree distance. Minimisation over child shifts is the quadratic
/// direct form so this stays independent of the linear-time combiner.
pub fn tree_distance_profile(
    x: &[u8],
    y: &[u8],
    tree: &PartitionTree,
    v: &PartitionNode,
    radius: usize,
    cap: bool,
) -> ShiftProfile {
    let r = radius as i64;
    let prof = if v.is_leaf() {
        ShiftProfile::from_fn(radius, |s| {
            let (lo, hi) = clamped_range(y.len(), v.start as i64 + s, v.end as i64 + s);
            edit_distance(&x[v.start..v.end], &y[lo..hi]) as f64
        })
    } else {
        let mut acc = ShiftProfile::zeros(radius);
        for c in tree.children(v) {
            let child = tree_distance_profile(x, y, tree, &c, radius, cap);
            for (s, a) in (-r..).zip(acc.values.iter_mut()) {
                // t = s already gives child[s], so farther t cannot win.
                let reach = (child.get(s) / 2.0).floor() as i64;
                let (lo, hi) = ((s - reach).max(-r), (s + reach).min(r));
                let mut best = f64::INFINITY;
                for t in lo..=hi {
                    best = best.min(child.get(t) + (2 * (s - t).abs()) as f64);
                }
                *a += best;
            }
        }
        acc
    };
    if cap {
        prof.capped()
    } else {
        prof
    }
}

/// `TD^{≤K}_{root,0}(X, Y)`.
pub fn tree_distance_exact(x: &[u8], y: &[u8], tree: &PartitionTree, k: usize) -> usize {
    tree_distance_profile(x, y, tree, &tree.root(), k, true).get(0) as usize
}

/// Uncapped `TD(X, Y)`, with child shifts ranging over `|s| ≤ n`.
pub fn tree_distance(x: &[u8], y: &[u8], tree: &PartitionTree) -> usize {
    let radius = x.len().max(y.len());
    tree_distance_profile(x, y, tree, &tree.root(), radius, false).get(0) as usize
}
