//! Sublinear-time `(k, K)`-gap edit distance.
//!
//! The estimator approximates a *tree distance* over a balanced partition of
//! the input, pruning most of the tree with sublinear property testers and
//! aggregating the rest with precision sampling. Module map:
//!
//! - [`string_oracle`]: read-counting input strings, periods, block periodicity
//! - [`exact_oracles`]: full DP, Landau-Vishkin, alignments, the many-shifts 2-approximation
//! - [`partition_tree`]: implicit balanced B-ary partition trees and exact tree distance
//! - [`precision_sampling`]: precision draws and median-of-max sum recovery
//! - [`shift_combiner`]: shift profiles and the slope-2 range-minimum
//! - [`property_testers`]: equality, periodicity and matching tests
//! - [`ako_baseline`]: the unpruned recursion with only the rate rule
//! - [`main_solver`]: the pruned recursion and the gap decision
//! - [`workbench`]: generators, batch runner and reports
//! - [`oracle`]: brute-force references used by tests and `selftest`

pub mod ako_baseline;
pub mod exact_oracles;
pub mod main_solver;
pub mod oracle;
pub mod partition_tree;
pub mod precision_sampling;
pub mod property_testers;
pub mod selftest;
pub mod shift_combiner;
pub mod string_oracle;
pub mod workbench;

pub use exact_oracles::{capped_edit_distance, ed_many_shifts_2approx, edit_distance};
pub use ako_baseline::Profile;
pub use main_solver::{decide_gap, GapConfig, GapReport, SolverConfig, Verdict};
pub use partition_tree::{PartitionNode, PartitionTree};
pub use shift_combiner::ShiftProfile;
pub use string_oracle::{StringOracle, Text};

/// The seedable generator used everywhere randomness is needed.
pub type Rng = rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
}
