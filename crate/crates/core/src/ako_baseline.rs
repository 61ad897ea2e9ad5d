//! Solver configuration and the baseline recursion whose only pruning rule
//! is "a node shorter than its additive slack returns zeros".

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exact_oracles::capped_edit_distance;
use crate::partition_tree::{PartitionNode, PartitionTree};
use crate::precision_sampling::{recover_rows, sample_precision, PrecisionParams, PrecisionSample};
use crate::shift_combiner::{combine, ShiftProfile};
use crate::string_oracle::StringOracle;
use crate::{Error, Rng};

/// Environment variable that picks the default [`Profile`].
pub const PROFILE_ENV: &str = "SUBED_PROFILE";

/// Replica counts above this are refused instead of allocated.
pub const MAX_LAMBDA: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Constants exactly as the analysis states them.
    Paper,
    /// Union-bound constants shrunk to sizes that fit on a desk.
    Desk,
}

impl Profile {
    /// `SUBED_PROFILE` if set and valid, otherwise [`Profile::Desk`].
    pub fn from_env() -> Self {
        std::env::var(PROFILE_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(Profile::Desk)
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            other => Err(Error::InvalidParameter(format!("unknown profile {other:?}"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Paper => "paper",
            Profile::Desk => "desk",
        })
    }
}

/// Desk-profile precision sampling: `ε` is decoupled from the depth so that
/// `λ` stays in the hundreds.
pub const DESK_EPS: f64 = 0.25;
pub const DESK_C_LAMBDA: f64 = 1.0;
pub const DESK_LEAF_CAP_EXPONENT: u32 = 4;

/// Everything a solver needs besides the strings and the RNG.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// The cap `K`; shifts range over `{−K..K}`.
    pub k: usize,
    pub branching: usize,
    pub profile: Profile,
    pub eps_psl: f64,
    pub delta_psl: f64,
    pub c_lambda: f64,
    pub root_rate: f64,
    /// `α_v = alpha_root · (1 − alpha_decay)^depth`.
    pub alpha_root: f64,
    pub alpha_decay: f64,
    /// Leaves of the (cut) tree: `min(n, leaf_cap)`.
    pub leaf_cap: usize,
    pub leaf_cap_exponent: Option<u32>,
    /// Failure probability handed to each property test.
    pub tester_delta: f64,
    /// Nodes with `|X_v| ≤ short_factor · K²` are solved directly.
    pub short_factor: usize,
    /// The random-like interrupt fires above `interrupt_factor · K` nodes on a level.
    pub interrupt_factor: usize,
}

fn log2_at_least_one(x: usize) -> f64 {
    (x.max(2) as f64).log2()
}

fn check_shape(n: usize, k: usize, b: usize) -> Result<(), Error> {
    if n == 0 || k == 0 || b < 2 {
        return Err(Error::InvalidParameter(format!(
            "solver needs n ≥ 1, K ≥ 1, B ≥ 2 (got {n}, {k}, {b})"
        )));
    }
    Ok(())
}

impl SolverConfig {
    /// Parameters of the baseline: a full tree with `n` leaves,
    /// `α_v = 2(1 − (2 log n)⁻¹)^d` and `u ∼ D((2 log n)⁻¹, 0.01/(Kn))`.
    pub fn ako(n: usize, k: usize, branching: usize, profile: Profile) -> Result<Self, Error> {
        check_shape(n, k, branching)?;
        let logn = log2_at_least_one(n);
        let tree = PartitionTree::new(n, branching, n)?;
        let (eps, delta, c) = match profile {
            Profile::Paper => (1.0 / (2.0 * logn), 0.01 / (k as f64 * n as f64), 8.0),
            Profile::Desk => (DESK_EPS, 0.01 / (k as f64 * tree.node_count() as f64), DESK_C_LAMBDA),
        };
        Ok(Self {
            k,
            branching,
            profile,
            eps_psl: eps,
            delta_psl: delta,
            c_lambda: c,
            root_rate: 1000.0 / k as f64,
            alpha_root: 2.0,
            alpha_decay: 1.0 / (2.0 * logn),
            leaf_cap: n,
            leaf_cap_exponent: None,
            tester_delta: 0.0,
            short_factor: 0,
            interrupt_factor: 0,
        })
    }

    /// Parameters of the pruned solver: a tree cut at `K^c` leaves,
    /// `α_v = 10(1 − (200 log K)⁻¹)^d` and testers at rate `3r_v`.
    pub fn main(n: usize, k: usize, branching: usize, profile: Profile) -> Result<Self, Error> {
        check_shape(n, k, branching)?;
        let logk = log2_at_least_one(k);
        let kf = k as f64;
        let exponent = match profile {
            Profile::Paper => 100,
            Profile::Desk => DESK_LEAF_CAP_EXPONENT,
        };
        let leaf_cap = k.checked_pow(exponent).unwrap_or(usize::MAX);
        let (eps, delta, c, tester_delta) = match profile {
            Profile::Paper => (
                1.0 / (200.0 * logk),
                (0.01 * kf.powi(-101)).max(f64::MIN_POSITIVE),
                8.0,
                (0.01 * kf.powi(-100)).max(f64::MIN_POSITIVE),
            ),
            Profile::Desk => {
                let nodes = PartitionTree::new(n, branching, leaf_cap)?.node_count() as f64;
                (DESK_EPS, 0.01 / (kf * nodes), DESK_C_LAMBDA, 0.01 / nodes)
            }
        };
        Ok(Self {
            k,
            branching,
            profile,
            eps_psl: eps,
            delta_psl: delta,
            c_lambda: c,
            root_rate: 1000.0 / kf,
            alpha_root: 10.0,
            alpha_decay: 1.0 / (200.0 * logk),
            leaf_cap,
            leaf_cap_exponent: Some(exponent),
            tester_delta,
            short_factor: 100,
            interrupt_factor: 20,
        })
    }

    pub fn alpha(&self, depth: usize) -> f64 {
        self.alpha_root * (1.0 - self.alpha_decay).powi(depth as i32)
    }

    pub fn tree(&self, n: usize) -> Result<PartitionTree, Error> {
        PartitionTree::new(n, self.branching, self.leaf_cap)
    }

    pub fn psl(&self) -> Result<PrecisionParams, Error> {
        let p = PrecisionParams::with_constant(self.eps_psl, self.delta_psl, self.c_lambda)?;
        if p.lambda > MAX_LAMBDA {
            return Err(Error::InvalidParameter(format!(
                "precision sampling would need λ = {} replicas per draw (limit {MAX_LAMBDA})",
                p.lambda
            )));
        }
        Ok(p)
    }
}

/// Sums child profiles after the slope-2 range minimum, shift by shift, and caps at `K`.
pub(crate) fn aggregate(k: usize, children: &[ShiftProfile], samples: &[PrecisionSample]) -> ShiftProfile {
    let rows: Vec<Vec<f64>> = children.iter().map(|c| combine(c).values).collect();
    let refs: Vec<&PrecisionSample> = samples.iter().collect();
    ShiftProfile::from_values(k, recover_rows(&rows, &refs)).capped()
}

/// `ED^{≤K}(X_v, Y_{v,s})` for every shift, one capped Landau-Vishkin run each.
pub(crate) fn exact_node_profile(x: &StringOracle, y: &StringOracle, v: &PartitionNode, k: usize) -> ShiftProfile {
    let xv = x.view(v.start, v.end);
    ShiftProfile::from_fn(k, |s| {
        let ys = y.clamped_view(v.start as i64 + s, v.end as i64 + s);
        capped_edit_distance(&xv, &ys, k) as f64
    })
}

/// One run of the baseline over a fixed pair of strings.
pub struct AkoSolver<'a> {
    x: &'a StringOracle,
    y: &'a StringOracle,
    tree: PartitionTree,
    config: SolverConfig,
    psl: PrecisionParams,
    rng: Rng,
    /// Nodes the recursion reached.
    pub active_nodes: usize,
}

impl<'a> AkoSolver<'a> {
    pub fn new(x: &'a StringOracle, y: &'a StringOracle, config: SolverConfig, rng: Rng) -> Result<Self, Error> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let tree = config.tree(x.len())?;
        let psl = config.psl()?;
        Ok(Self {
            x,
            y,
            tree,
            config,
            psl,
            rng,
            active_nodes: 0,
        })
    }

    pub fn tree(&self) -> &PartitionTree {
        &self.tree
    }

    /// `Δ_{root,·}` at the configured root rate.
    pub fn solve_root(&mut self) -> ShiftProfile {
        let root = self.tree.root();
        self.solve_node(&root, self.config.root_rate)
    }

    pub fn solve_node(&mut self, v: &PartitionNode, rate: f64) -> ShiftProfile {
        self.active_nodes += 1;
        let k = self.config.k;
        if v.is_leaf() {
            return exact_node_profile(self.x, self.y, v, k);
        }
        if v.len() as f64 <= 1.0 / rate {
            return ShiftProfile::zeros(k);
        }
        let children = self.tree.children(v);
        let mut samples = Vec::with_capacity(children.len());
        let mut profiles = Vec::with_capacity(children.len());
        for c in &children {
            let u = sample_precision(&self.psl, &mut self.rng);
            let child_rate = rate / u.u;
            samples.push(u);
            profiles.push(self.solve_node(c, child_rate));
        }
        aggregate(k, &profiles, &samples)
    }
}

/// Runs the baseline on node `v` of a freshly built tree.
pub fn solve_node_ako(
    x: &StringOracle,
    y: &StringOracle,
    v: &PartitionNode,
    rate: f64,
    config: &SolverConfig,
    rng: Rng,
) -> Result<ShiftProfile, Error> {
    let mut solver = AkoSolver::new(x, y, config.clone(), rng)?;
    Ok(solver.solve_node(v, rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::node_profile_exact;
    use crate::rng_from_seed;

    #[test]
    fn profile_parsing() {
        assert_eq!("Paper".parse::<Profile>().unwrap(), Profile::Paper);
        assert_eq!("desk".parse::<Profile>().unwrap(), Profile::Desk);
        assert!("fast".parse::<Profile>().is_err());
        assert_eq!(Profile::Desk.to_string(), "desk");
    }

    #[test]
    fn schedules() {
        let c = SolverConfig::ako(1024, 16, 2, Profile::Paper).unwrap();
        assert_eq!(c.root_rate, 1000.0 / 16.0);
        assert_eq!(c.alpha(0), 2.0);
        assert!(c.alpha(10) >= 1.0);
        let m = SolverConfig::main(1 << 20, 16, 4, Profile::Desk).unwrap();
        assert_eq!(m.leaf_cap, 16usize.pow(4));
        assert!(m.alpha(m.tree(1 << 20).unwrap().depth()) >= 5.0);
        let p = SolverConfig::main(1 << 20, 16, 4, Profile::Paper).unwrap();
        assert_eq!(p.leaf_cap, usize::MAX);
        assert!(p.psl().is_err());
    }

    #[test]
    fn equal_strings_stay_within_slack() {
        let data: Vec<u8> = (0..300u32).map(|i| (i * 7 % 5) as u8).collect();
        let x = StringOracle::new(data.clone());
        let y = StringOracle::new(data);
        let cfg = SolverConfig::ako(300, 8, 2, Profile::Desk).unwrap();
        let mut s = AkoSolver::new(&x, &y, cfg.clone(), rng_from_seed(1)).unwrap();
        let p = s.solve_root();
        assert!(p.get(0) <= 1.0 / cfg.root_rate);
        assert!(p.values.iter().all(|&v| v <= 8.0));
        let root = s.tree().root();
        let exact = node_profile_exact(x.raw(), y.raw(), &root, 8);
        for t in p.shifts() {
            assert!(p.get(t) >= exact.get(t) / cfg.alpha_root - 1.0 / cfg.root_rate, "shift {t}");
        }
    }

    #[test]
    fn leaves_are_exact() {
        let x = StringOracle::new(b"abcabcabxabc".to_vec());
        let y = StringOracle::new(b"abcabyabcabc".to_vec());
        let cfg = SolverConfig::ako(12, 3, 2, Profile::Desk).unwrap();
        let mut s = AkoSolver::new(&x, &y, cfg, rng_from_seed(2)).unwrap();
        let tree = s.tree().clone();
        let v = tree.level(tree.depth())[0];
        assert!(v.is_leaf());
        let got = s.solve_node(&v, 1.0);
        assert_eq!(got, node_profile_exact(x.raw(), y.raw(), &v, 3));
    }
}
