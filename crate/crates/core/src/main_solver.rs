//! The pruned recursion and the gap decision built on it.
//!
//! A node is solved directly when it is short. Otherwise a matching test on
//! `(X_v, Y_v)` and a `4K`-periodicity test on `Y_v` decide between three
//! exits: the periodic rule (both close), a monitored recursion that may be
//! interrupted by the random-like rule (matched but aperiodic), and the plain
//! precision-sampling recursion (unmatched).
//!
//! Nodes whose `Y_v` window would leave `[0, n)` skip the testers and always
//! recurse; there are at most two of them per level.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use crate::ako_baseline::{Profile, SolverConfig};
use crate::ako_baseline::aggregate;
use crate::exact_oracles::window_shifts_2approx;
use crate::partition_tree::{PartitionNode, PartitionTree};
use crate::precision_sampling::{sample_precision, PrecisionParams, PrecisionSample};
use crate::property_testers::{matching_test, periodicity_test};
use crate::shift_combiner::{cone_profile, periodic_profile, ShiftProfile};
use crate::string_oracle::StringOracle;
use crate::{rng_from_seed, Error, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    ShortLeaf,
    PeriodicRule,
    RandomLikeInterrupt,
    Recursed,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ShortLeaf => "short_leaf",
            Rule::PeriodicRule => "periodic_rule",
            Rule::RandomLikeInterrupt => "random_like_interrupt",
            Rule::Recursed => "recursed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeOutcome {
    pub rule: Rule,
    pub profile: ShiftProfile,
    pub reads_used: u64,
}

/// Per-level counts of aperiodic active nodes below one random-like node.
#[derive(Clone, Debug, PartialEq)]
pub struct InterruptMonitor {
    pub s_star: i64,
    pub threshold: usize,
    counts: Vec<usize>,
}

impl InterruptMonitor {
    pub fn new(s_star: i64, threshold: usize) -> Self {
        Self {
            s_star,
            threshold,
            counts: Vec::new(),
        }
    }

    /// Counts one aperiodic node `rel_level` levels below the owner; true once the level overflows.
    pub fn record(&mut self, rel_level: usize) -> bool {
        if self.counts.len() <= rel_level {
            self.counts.resize(rel_level + 1, 0);
        }
        self.counts[rel_level] += 1;
        self.counts[rel_level] > self.threshold
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}

/// Why a solve stopped early.
#[derive(Clone, Debug, PartialEq)]
pub enum Abort {
    BudgetExceeded,
    Invalid(Error),
}

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        Abort::Invalid(e)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub reads: Option<u64>,
    pub time: Option<Duration>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub active_nodes: usize,
    pub active_per_level: Vec<usize>,
    pub rule_histogram: BTreeMap<String, usize>,
    /// Nodes that ran the testers.
    pub tested_nodes: usize,
    pub max_rate: f64,
}

impl SolveStats {
    fn bump(&mut self, rule: Rule) {
        *self.rule_histogram.entry(rule.name().to_string()).or_insert(0) += 1;
    }
}

enum Step {
    Done(Rule, ShiftProfile),
    /// Recurse into the children. `owner` carries `s*` for the random-like branch.
    Expand { owner: Option<i64>, aperiodic: bool },
}

/// One run of the pruned solver over a fixed pair of strings.
pub struct MainSolver<'a> {
    x: &'a StringOracle,
    y: &'a StringOracle,
    tree: PartitionTree,
    config: SolverConfig,
    psl: Option<PrecisionParams>,
    rng: Rng,
    budget: Budget,
    started: Instant,
    reads_at_start: u64,
    pub stats: SolveStats,
}

impl<'a> MainSolver<'a> {
    pub fn new(x: &'a StringOracle, y: &'a StringOracle, config: SolverConfig, rng: Rng) -> Result<Self, Error> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let tree = config.tree(x.len())?;
        Ok(Self {
            x,
            y,
            tree,
            config,
            psl: None,
            rng,
            budget: Budget::default(),
            started: Instant::now(),
            reads_at_start: x.reads() + y.reads(),
            stats: SolveStats::default(),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn tree(&self) -> &PartitionTree {
        &self.tree
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// Reads charged to either string since the solver was created.
    pub fn reads(&self) -> u64 {
        self.x.reads() + self.y.reads() - self.reads_at_start
    }

    pub fn solve_root(&mut self) -> Result<NodeOutcome, Abort> {
        let root = self.tree.root();
        self.solve_node(&root, self.config.root_rate)
    }

    pub fn solve_node(&mut self, v: &PartitionNode, rate: f64) -> Result<NodeOutcome, Abort> {
        let before = self.reads();
        let (rule, profile) = self.dfs(v, rate)?;
        Ok(NodeOutcome {
            rule,
            profile,
            reads_used: self.reads() - before,
        })
    }

    fn check_budget(&self) -> Result<(), Abort> {
        if self.budget.reads.is_some_and(|b| self.reads() > b)
            || self.budget.time.is_some_and(|t| self.started.elapsed() > t)
        {
            return Err(Abort::BudgetExceeded);
        }
        Ok(())
    }

    fn draw(&mut self) -> Result<PrecisionSample, Abort> {
        if self.psl.is_none() {
            self.psl = Some(self.config.psl()?);
        }
        let params = self.psl.as_ref().expect("set above");
        Ok(sample_precision(params, &mut self.rng))
    }

    /// Work done at `v` before any recursion; the budget is checked on both sides.
    fn examine(&mut self, v: &PartitionNode, rate: f64) -> Result<Step, Abort> {
        self.check_budget()?;
        let step = self.examine_unchecked(v, rate)?;
        self.check_budget()?;
        Ok(step)
    }

    fn examine_unchecked(&mut self, v: &PartitionNode, rate: f64) -> Result<Step, Abort> {
        self.stats.active_nodes += 1;
        if self.stats.active_per_level.len() <= v.depth {
            self.stats.active_per_level.resize(v.depth + 1, 0);
        }
        self.stats.active_per_level[v.depth] += 1;
        self.stats.max_rate = self.stats.max_rate.max(rate);

        let k = self.config.k;
        let n = self.x.len();
        if v.is_leaf() || v.len() <= self.config.short_factor * k * k {
            let xv = self.x.view(v.start, v.end);
            let prof = window_shifts_2approx(&xv, &self.y.full(), v.start, k).capped();
            return Ok(Step::Done(Rule::ShortLeaf, prof));
        }
        if v.start < k || v.end + k > n {
            return Ok(Step::Expand {
                owner: None,
                aperiodic: false,
            });
        }

        self.stats.tested_nodes += 1;
        let xv = self.x.view(v.start, v.end);
        let yv = self.y.view(v.start - k, v.end + k);
        let (r, delta) = (3.0 * rate, self.config.tester_delta);
        let matched = matching_test(&xv, &yv, k, r, delta, &mut self.rng)?;
        let period = periodicity_test(&yv, 4 * k, r, delta, &mut self.rng)?;
        Ok(match (matched.shift(), period.period()) {
            (Some(s), Some(p)) => Step::Done(Rule::PeriodicRule, periodic_profile(k, s, p.len())),
            (Some(s), None) => Step::Expand {
                owner: Some(s),
                aperiodic: true,
            },
            (None, p) => Step::Expand {
                owner: None,
                aperiodic: p.is_none(),
            },
        })
    }

    fn dfs(&mut self, v: &PartitionNode, rate: f64) -> Result<(Rule, ShiftProfile), Abort> {
        match self.examine(v, rate)? {
            Step::Done(rule, prof) => {
                self.stats.bump(rule);
                Ok((rule, prof))
            }
            Step::Expand { owner: Some(s), .. } => self.epoch(v, rate, s),
            Step::Expand { owner: None, .. } => {
                let children = self.tree.children(v);
                let mut samples = Vec::with_capacity(children.len());
                let mut profiles = Vec::with_capacity(children.len());
                for c in &children {
                    let u = self.draw()?;
                    let child_rate = rate / u.u;
                    samples.push(u);
                    profiles.push(self.dfs(c, child_rate)?.1);
                }
                self.stats.bump(Rule::Recursed);
                Ok((Rule::Recursed, aggregate(self.config.k, &profiles, &samples)))
            }
        }
    }

    /// Breadth-first exploration below a random-like node `v` (already examined).
    ///
    /// Every random-like node inside the epoch owns a monitor. A node whose
    /// periodicity test said Far is counted by all monitors above it, the
    /// innermost first; an overflowing monitor cuts its owner's subtree and
    /// the owner answers `2|s − s*|`.
    fn epoch(&mut self, v: &PartitionNode, rate: f64, s_star: i64) -> Result<(Rule, ShiftProfile), Abort> {
        struct Slot {
            node: PartitionNode,
            rate: f64,
            /// Slot indices of owning ancestors, outermost first.
            owners: Vec<usize>,
            children: Vec<usize>,
            samples: Vec<PrecisionSample>,
            result: Option<(Rule, ShiftProfile)>,
            dead: bool,
        }

        fn kill_below(slots: &mut [Slot], w: usize) {
            let mut stack = slots[w].children.clone();
            while let Some(c) = stack.pop() {
                slots[c].dead = true;
                stack.extend(slots[c].children.iter().copied());
            }
        }

        let threshold = self.config.interrupt_factor * self.config.k;
        let mut monitors: BTreeMap<usize, InterruptMonitor> = BTreeMap::new();
        monitors.insert(0, InterruptMonitor::new(s_star, threshold));
        let mut slots = vec![Slot {
            node: *v,
            rate,
            owners: Vec::new(),
            children: Vec::new(),
            samples: Vec::new(),
            result: None,
            dead: false,
        }];
        let mut frontier = vec![0usize];
        let mut first = true;

        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &id in &frontier {
                if slots[id].dead {
                    continue;
                }
                let (node, r) = (slots[id].node, slots[id].rate);
                let step = if first {
                    Step::Expand {
                        owner: Some(s_star),
                        aperiodic: true,
                    }
                } else {
                    self.examine(&node, r)?
                };
                let (owner, aperiodic) = match step {
                    Step::Done(rule, prof) => {
                        slots[id].result = Some((rule, prof));
                        continue;
                    }
                    Step::Expand { owner, aperiodic } => (owner, aperiodic),
                };
                if aperiodic && !first {
                    let chain = slots[id].owners.clone();
                    for &w in chain.iter().rev() {
                        if slots[w].dead || slots[w].result.is_some() {
                            continue;
                        }
                        let rel = node.depth - slots[w].node.depth;
                        let mon = monitors.get_mut(&w).expect("owner has a monitor");
                        if mon.record(rel) {
                            let cut = cone_profile(self.config.k, mon.s_star);
                            slots[w].result = Some((Rule::RandomLikeInterrupt, cut));
                            if w == 0 {
                                self.stats.bump(Rule::RandomLikeInterrupt);
                                return Ok(slots.swap_remove(0).result.expect("just set"));
                            }
                            kill_below(&mut slots, w);
                        }
                    }
                    if slots[id].dead {
                        continue;
                    }
                }
                if let Some(s) = owner {
                    monitors.entry(id).or_insert_with(|| InterruptMonitor::new(s, threshold));
                }
                let mut owners = slots[id].owners.clone();
                if owner.is_some() {
                    owners.push(id);
                }
                for c in self.tree.children(&node) {
                    let u = self.draw()?;
                    let child = slots.len();
                    slots.push(Slot {
                        node: c,
                        rate: r / u.u,
                        owners: owners.clone(),
                        children: Vec::new(),
                        samples: Vec::new(),
                        result: None,
                        dead: false,
                    });
                    slots[id].children.push(child);
                    slots[id].samples.push(u);
                    next.push(child);
                }
            }
            frontier = next;
            first = false;
        }

        // Children always sit at larger indices than their parent.
        for id in (0..slots.len()).rev() {
            if slots[id].dead {
                continue;
            }
            if let Some((rule, _)) = &slots[id].result {
                self.stats.bump(*rule);
                continue;
            }
            let profiles: Vec<ShiftProfile> = slots[id]
                .children
                .iter()
                .map(|&c| slots[c].result.as_ref().expect("child resolved").1.clone())
                .collect();
            let prof = aggregate(self.config.k, &profiles, &slots[id].samples);
            self.stats.bump(Rule::Recursed);
            slots[id].result = Some((Rule::Recursed, prof));
        }
        Ok(slots.swap_remove(0).result.expect("root resolved"))
    }
}

/// Runs the pruned solver on node `v` of a freshly built tree, without a budget.
pub fn solve_node_main(
    x: &StringOracle,
    y: &StringOracle,
    v: &PartitionNode,
    rate: f64,
    config: &SolverConfig,
    rng: Rng,
) -> Result<NodeOutcome, Error> {
    let mut solver = MainSolver::new(x, y, config.clone(), rng)?;
    solver.solve_node(v, rate).map_err(|a| match a {
        Abort::Invalid(e) => e,
        Abort::BudgetExceeded => unreachable!("no budget set"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Close,
    Far,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapParams {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "K")]
    pub cap: usize,
    #[serde(rename = "B")]
    pub branching: usize,
    pub seed: u64,
    pub profile: Profile,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    /// Budget exhaustion is reported as [`Verdict::Far`].
    pub verdict: Verdict,
    pub budget_exceeded: bool,
    pub delta_root: Option<f64>,
    pub reads: u64,
    pub elapsed_ms: f64,
    pub params: GapParams,
    pub rule_histogram: BTreeMap<String, usize>,
    pub active_nodes: usize,
}

/// Desk-profile constants for the gap decision.
pub const DESK_C_GAP: f64 = 5.0;
pub const DESK_THETA: f64 = 0.25;
pub const PAPER_THETA: f64 = 0.06;

/// Knobs of [`decide_gap`] beyond `(k, B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GapConfig {
    pub profile: Profile,
    /// Overrides the profile's choice of `K`.
    pub cap: Option<usize>,
    /// Overrides the profile's threshold `θ`.
    pub theta: Option<f64>,
    /// `None` picks the profile default; `Some(u64::MAX)` disables the read budget.
    pub budget_reads: Option<u64>,
    pub budget_time: Option<Duration>,
    pub seed: u64,
}

impl GapConfig {
    pub fn new(profile: Profile, seed: u64) -> Self {
        Self {
            profile,
            cap: None,
            theta: None,
            budget_reads: None,
            budget_time: None,
            seed,
        }
    }
}

/// `log_B k`, at least 1.
fn log_b(k: usize, b: usize) -> f64 {
    ((k as f64).ln() / (b as f64).ln()).max(1.0)
}

/// The cap `K` for distinguishing `ED ≤ k` from `ED ≥ K`.
///
/// Paper: the smallest `K` with `K / (1000·B·D) ≥ k`, `D` the depth of the
/// cut tree. Desk: `⌈c · k · log_B k · B⌉`.
pub fn gap_cap(n: usize, k: usize, b: usize, profile: Profile) -> usize {
    match profile {
        Profile::Desk => (DESK_C_GAP * k as f64 * log_b(k, b) * b as f64).ceil() as usize,
        Profile::Paper => {
            let depth = |cap: usize| {
                let leaves = cap.checked_pow(100).unwrap_or(usize::MAX).min(n).max(1);
                PartitionTree::new(n.max(1), b, leaves).map(|t| t.depth()).unwrap_or(1).max(1)
            };
            let mut cap = k.max(1);
            while cap < 1000 * b * k * depth(cap) {
                cap = 1000 * b * k * depth(cap);
            }
            cap
        }
    }
}

/// Default read budget: `50·n/k` plus a `K`-dependent allowance for the leaf work.
pub fn default_read_budget(n: usize, k: usize, cap: usize, profile: Profile) -> u64 {
    let base = 50 * n.div_ceil(k) as u64;
    let kk = cap as u64;
    match profile {
        Profile::Desk => base + 100 * kk * kk,
        Profile::Paper => base.saturating_add(kk.saturating_pow(4)),
    }
}

/// Decides whether `ED(X, Y) ≤ k` or `ED(X, Y) ≥ K`.
pub fn decide_gap(x: &StringOracle, y: &StringOracle, k: usize, b: usize, gap: &GapConfig) -> Result<GapReport, Error> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::LengthMismatch { left: n, right: y.len() });
    }
    if n == 0 || b < 2 || b > k {
        return Err(Error::InvalidParameter(format!(
            "gap decision needs n ≥ 1 and 2 ≤ B ≤ k (got n = {n}, B = {b}, k = {k})"
        )));
    }
    let cap = gap.cap.unwrap_or_else(|| gap_cap(n, k, b, gap.profile));
    let theta = gap.theta.unwrap_or(match gap.profile {
        Profile::Paper => PAPER_THETA,
        Profile::Desk => DESK_THETA,
    });
    let config = SolverConfig::main(n, cap, b, gap.profile)?;
    let budget = Budget {
        reads: Some(
            gap.budget_reads
                .unwrap_or_else(|| default_read_budget(n, k, cap, gap.profile)),
        ),
        time: gap.budget_time,
    };
    let started = Instant::now();
    let mut solver = MainSolver::new(x, y, config, rng_from_seed(gap.seed))?.with_budget(budget);
    let outcome = solver.solve_root();
    let (verdict, budget_exceeded, delta_root) = match outcome {
        Ok(o) => {
            let d = o.profile.get(0);
            let v = if d < theta * cap as f64 { Verdict::Close } else { Verdict::Far };
            (v, false, Some(d))
        }
        Err(Abort::BudgetExceeded) => (Verdict::Far, true, None),
        Err(Abort::Invalid(e)) => return Err(e),
    };
    Ok(GapReport {
        verdict,
        budget_exceeded,
        delta_root,
        reads: solver.reads(),
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        params: GapParams {
            n,
            k,
            cap,
            branching: b,
            seed: gap.seed,
            profile: gap.profile,
            theta,
        },
        rule_histogram: solver.stats.rule_histogram.clone(),
        active_nodes: solver.stats.active_nodes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorollaryMode {
    Subpoly,
    Polylog,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corollary {
    pub mode: CorollaryMode,
    /// `B` computed from `k` itself, before inflating `k`.
    pub b_initial: usize,
    pub branching: usize,
    /// The inflated `k̄ ≥ k` handed to the gap decision.
    pub k_bar: usize,
    /// `K` for `k̄` under the given profile.
    pub cap: usize,
    /// Small `k`: compute `ED^{≤k}` exactly instead.
    pub exact_fallback: bool,
}

/// Below this, the corollaries fall back to exact capped edit distance.
pub const COROLLARY_MIN_K: usize = 16;

/// `√log k · log log k`, the overhead exponent of the subpolynomial corollary.
fn overhead_exponent(k: f64) -> f64 {
    let l = k.log2().max(1.0);
    l.sqrt() * l.log2().max(1.0)
}

/// Parameter choices of the two corollaries.
///
/// Subpolynomial: `k̄ = k·2^{2α(k)}` and `B = 2^{⌈√log k̄⌉}`. Polylogarithmic:
/// `B = ⌈(log k)^{1/ε}⌉` and `k̄ = k`. For `k < 16` both report the exact
/// fallback.
pub fn corollary_parameterization(
    n: usize,
    k: usize,
    mode: CorollaryMode,
    eps_exp: f64,
    profile: Profile,
) -> Result<Corollary, Error> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("corollaries need k ≥ 2 (got {k})")));
    }
    if mode == CorollaryMode::Polylog && !(eps_exp > 0.0 && eps_exp < 1.0) {
        return Err(Error::InvalidParameter(format!("polylog mode needs ε ∈ (0,1) (got {eps_exp})")));
    }
    let kf = k as f64;
    let pow2_sqrt_log = |x: f64| 1usize << (x.log2().max(1.0).sqrt().ceil() as u32);
    let (b_initial, k_bar) = match mode {
        CorollaryMode::Subpoly => {
            let inflate = 2f64.powf(2.0 * overhead_exponent(kf));
            (pow2_sqrt_log(kf), (kf * inflate).ceil().min(usize::MAX as f64 / 4.0) as usize)
        }
        CorollaryMode::Polylog => (kf.log2().powf(1.0 / eps_exp).ceil() as usize, k),
    };
    let branching = match mode {
        CorollaryMode::Subpoly => pow2_sqrt_log(k_bar as f64),
        CorollaryMode::Polylog => b_initial,
    }
    .max(2);
    Ok(Corollary {
        mode,
        b_initial,
        branching,
        k_bar,
        cap: gap_cap(n, k_bar, branching, profile),
        exact_fallback: k < COROLLARY_MIN_K,
    })
}
