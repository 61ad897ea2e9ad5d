//! Instance generators and the batch runner behind `subed bench`.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::ako_baseline::Profile;
use crate::exact_oracles::capped_edit_distance;
use crate::main_solver::{decide_gap, GapConfig, GapReport, Verdict};
use crate::oracle::is_primitive;
use crate::string_oracle::StringOracle;
use crate::{rng_from_seed, Error, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// A single uniform string.
    Random,
    /// `P^∞` truncated to `n`.
    Periodic {
        p: usize,
        #[serde(default = "yes")]
        primitive: bool,
    },
    /// `blocks` consecutive runs, each periodic with its own pattern of length `p`.
    BlockPeriodic { blocks: usize, p: usize },
    /// A uniform `X` and `Y` obtained by at most `k` edits, `|X| = |Y|`.
    PlantedEdits { k: usize },
    /// Two independent uniform strings.
    FarPair,
}

fn yes() -> bool {
    true
}

fn four() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub n: usize,
    #[serde(default = "four")]
    pub alphabet: usize,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, alphabet: usize, seed: u64) -> Self {
        Self { kind, n, alphabet, seed }
    }
}

/// `y` is `None` for the single-string kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub x: Vec<u8>,
    pub y: Option<Vec<u8>>,
}

impl Instance {
    /// The pair to compare; single strings are compared against themselves.
    pub fn pair(&self) -> (&[u8], &[u8]) {
        (&self.x, self.y.as_deref().unwrap_or(&self.x))
    }
}

/// Letters `a, b, …` for alphabets up to 26, raw bytes beyond.
pub fn symbol(i: usize, alphabet: usize) -> u8 {
    if alphabet <= 26 {
        b'a' + i as u8
    } else {
        i as u8
    }
}

pub fn random_string(n: usize, alphabet: usize, rng: &mut Rng) -> Vec<u8> {
    (0..n).map(|_| symbol(rng.random_range(0..alphabet), alphabet)).collect()
}

fn random_pattern(p: usize, alphabet: usize, primitive: bool, rng: &mut Rng) -> Result<Vec<u8>, Error> {
    if primitive && p >= 2 && alphabet < 2 {
        return Err(Error::Infeasible(format!("no primitive period of length {p} over a unary alphabet")));
    }
    loop {
        let pat = random_string(p, alphabet, rng);
        if !primitive || is_primitive(&pat) {
            return Ok(pat);
        }
    }
}

/// Applies at most `k` edits to `x` and returns a string of the same length.
///
/// Insertions and deletions come in pairs so the length is preserved; each
/// edit is one operation, so `ED(x, result) ≤ k`.
pub fn plant_edits(x: &[u8], k: usize, alphabet: usize, rng: &mut Rng) -> Vec<u8> {
    let mut y = x.to_vec();
    let mut left = k;
    while left > 0 && !y.is_empty() {
        if left >= 2 && rng.random_bool(0.5) {
            let at = rng.random_range(0..=y.len());
            y.insert(at, symbol(rng.random_range(0..alphabet), alphabet));
            let at = rng.random_range(0..y.len());
            y.remove(at);
            left -= 2;
        } else {
            let at = rng.random_range(0..y.len());
            if alphabet >= 2 {
                let old = y[at];
                let mut c = old;
                while c == old {
                    c = symbol(rng.random_range(0..alphabet), alphabet);
                }
                y[at] = c;
            }
            left -= 1;
        }
    }
    y
}

/// Deterministic in `spec`, including its seed.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance, Error> {
    let (n, a) = (spec.n, spec.alphabet);
    if a == 0 || a > 256 {
        return Err(Error::Infeasible(format!("alphabet size must be in 1..=256 (got {a})")));
    }
    let mut rng = rng_from_seed(spec.seed);
    let rng = &mut rng;
    Ok(match spec.kind {
        GeneratorKind::Random => Instance {
            x: random_string(n, a, rng),
            y: None,
        },
        GeneratorKind::Periodic { p, primitive } => {
            if p == 0 {
                return Err(Error::Infeasible("period must be positive".into()));
            }
            let pat = random_pattern(p, a, primitive, rng)?;
            Instance {
                x: pat.iter().copied().cycle().take(n).collect(),
                y: None,
            }
        }
        GeneratorKind::BlockPeriodic { blocks, p } => {
            if blocks == 0 || p == 0 {
                return Err(Error::Infeasible("block count and period must be positive".into()));
            }
            let mut x = Vec::with_capacity(n);
            for b in 0..blocks {
                let len = (b + 1) * n / blocks - b * n / blocks;
                let pat = random_pattern(p, a, true, rng)?;
                x.extend(pat.iter().copied().cycle().take(len));
            }
            Instance { x, y: None }
        }
        GeneratorKind::PlantedEdits { k } => {
            let x = random_string(n, a, rng);
            let y = plant_edits(&x, k, a, rng);
            Instance { x, y: Some(y) }
        }
        GeneratorKind::FarPair => {
            let x = random_string(n, a, rng);
            let y = random_string(n, a, rng);
            Instance { x, y: Some(y) }
        }
    })
}

/// One line of a `bench` batch file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSpec {
    pub generator: GeneratorSpec,
    pub trials: usize,
    pub k: usize,
    #[serde(rename = "B")]
    pub branching: usize,
    #[serde(default)]
    pub profile: Option<Profile>,
    /// Trial `i` runs the solver with `seed + i` and the generator with `generator.seed + i`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub budget_reads: Option<u64>,
    #[serde(default, rename = "K")]
    pub cap: Option<usize>,
    #[serde(default)]
    pub theta: Option<f64>,
    /// Check every generator claim instead of one trial in twenty.
    #[serde(default)]
    pub audit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditOutcome {
    pub claim: String,
    pub holds: bool,
}

/// One trial as written to the report stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "K")]
    pub cap: usize,
    #[serde(rename = "B")]
    pub branching: usize,
    pub profile: Profile,
    pub seed: u64,
    pub verdict: Verdict,
    pub budget_exceeded: bool,
    pub delta_root: Option<f64>,
    pub reads: u64,
    pub elapsed_ms: f64,
    pub rule_histogram: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditOutcome>,
}

impl TrialRecord {
    fn from_report(trial: usize, r: GapReport, audit: Option<AuditOutcome>) -> Self {
        Self {
            trial,
            n: r.params.n,
            k: r.params.k,
            cap: r.params.cap,
            branching: r.params.branching,
            profile: r.params.profile,
            seed: r.params.seed,
            verdict: r.verdict,
            budget_exceeded: r.budget_exceeded,
            delta_root: r.delta_root,
            reads: r.reads,
            elapsed_ms: r.elapsed_ms,
            rule_histogram: r.rule_histogram,
            audit,
        }
    }
}

pub const CSV_HEADER: &str = "trial,n,k,K,B,profile,seed,verdict,budget_exceeded,delta_root,reads,elapsed_ms";

pub fn csv_row(r: &TrialRecord) -> String {
    let verdict = match r.verdict {
        Verdict::Close => "close",
        Verdict::Far => "far",
    };
    let delta = r.delta_root.map(|d| d.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{:.3}",
        r.trial, r.n, r.k, r.cap, r.branching, r.profile, r.seed, verdict, r.budget_exceeded, delta, r.reads, r.elapsed_ms
    )
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("trial {trial}: {source}")]
    Io { trial: usize, source: io::Error },
    #[error("trial {trial}: {source}")]
    Solver { trial: usize, source: Error },
}

/// Checks what the generator promises about `inst`, if it promises anything.
pub fn audit_instance(kind: &GeneratorKind, inst: &Instance, cap: usize) -> Option<AuditOutcome> {
    let (x, y) = inst.pair();
    match *kind {
        GeneratorKind::PlantedEdits { k } => Some(AuditOutcome {
            claim: format!("ED <= {k}"),
            holds: capped_edit_distance(x, y, k + 1) <= k,
        }),
        GeneratorKind::FarPair => Some(AuditOutcome {
            claim: format!("ED >= {cap}"),
            holds: capped_edit_distance(x, y, cap) >= cap,
        }),
        GeneratorKind::Periodic { p, primitive: true } => Some(AuditOutcome {
            claim: format!("smallest period {p}"),
            holds: x.len() < p || crate::string_oracle::smallest_period(&x[..x.len().min(2 * p)]).len() == p,
        }),
        _ => None,
    }
}

/// Runs every trial of `batch` in order, writing one JSON object per line to
/// `jsonl` and, if given, a CSV projection to `csv`.
///
/// An empty batch writes nothing to `jsonl` and only the header to `csv`.
pub fn run_experiment(
    batch: &BatchSpec,
    jsonl: &mut dyn Write,
    mut csv: Option<&mut dyn Write>,
) -> Result<Vec<TrialRecord>, RunError> {
    if let Some(w) = csv.as_deref_mut() {
        writeln!(w, "{CSV_HEADER}").map_err(|source| RunError::Io { trial: 0, source })?;
    }
    let profile = batch.profile.unwrap_or_else(Profile::from_env);
    let mut out = Vec::with_capacity(batch.trials);
    for trial in 0..batch.trials {
        let solver_err = |source| RunError::Solver { trial, source };
        let mut spec = batch.generator.clone();
        spec.seed = spec.seed.wrapping_add(trial as u64);
        let inst = generate(&spec).map_err(solver_err)?;
        let (x, y) = inst.pair();
        let (xo, yo) = (StringOracle::new(x), StringOracle::new(y));
        let mut gap = GapConfig::new(profile, batch.seed.wrapping_add(trial as u64));
        gap.cap = batch.cap;
        gap.theta = batch.theta;
        gap.budget_reads = batch.budget_reads;
        let report = decide_gap(&xo, &yo, batch.k, batch.branching, &gap).map_err(solver_err)?;
        let audit = (batch.audit || trial % 20 == 0)
            .then(|| audit_instance(&spec.kind, &inst, report.params.cap))
            .flatten();
        let rec = TrialRecord::from_report(trial, report, audit);
        let io_err = |source| RunError::Io { trial, source };
        let line = serde_json::to_string(&rec).expect("records serialize");
        writeln!(jsonl, "{line}").map_err(io_err)?;
        if let Some(w) = csv.as_deref_mut() {
            writeln!(w, "{}", csv_row(&rec)).map_err(io_err)?;
        }
        out.push(rec);
    }
    Ok(out)
}

/// Reads a batch file: one [`BatchSpec`] JSON object per non-empty line.
pub fn parse_batch_file(text: &str) -> Result<Vec<BatchSpec>, Error> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::InvalidParameter(format!("batch line {}: {e}", i + 1)))
        })
        .collect()
}

/// Shuffled copy, handy for building mixed batches in tests.
pub fn shuffled<T: Clone>(items: &[T], seed: u64) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(&mut rng_from_seed(seed));
    v
}
