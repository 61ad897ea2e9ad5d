//! `subed`: generate instances, compute exact references and run the gap solver.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use subed::exact_oracles::{capped_edit_distance, ed_many_shifts_2approx, edit_distance, window_shifts_2approx};
use subed::main_solver::{decide_gap, GapConfig};
use subed::partition_tree::{build_tree, tree_distance_exact};
use subed::workbench::{csv_row, generate, parse_batch_file, run_experiment, GeneratorKind, GeneratorSpec, CSV_HEADER};
use subed::{Profile, StringOracle};

#[derive(Parser)]
#[command(name = "subed", version, about = "Sublinear-time (k, K)-gap edit distance")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Kind {
    Random,
    Periodic,
    BlockPeriodic,
    PlantedEdits,
    FarPair,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated instance to disk.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        alphabet: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Period length (periodic, block-periodic).
        #[arg(long, default_value_t = 3)]
        p: usize,
        /// Allow a non-primitive pattern for `periodic`.
        #[arg(long)]
        allow_imprimitive: bool,
        #[arg(long, default_value_t = 4)]
        blocks: usize,
        /// Number of planted edits.
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
        /// Where the second string of a pair goes; defaults to `<out>.y`.
        #[arg(long)]
        out_y: Option<PathBuf>,
    },
    /// Exact edit distance, optionally capped.
    Exact {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Many-shifts 2-approximation of `ED^{≤K}`.
    ///
    /// With `|y| = |x| + 2K` shift `s` compares `x` to `y[K+s..K+s+|x|)`;
    /// otherwise `x` is taken to sit at offset `--at` of `y`.
    Shifts {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        at: usize,
    },
    /// Exact capped tree distance over a full tree (small inputs only).
    TreeDist {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        branching: usize,
        #[arg(long)]
        cap: usize,
        /// Leaf count; defaults to one character per leaf.
        #[arg(long)]
        leaves: Option<usize>,
    },
    /// Decide `ED ≤ k` versus `ED ≥ K`; prints the report as JSON.
    Gap {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        branching: usize,
        #[arg(long, env = "SUBED_PROFILE", default_value = "desk")]
        profile: Profile,
        #[arg(long)]
        budget_reads: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the profile's `K`.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run every batch of a spec file, one JSON record per trial.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Optional CSV projection of the same records.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Seeded run of the core invariants; exits nonzero on failure.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

const TREE_DIST_LIMIT: usize = 4096;

/// Reads a string file, dropping one trailing newline.
fn read_string(path: &Path) -> Result<Vec<u8>> {
    let mut s = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if s.last() == Some(&b'\n') {
        s.pop();
    }
    Ok(s)
}

fn write_string(path: &Path, s: &[u8]) -> Result<()> {
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

fn run(cmd: Cmd) -> Result<bool> {
    let mut stdout = io::stdout().lock();
    match cmd {
        Cmd::Gen {
            kind,
            n,
            alphabet,
            seed,
            p,
            allow_imprimitive,
            blocks,
            k,
            out,
            out_y,
        } => {
            let kind = match kind {
                Kind::Random => GeneratorKind::Random,
                Kind::Periodic => GeneratorKind::Periodic {
                    p,
                    primitive: !allow_imprimitive,
                },
                Kind::BlockPeriodic => GeneratorKind::BlockPeriodic { blocks, p },
                Kind::PlantedEdits => GeneratorKind::PlantedEdits { k },
                Kind::FarPair => GeneratorKind::FarPair,
            };
            let inst = generate(&GeneratorSpec::new(kind, n, alphabet, seed))?;
            write_string(&out, &inst.x)?;
            if let Some(y) = &inst.y {
                let path = out_y.unwrap_or_else(|| {
                    let mut s = out.clone().into_os_string();
                    s.push(".y");
                    s.into()
                });
                write_string(&path, y)?;
                writeln!(stdout, "{}\n{}", out.display(), path.display())?;
            } else {
                writeln!(stdout, "{}", out.display())?;
            }
        }
        Cmd::Exact { x, y, cap } => {
            let (x, y) = (read_string(&x)?, read_string(&y)?);
            let d = match cap {
                Some(c) => capped_edit_distance(&x[..], &y[..], c),
                None => edit_distance(&x, &y),
            };
            writeln!(stdout, "{d}")?;
        }
        Cmd::Shifts { x, y, k, at } => {
            let (x, y) = (read_string(&x)?, read_string(&y)?);
            let prof = if y.len() == x.len() + 2 * k {
                ed_many_shifts_2approx(&x[..], &y[..], k)?
            } else {
                if at + x.len() > y.len() {
                    bail!("x does not fit in y at offset {at}");
                }
                window_shifts_2approx(&x[..], &y[..], at, k)
            };
            writeln!(stdout, "{}", serde_json::to_string(&prof)?)?;
        }
        Cmd::TreeDist {
            x,
            y,
            branching,
            cap,
            leaves,
        } => {
            let (x, y) = (read_string(&x)?, read_string(&y)?);
            if x.len() != y.len() {
                bail!("tree distance needs equal lengths ({} vs {})", x.len(), y.len());
            }
            if x.len() > TREE_DIST_LIMIT {
                bail!("tree-dist is a brute-force reference; n = {} exceeds {TREE_DIST_LIMIT}", x.len());
            }
            let tree = build_tree(x.len(), branching, leaves.unwrap_or(x.len()))?;
            writeln!(stdout, "{}", tree_distance_exact(&x, &y, &tree, cap))?;
        }
        Cmd::Gap {
            x,
            y,
            k,
            branching,
            profile,
            budget_reads,
            seed,
            cap,
        } => {
            let (x, y) = (StringOracle::new(read_string(&x)?), StringOracle::new(read_string(&y)?));
            let mut cfg = GapConfig::new(profile, seed);
            cfg.budget_reads = budget_reads;
            cfg.cap = cap;
            let report = decide_gap(&x, &y, k, branching, &cfg)?;
            writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?;
        }
        Cmd::Bench { spec, out, csv } => {
            let text = fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let batches = parse_batch_file(&text)?;
            let mut jsonl = BufWriter::new(fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?);
            let mut csv_file = match &csv {
                Some(p) => Some(BufWriter::new(
                    fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
                )),
                None => None,
            };
            if let Some(w) = csv_file.as_mut() {
                writeln!(w, "{CSV_HEADER}")?;
            }
            let mut total = 0;
            for (i, b) in batches.iter().enumerate() {
                // One header for the whole file, so rows come from the returned records.
                let recs = run_experiment(b, &mut jsonl, None).with_context(|| format!("batch {}", i + 1))?;
                if let Some(w) = csv_file.as_mut() {
                    for r in &recs {
                        writeln!(w, "{}", csv_row(r))?;
                    }
                }
                total += recs.len();
            }
            jsonl.flush()?;
            if let Some(w) = csv_file.as_mut() {
                w.flush()?;
            }
            writeln!(stdout, "{total} trials written to {}", out.display())?;
        }
        Cmd::Selftest { seed } => {
            let results = subed::selftest::run_all(seed);
            let mut ok = true;
            for r in &results {
                ok &= r.passed;
                let tag = if r.passed { "PASS" } else { "FAIL" };
                writeln!(stdout, "{tag} {:<26} {}", r.name, r.detail)?;
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
