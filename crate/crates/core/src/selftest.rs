//! A quick, seeded run of the core invariants against the brute-force oracles.

use rand::Rng as _;
use serde::Serialize;

use crate::exact_oracles::{capped_edit_distance, edit_distance, window_shifts_2approx};
use crate::main_solver::{decide_gap, GapConfig, Verdict};
use crate::oracle::{block_periodicity_exhaustive, combine_brute_force, node_profile_exact};
use crate::partition_tree::{build_tree, tree_distance};
use crate::precision_sampling::{recover_sum, sample_precision, PrecisionParams};
use crate::property_testers::{matching_test, periodicity_test};
use crate::shift_combiner::{combine, periodic_profile, ShiftProfile};
use crate::string_oracle::{block_periodicity, StringOracle};
use crate::workbench::{generate, random_string, GeneratorKind, GeneratorSpec};
use crate::{rng_from_seed, Profile, Rng};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, failures: usize, total: usize) -> CheckResult {
    CheckResult {
        name,
        passed: failures == 0,
        detail: format!("{failures} failures in {total} cases"),
    }
}

fn capped_lv_vs_dp(rng: &mut Rng) -> CheckResult {
    let mut bad = 0;
    for _ in 0..300 {
        let x = random_string(rng.random_range(0..40), 3, rng);
        let y = random_string(rng.random_range(0..40), 3, rng);
        let k = rng.random_range(0..12);
        bad += usize::from(capped_edit_distance(&x, &y, k) != edit_distance(&x, &y).min(k));
    }
    check("capped_lv_vs_dp", bad, 300)
}

fn combine_vs_brute(rng: &mut Rng) -> CheckResult {
    let mut bad = 0;
    for _ in 0..300 {
        let k = rng.random_range(0..20);
        let a = ShiftProfile::from_fn(k, |_| rng.random_range(0..40) as f64);
        bad += usize::from(combine(&a) != combine_brute_force(&a));
    }
    check("combine_vs_brute", bad, 300)
}

fn block_periodicity_vs_dp(rng: &mut Rng) -> CheckResult {
    let mut bad = 0;
    for _ in 0..200 {
        let y = random_string(rng.random_range(0..30), 2, rng);
        let k = rng.random_range(1..5);
        bad += usize::from(block_periodicity(&y, k) != block_periodicity_exhaustive(&y, k));
    }
    check("block_periodicity_vs_dp", bad, 200)
}

fn tree_distance_sandwich(rng: &mut Rng) -> CheckResult {
    let mut bad = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..40);
        let b = rng.random_range(2..5);
        let x = random_string(n, 2, rng);
        let y = random_string(n, 2, rng);
        let t = build_tree(n, b, n).expect("valid tree");
        let (ed, td) = (edit_distance(&x, &y), tree_distance(&x, &y, &t));
        bad += usize::from(!(ed <= td && td <= 2 * b * t.depth().max(1) * ed));
    }
    check("tree_distance_sandwich", bad, 100)
}

fn shifts_sandwich(rng: &mut Rng) -> CheckResult {
    let mut bad = 0;
    for _ in 0..100 {
        let n = rng.random_range(10..60);
        let y = random_string(n, 2, rng);
        let k = rng.random_range(1..6);
        let (i, j) = (rng.random_range(0..n / 2), rng.random_range(n / 2..n));
        let x = y[i..j].to_vec();
        let approx = window_shifts_2approx(&x, &y, i, k);
        for s in -(k as i64)..=k as i64 {
            let (lo, hi) = crate::string_oracle::clamped_range(n, i as i64 + s, j as i64 + s);
            let exact = edit_distance(&x, &y[lo..hi]).min(k) as f64;
            let d = approx.get(s);
            bad += usize::from(!(d <= exact && exact <= (2.0 * d).min(k as f64)));
        }
    }
    check("many_shifts_sandwich", bad, 100)
}

fn periodic_rule_vs_dp(rng: &mut Rng) -> CheckResult {
    let mut bad = 0;
    for seed in 0..30 {
        let p = rng.random_range(1..6);
        let k = rng.random_range(1..5);
        let spec = GeneratorSpec::new(GeneratorKind::Periodic { p, primitive: true }, p * p + 2 * k + 20, 3, seed);
        let y = generate(&spec).expect("feasible").x;
        let n = y.len();
        let tree = build_tree(n, 2, 1).expect("valid tree");
        let mut v = tree.root();
        v.start = k;
        v.end = n - k;
        let dp = node_profile_exact(&y, &y, &v, k);
        bad += usize::from(dp != periodic_profile(k, 0, p));
    }
    check("periodic_rule_vs_dp", bad, 30)
}

fn testers_on_exact_inputs(rng: &mut Rng) -> CheckResult {
    let mut bad = 0;
    for _ in 0..50 {
        let k = rng.random_range(1..5);
        let y = random_string(200, 4, rng);
        let s = rng.random_range(-(k as i64)..=k as i64);
        let from = (k as i64 + s) as usize;
        let x = y[from..from + 200 - 2 * k].to_vec();
        let m = matching_test(&x, &y, k, 1.0, 0.01, rng).expect("valid shapes");
        let certified = m.shift().is_some_and(|t| {
            let at = (k as i64 + t) as usize;
            y[at..at + x.len()] == x[..]
        });
        bad += usize::from(!certified);
        let per = periodicity_test(&b"abc".repeat(30), 3, 1.0, 0.01, rng).expect("valid shapes");
        bad += usize::from(per.period() != Some(&b"abc"[..]));
    }
    check("testers_on_exact_inputs", bad, 100)
}

fn precision_recovery(rng: &mut Rng) -> CheckResult {
    let params = PrecisionParams::new(0.25, 0.05).expect("valid params");
    let a: Vec<f64> = (0..50).map(|i| (i % 7) as f64).collect();
    let total: f64 = a.iter().sum();
    let mut bad = 0;
    for _ in 0..40 {
        let samples: Vec<_> = a.iter().map(|_| sample_precision(&params, rng)).collect();
        let refs: Vec<_> = samples.iter().collect();
        let got = recover_sum(&a, &refs);
        bad += usize::from(!(got >= total / 1.25 - 1.0 && got <= total * 1.25 + 1.0));
    }
    CheckResult {
        name: "precision_recovery",
        passed: bad <= 4,
        detail: format!("{bad} of 40 outside the band"),
    }
}

fn gap_smoke(_rng: &mut Rng) -> CheckResult {
    let spec = GeneratorSpec::new(GeneratorKind::PlantedEdits { k: 2 }, 20_000, 4, 1);
    let inst = generate(&spec).expect("feasible");
    let (x, y) = inst.pair();
    let report = decide_gap(&StringOracle::new(x), &StringOracle::new(y), 4, 2, &GapConfig::new(Profile::Desk, 1));
    let passed = matches!(&report, Ok(r) if r.verdict == Verdict::Close);
    CheckResult {
        name: "gap_planted_close",
        passed,
        detail: match report {
            Ok(r) => format!("verdict {:?}, delta {:?}, reads {}", r.verdict, r.delta_root, r.reads),
            Err(e) => e.to_string(),
        },
    }
}

/// Every check, in a fixed order, from one seed.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    let checks: [fn(&mut Rng) -> CheckResult; 9] = [
        capped_lv_vs_dp,
        combine_vs_brute,
        block_periodicity_vs_dp,
        tree_distance_sandwich,
        shifts_sandwich,
        periodic_rule_vs_dp,
        testers_on_exact_inputs,
        precision_recovery,
        gap_smoke,
    ];
    let mut rng = rng_from_seed(seed);
    checks.iter().map(|c| c(&mut rng)).collect()
}
