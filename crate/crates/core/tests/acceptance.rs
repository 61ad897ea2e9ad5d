//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run a subset with `ACCEPTANCE_ONLY=3,7 cargo test -p subed --test acceptance`.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng as _;

use subed::ako_baseline::AkoSolver;
use subed::exact_oracles::{capped_edit_distance, ed_many_shifts_2approx, edit_distance, window_shifts_2approx};
use subed::main_solver::{decide_gap, GapConfig, MainSolver, Verdict};
use subed::oracle::{
    block_periodicity_exhaustive, block_periodicity_reach, combine_brute_force, has_period, is_primitive,
    smallest_period_naive, unmatched_per_level,
};
use subed::partition_tree::{build_tree, tree_distance, tree_distance_exact};
use subed::precision_sampling::{conditional_inverse_mean_check, recover_sum, sample_precision, PrecisionParams};
use subed::property_testers::{equality_test, matching_test, periodicity_test, read_ceiling};
use subed::shift_combiner::{combine, cone_profile, periodic_profile, ShiftProfile};
use subed::string_oracle::{block_periodicity, clamped_range, StringOracle};
use subed::workbench::{generate, plant_edits, random_string, GeneratorKind, GeneratorSpec};
use subed::{rng_from_seed, Profile, Rng, SolverConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn threads() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get()).min(16)
}

/// Runs `f(i)` for `i in 0..count` on all cores, results in index order.
fn par_map<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let t = threads();
    let mut out: Vec<Option<T>> = (0..count).map(|_| None).collect();
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..t)
            .map(|w| scope.spawn(move || (w..count).step_by(t).map(|i| (i, f(i))).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            for (i, v) in h.join().expect("worker panicked") {
                out[i] = Some(v);
            }
        }
    });
    out.into_iter().map(|v| v.expect("every index ran")).collect()
}

fn pair_close_or_far(n: usize, alphabet: usize, edits: usize, far: bool, rng: &mut Rng) -> (Vec<u8>, Vec<u8>) {
    let x = random_string(n, alphabet, rng);
    let y = if far {
        random_string(n, alphabet, rng)
    } else {
        plant_edits(&x, edits, alphabet, rng)
    };
    (x, y)
}

fn c1_td_equivalence() -> Outcome {
    let results = par_map(1000, |i| {
        let mut rng = rng_from_seed(1_000 + i as u64);
        let n = rng.random_range(2..=200);
        let b = [2, 3, 4][i % 3];
        let a = rng.random_range(2..=4);
        let (x, y) = pair_close_or_far(n, a, rng.random_range(0..=12), i % 2 == 0, &mut rng);
        let tree = build_tree(n, b, n).expect("valid tree");
        let (ed, td) = (edit_distance(&x, &y), tree_distance(&x, &y, &tree));
        ed <= td && td <= 2 * b * tree.depth() * ed
    });
    let bad = results.iter().filter(|&&ok| !ok).count();
    outcome(bad == 0, format!("{bad} violations in 1000 instances"))
}

fn c2_range_minimum() -> Outcome {
    let bad: usize = par_map(16, |w| {
        let mut rng = rng_from_seed(2_000 + w as u64);
        let mut bad = 0;
        for _ in 0..100_000 / 16 + 1 {
            let k = rng.random_range(0..=64);
            let hi = rng.random_range(1..=3 * k as i64 + 2);
            let a = ShiftProfile::from_fn(k, |_| rng.random_range(0..=hi) as f64 / 2.0);
            bad += usize::from(combine(&a) != combine_brute_force(&a));
        }
        bad
    })
    .into_iter()
    .sum();
    outcome(bad == 0, format!("{bad} mismatches in {} arrays", 16 * (100_000 / 16 + 1)))
}

/// `Y_s = Y[K+s..|Y|−K+s)`.
fn y_shift(y: &[u8], k: usize, s: i64) -> &[u8] {
    let lo = (k as i64 + s) as usize;
    &y[lo..y.len() - 2 * k + lo]
}

fn c3_periodic_rule() -> Outcome {
    let results = par_map(200, |i| {
        let mut rng = rng_from_seed(3_000 + i as u64);
        let p = rng.random_range(1..=8);
        let k = rng.random_range(1..=8);
        let a = if p == 1 { 2 } else { rng.random_range(2..=4) };
        let pat = loop {
            let c = random_string(p, a, &mut rng);
            if is_primitive(&c) {
                break c;
            }
        };
        let len = p * p + 2 * k + rng.random_range(0..=24);
        let phase = rng.random_range(0..p);
        let y: Vec<u8> = (0..len).map(|t| pat[(t + phase) % p]).collect();
        let mut bad = 0;
        for s in -(k as i64)..=k as i64 {
            for t in -(k as i64)..=k as i64 {
                let ed = edit_distance(y_shift(&y, k, s), y_shift(&y, k, t));
                let formula = (-(2 * k as i64)..=2 * k as i64)
                    .map(|j| 2 * (s - t + j * p as i64).abs())
                    .min()
                    .expect("nonempty") as usize;
                let rule = periodic_profile(k, t, p).get(s);
                bad += usize::from(ed != formula || ed.min(k) as f64 != rule);
            }
        }
        bad
    });
    let bad: usize = results.iter().sum();
    outcome(bad == 0, format!("{bad} mismatching (s, s') pairs over 200 configurations"))
}

fn c4_random_like_rule() -> Outcome {
    let results = par_map(100, |i| {
        let mut rng = rng_from_seed(4_000 + i as u64);
        let k = 1 + i % 6;
        let mut y = random_string(10 * k * (4 * k + 2), 4, &mut rng);
        while block_periodicity_reach(&y, 4 * k) <= 10 * k {
            y.extend(random_string(4 * k, 4, &mut rng));
        }
        let mut bad = usize::from(block_periodicity(&y, 4 * k) != block_periodicity_reach(&y, 4 * k));
        for s in -(k as i64)..=k as i64 {
            for t in s..=k as i64 {
                let ed = edit_distance(y_shift(&y, k, s), y_shift(&y, k, t));
                let rule = cone_profile(k, t).get(s);
                bad += usize::from(ed != 2 * (s - t).unsigned_abs() as usize || ed.min(k) as f64 != rule);
            }
        }
        bad
    });
    let bad: usize = results.iter().sum();
    outcome(bad == 0, format!("{bad} mismatching pairs over 100 strings with bp_4K > 10K"))
}

fn c5_self_alignment() -> Outcome {
    // Exhaustive over short binary strings.
    let mut bad_exact = 0;
    let mut hyp = 0;
    for len in 1..=12usize {
        for bits in 0u32..(1 << len) {
            let x: Vec<u8> = (0..len).map(|i| (bits >> i & 1) as u8).collect();
            for s in 1..len {
                if x[..len - s] == x[s..] {
                    hyp += 1;
                    bad_exact += usize::from(!has_period(&x, s));
                }
            }
        }
    }
    let mut rng = rng_from_seed(5_000);
    let (mut built, mut bad_bp, mut tries) = (0, 0, 0);
    while built < 500 && tries < 100_000 {
        tries += 1;
        let s = rng.random_range(1..=5);
        let n = rng.random_range(2 * s..=36);
        let a = rng.random_range(2..=3);
        let pat = random_string(s, a, &mut rng);
        let base: Vec<u8> = (0..n).map(|t| pat[t % s]).collect();
        let x = plant_edits(&base, rng.random_range(0..=s), a, &mut rng);
        if edit_distance(&x[..n - s], &x[s..]) >= 2 * s {
            continue;
        }
        built += 1;
        bad_bp += usize::from(block_periodicity_exhaustive(&x, 2 * s) > 4 * s);
    }
    outcome(
        bad_exact == 0 && bad_bp == 0 && built == 500,
        format!("s-periodic: {bad_exact} of {hyp} fail; bp_2s <= 4s: {bad_bp} of {built} fail"),
    )
}

fn c6_precision_sampling() -> Outcome {
    let params = PrecisionParams::new(0.1, 0.01).expect("valid");
    let inside: usize = par_map(1000, |t| {
        let mut rng = rng_from_seed(6_000 + t as u64);
        let a: Vec<f64> = (0..1000).map(|_| rng.random_range(0.0..10.0)).collect();
        let total: f64 = a.iter().sum();
        let samples: Vec<_> = (0..a.len()).map(|_| sample_precision(&params, &mut rng)).collect();
        let refs: Vec<_> = samples.iter().collect();
        let got = recover_sum(&a, &refs);
        usize::from(got >= total / 1.1 && got <= total * 1.1)
    })
    .into_iter()
    .sum();
    let one = PrecisionParams::with_constant(1.0, 0.5, 1.0).expect("valid");
    assert_eq!(one.lambda, 1);
    let mut rng = rng_from_seed(6_999);
    let mut draws: Vec<f64> = (0..100_000).map(|_| sample_precision(&one, &mut rng).replicas[0]).collect();
    let med = median(&mut draws);
    let mut inv_ok = true;
    let mut inv_detail = String::new();
    for big_n in [1e2, 1e4] {
        let rep = conditional_inverse_mean_check(&params, big_n, 20_000, &mut rng);
        let bound = 10.0 * rep.lambda as f64 * (rep.lambda as f64 * big_n).ln();
        inv_ok &= rep.mean <= bound;
        inv_detail += &format!(" E[1/u|E] at N={big_n:e}: {:.0} <= {bound:.0};", rep.mean);
    }
    let passed = inside >= 950 && (med - std::f64::consts::LN_2).abs() <= 0.02 && inv_ok;
    outcome(passed, format!("{inside}/1000 inside the band; median {med:.4};{inv_detail}"))
}

fn c7_many_shifts() -> Outcome {
    let results = par_map(500, |i| {
        let mut rng = rng_from_seed(7_000 + i as u64);
        let k = rng.random_range(1..=8);
        let m = rng.random_range(2 * k..=60);
        let a = rng.random_range(2..=4);
        let mut bad = 0;
        // Unclamped form, |y| = |x| + 2K.
        let base = random_string(m + 2 * k, a, &mut rng);
        let s0 = rng.random_range(0..=2 * k);
        let x = if i % 3 == 0 {
            random_string(m, a, &mut rng)
        } else {
            plant_edits(&base[s0..s0 + m], rng.random_range(0..=k), a, &mut rng)
        };
        let prof = ed_many_shifts_2approx(&x[..], &base[..], k).expect("shapes match");
        for s in -(k as i64)..=k as i64 {
            let exact = edit_distance(&x, y_shift(&base, k, s)).min(k) as f64;
            let d = prof.get(s);
            bad += usize::from(!(d <= exact && exact <= (2.0 * d).min(k as f64)));
        }
        // Clamped form at both ends of a longer Y.
        let yl = random_string(m + rng.random_range(0..=k), a, &mut rng);
        let at = rng.random_range(0..=yl.len() - m);
        let xw = plant_edits(&yl[at..at + m], rng.random_range(0..=k), a, &mut rng);
        let prof = window_shifts_2approx(&xw[..], &yl[..], at, k);
        for s in -(k as i64)..=k as i64 {
            let (lo, hi) = clamped_range(yl.len(), at as i64 + s, (at + m) as i64 + s);
            let exact = edit_distance(&xw, &yl[lo..hi]).min(k) as f64;
            let d = prof.get(s);
            bad += usize::from(!(d <= exact && exact <= (2.0 * d).min(k as f64)));
        }
        bad
    });
    let bad: usize = results.iter().sum();
    outcome(bad == 0, format!("{bad} sandwich violations over 500 pairs, both forms"))
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn corrupt(x: &mut [u8], count: usize, from: usize, rng: &mut Rng) {
    let mut pos: Vec<usize> = (from..x.len()).collect();
    pos.shuffle(rng);
    for &p in pos.iter().take(count) {
        x[p] = b'z';
    }
}

fn c8_testers() -> Outcome {
    let mut rng = rng_from_seed(8_000);
    let (mut unsound, mut over_reads, mut calls) = (0usize, 0usize, 0usize);
    // Soundness and read ceilings over mixed instances.
    for i in 0..3_400 {
        let k = rng.random_range(1..=6);
        let m = rng.random_range(2 * k..=400);
        let r = [0.02, 0.1, 0.5, 2.0][i % 4];
        let delta = 0.1;
        let p = rng.random_range(1..=k + 2);
        let pat = random_string(p, 3, &mut rng);
        let periodic = i % 2 == 0;
        let y: Vec<u8> = if periodic {
            (0..m + 2 * k).map(|t| pat[t % p]).collect()
        } else {
            random_string(m + 2 * k, 3, &mut rng)
        };
        let s = rng.random_range(-(k as i64)..=k as i64);
        let mut x = y_shift(&y, k, s)[..m].to_vec();
        if i % 3 != 0 {
            let c = rng.random_range(1..=3);
            corrupt(&mut x, c, 0, &mut rng);
        }
        let (xo, yo) = (StringOracle::new(x.clone()), StringOracle::new(y.clone()));
        let yw = &y[k..k + m];
        let ywo = StringOracle::new(yw.to_vec());

        let v = equality_test(&xo.full(), &ywo.full(), r, delta, &mut rng).expect("valid");
        calls += 1;
        if let Some(j) = v.mismatch() {
            unsound += usize::from(x[j] == yw[j]);
        } else if !v.is_close() {
            unsound += 1;
        }
        over_reads += usize::from((xo.reads() + ywo.reads()) as f64 > read_ceiling(m, 0, r, delta));

        xo.reset_reads();
        let v = periodicity_test(&xo.full(), k, r, delta, &mut rng).expect("valid");
        calls += 1;
        match v.period() {
            Some(q) => unsound += usize::from(q.len() > k || !is_primitive(q)),
            None => unsound += usize::from(smallest_period_naive(&x) <= k),
        }
        over_reads += usize::from(xo.reads() as f64 > read_ceiling(m, k, r, delta));

        xo.reset_reads();
        let v = matching_test(&xo.full(), &yo.full(), k, r, delta, &mut rng).expect("valid");
        calls += 1;
        let exists = (-(k as i64)..=k as i64).any(|t| y_shift(&y, k, t)[..m] == x[..]);
        match v.shift() {
            Some(t) => unsound += usize::from(t.unsigned_abs() as usize > k),
            None => unsound += usize::from(exists),
        }
        over_reads += usize::from((xo.reads() + yo.reads()) as f64 > read_ceiling(m, k, r, delta));
    }

    // Detection on far instances: 1000 trials each.
    let (n, r, delta) = (2000usize, 0.02, 0.1);
    let need = (1.0 / r) as usize + 1;
    let floor = 1.0 - delta - 0.03;
    let (mut eq_ok, mut per_ok, mut mat_ok) = (0usize, 0usize, 0usize);
    for _ in 0..1000 {
        let y = random_string(n, 4, &mut rng);
        let mut x = y.clone();
        corrupt(&mut x, need, 0, &mut rng);
        eq_ok += usize::from(!equality_test(&x[..], &y[..], r, delta, &mut rng).expect("valid").is_close());

        let k = rng.random_range(1..=8);
        let p = rng.random_range(1..=k);
        let pat = loop {
            let c = random_string(p, 3, &mut rng);
            if is_primitive(&c) {
                break c;
            }
        };
        let mut z: Vec<u8> = (0..n).map(|t| pat[t % p]).collect();
        corrupt(&mut z, need, 2 * k, &mut rng);
        let v = periodicity_test(&z[..], k, r, delta, &mut rng).expect("valid");
        per_ok += usize::from(match v.period() {
            Some(q) => hamming(&z, &q.iter().copied().cycle().take(n).collect::<Vec<_>>()) as f64 <= 1.0 / r,
            None => true,
        });

        let k = rng.random_range(1..=8);
        let yy = random_string(n + 2 * k, 4, &mut rng);
        let s = rng.random_range(-(k as i64)..=k as i64);
        let mut xx = y_shift(&yy, k, s).to_vec();
        corrupt(&mut xx, need, 2 * k, &mut rng);
        let v = matching_test(&xx[..], &yy[..], k, r, delta, &mut rng).expect("valid");
        mat_ok += usize::from(match v.shift() {
            Some(t) => hamming(&xx, y_shift(&yy, k, t)) as f64 <= 1.0 / r,
            None => true,
        });
    }
    let rates = [eq_ok, per_ok, mat_ok].map(|c| c as f64 / 1000.0);
    let passed = unsound == 0 && over_reads == 0 && rates.iter().all(|&x| x >= floor);
    outcome(
        passed,
        format!(
            "{calls} calls: {unsound} unsound, {over_reads} over the read ceiling; \
             far-instance success {:.3}/{:.3}/{:.3} (floor {floor:.2})",
            rates[0], rates[1], rates[2]
        ),
    )
}

enum Mix {
    Close,
    Far,
    Periodic,
}

fn node_contract_instance(i: usize) -> (Vec<u8>, Vec<u8>, usize, usize) {
    let mut rng = rng_from_seed(9_000 + i as u64);
    let n = rng.random_range(256..=4096);
    let k = rng.random_range(2..=32);
    let b = [2, 4][i % 2];
    let (x, y) = match [Mix::Close, Mix::Far, Mix::Periodic][i % 3] {
        Mix::Close => pair_close_or_far(n, 4, rng.random_range(0..=k), false, &mut rng),
        Mix::Far => pair_close_or_far(n, 4, 0, true, &mut rng),
        Mix::Periodic => {
            let p = rng.random_range(1..=2 * k);
            let pat = random_string(p, 4, &mut rng);
            let x: Vec<u8> = (0..n).map(|t| pat[t % p]).collect();
            let shift = rng.random_range(0..p);
            let y0: Vec<u8> = (0..n).map(|t| pat[(t + shift) % p]).collect();
            let y = plant_edits(&y0, rng.random_range(0..=k / 2), 4, &mut rng);
            (x, y)
        }
    };
    (x, y, k, b)
}

fn in_bracket(delta: f64, ed_capped: usize, td_capped: usize, alpha: f64, rate: f64) -> bool {
    let eps = 1e-9;
    delta >= ed_capped as f64 / alpha - 1.0 / rate - eps && delta <= alpha * td_capped as f64 + 1.0 / rate + eps
}

fn c9_node_contract() -> Outcome {
    let results = par_map(200, |i| {
        let (x, y, k, b) = node_contract_instance(i);
        let n = x.len();
        let ed = edit_distance(&x, &y).min(k);
        let (xo, yo) = (StringOracle::new(x.clone()), StringOracle::new(y.clone()));

        let cfg = SolverConfig::ako(n, k, b, Profile::Desk).expect("valid config");
        let mut ako = AkoSolver::new(&xo, &yo, cfg.clone(), rng_from_seed(i as u64)).expect("valid");
        let td = tree_distance_exact(&x, &y, ako.tree(), k);
        let d = ako.solve_root().get(0);
        let ako_ok = in_bracket(d, ed, td, cfg.alpha_root, cfg.root_rate);

        let cfg = SolverConfig::main(n, k, b, Profile::Desk).expect("valid config");
        let mut main = MainSolver::new(&xo, &yo, cfg.clone(), rng_from_seed(i as u64)).expect("valid");
        let td = tree_distance_exact(&x, &y, main.tree(), k);
        let d = main.solve_root().expect("no budget").profile.get(0);
        let main_ok = in_bracket(d, ed, td, cfg.alpha_root, cfg.root_rate);
        (ako_ok, main_ok, main.stats.tested_nodes > 0)
    });
    let ako = results.iter().filter(|r| r.0).count();
    let main = results.iter().filter(|r| r.1).count();
    let tested = results.iter().filter(|r| r.2).count();
    outcome(
        ako >= 180 && main >= 180,
        format!("in bracket: baseline {ako}/200, pruned {main}/200 ({tested} runs reached the testers)"),
    )
}

fn c10_gap_decisions() -> Outcome {
    let n = 100_000;
    let mut lines = Vec::new();
    let mut passed = true;
    for k in [4usize, 8, 16] {
        let runs = par_map(100, |t| {
            let far = t >= 50;
            let kind = if far {
                GeneratorKind::FarPair
            } else {
                GeneratorKind::PlantedEdits { k }
            };
            let inst = generate(&GeneratorSpec::new(kind, n, 4, 10_000 + t as u64)).expect("feasible");
            let (x, y) = inst.pair();
            let gap = GapConfig::new(Profile::Desk, t as u64);
            let rep = decide_gap(&StringOracle::new(x), &StringOracle::new(y), k, 4, &gap).expect("valid");
            let cap = rep.params.cap;
            let verified = if far {
                capped_edit_distance(x, y, cap) >= cap
            } else {
                capped_edit_distance(x, y, k + 1) <= k
            };
            (far, verified, rep.verdict, cap)
        });
        let count = |far: bool, v: Verdict| runs.iter().filter(|r| r.0 == far && r.1 && r.2 == v).count();
        let verified = |far: bool| runs.iter().filter(|r| r.0 == far && r.1).count();
        let (close_ok, far_ok) = (count(false, Verdict::Close), count(true, Verdict::Far));
        let (close_n, far_n) = (verified(false), verified(true));
        passed &= close_n == 50 && far_n == 50 && close_ok >= 45 && far_ok >= 45;
        lines.push(format!(
            "k={k} K={}: close {close_ok}/{close_n}, far {far_ok}/{far_n}",
            runs[0].3
        ));
    }
    outcome(passed, lines.join("; "))
}

fn c11_sublinearity() -> Outcome {
    let (k, b) = (8usize, 4usize);
    let sizes = [1usize << 16, 1 << 18, 1 << 20, 1 << 22];
    let mut per_k = Vec::new();
    let mut per_n = Vec::new();
    for &n in &sizes {
        let mut reads = par_map(20, |t| {
            let spec = GeneratorSpec::new(GeneratorKind::PlantedEdits { k }, n, 4, 11_000 + t as u64);
            let inst = generate(&spec).expect("feasible");
            let (x, y) = inst.pair();
            let gap = GapConfig::new(Profile::Desk, t as u64);
            decide_gap(&StringOracle::new(x), &StringOracle::new(y), k, b, &gap)
                .expect("valid")
                .reads as f64
        });
        let med = median(&mut reads);
        per_k.push(med / (n / k) as f64);
        per_n.push(med / n as f64);
    }
    let spread = per_k.iter().copied().fold(f64::MIN, f64::max) / per_k.iter().copied().fold(f64::MAX, f64::min);
    let decreasing = per_n.windows(2).all(|w| w[1] < w[0]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ");
    outcome(
        spread <= 2.0 && decreasing,
        format!("reads/(n/k) = [{}] (spread x{spread:.3}); reads/n = [{}]", fmt(&per_k), fmt(&per_n)),
    )
}

fn c12_census() -> Outcome {
    let results = par_map(50, |t| {
        let mut rng = rng_from_seed(12_000 + t as u64);
        let (k, b) = [(4usize, 2usize), (4, 4), (6, 2), (8, 4)][t % 4];
        let n = 20_000;
        let (x, y) = pair_close_or_far(n, 4, rng.random_range(0..=k), false, &mut rng);
        assert!(capped_edit_distance(&x[..], &y[..], k + 1) <= k);
        let cfg = SolverConfig::main(n, k, b, Profile::Desk).expect("valid config");
        let (xo, yo) = (StringOracle::new(x.clone()), StringOracle::new(y.clone()));
        let mut solver = MainSolver::new(&xo, &yo, cfg, rng_from_seed(t as u64)).expect("valid");
        let tree = solver.tree().clone();
        let unmatched = unmatched_per_level(&x, &y, &tree, k);
        solver.solve_root().expect("no budget");
        let d = tree.depth().max(1);
        let bound = 25 * (k * d * b).pow(2);
        let level_ok = unmatched.iter().all(|&u| u <= k) && unmatched.iter().sum::<usize>() <= k * (d + 1);
        (level_ok, solver.stats.active_nodes <= bound, *unmatched.iter().max().unwrap_or(&0), solver.stats.active_nodes)
    });
    let level_ok = results.iter().filter(|r| r.0).count();
    let active_ok = results.iter().filter(|r| r.1).count();
    let max_unmatched = results.iter().map(|r| r.2).max().unwrap_or(0);
    let max_active = results.iter().map(|r| r.3).max().unwrap_or(0);
    outcome(
        level_ok == 50 && active_ok == 50,
        format!(
            "unmatched-per-level bound {level_ok}/50 (max {max_unmatched}); \
             active-node bound {active_ok}/50 (max {max_active})"
        ),
    )
}

type Criterion = (usize, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "ED/TD equivalence", Duration::from_secs(120), c1_td_equivalence),
        (2, "range-minimum exactness", Duration::from_secs(30), c2_range_minimum),
        (3, "periodic rule", Duration::from_secs(60), c3_periodic_rule),
        (4, "random-like rule", Duration::from_secs(120), c4_random_like_rule),
        (5, "self-alignment lemmas", Duration::MAX, c5_self_alignment),
        (6, "precision sampling", Duration::from_secs(120), c6_precision_sampling),
        (7, "many-shifts sandwich", Duration::from_secs(120), c7_many_shifts),
        (8, "tester contracts", Duration::MAX, c8_testers),
        (9, "end-to-end node contract", Duration::from_secs(600), c9_node_contract),
        (10, "gap decisions", Duration::from_secs(900), c10_gap_decisions),
        (11, "sublinearity trend", Duration::from_secs(1200), c11_sublinearity),
        (12, "census bounds", Duration::MAX, c12_census),
    ];
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    // The libtest harness passes flags like `--nocapture`; a name filter selects nothing here.
    if std::env::args().skip(1).any(|a| a == "--list") {
        for (id, name, ..) in &criteria {
            println!("criterion_{id}: {name}");
        }
        return;
    }
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= limit;
        let ok = out.passed && in_time;
        let limit_note = if limit == Duration::MAX {
            String::new()
        } else {
            format!(" / {}s", limit.as_secs())
        };
        println!(
            "[{}] {id:>2} {name}: {} ({:.1}s{limit_note})",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
        if !ok {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
