//! Exact and 2-approximate edit distances.
//!
//! [`edit_distance`] and [`optimal_alignment`] are the quadratic ground truth.
//! Everything else runs the Landau-Vishkin frontier over [`Text`] so that
//! character reads are charged when the inputs are oracles.

use crate::shift_combiner::ShiftProfile;
use crate::string_oracle::{Reversed, Slice, Text};
use crate::Error;

/// Levenshtein distance by the full quadratic DP.
pub fn edit_distance(x: &[u8], y: &[u8]) -> usize {
    let mut prev: Vec<usize> = (0..=y.len()).collect();
    let mut cur = vec![0usize; y.len() + 1];
    for (i, &a) in x.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &b) in y.iter().enumerate() {
            let sub = prev[j] + usize::from(a != b);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[y.len()]
}

/// Longest common prefix of `x[i..)` and `y[j..)`.
pub fn lce<A: Text + ?Sized, B: Text + ?Sized>(x: &A, i: usize, y: &B, j: usize) -> usize {
    let mut l = 0;
    while i + l < x.len() && j + l < y.len() && x.at(i + l) == y.at(j + l) {
        l += 1;
    }
    l
}

const UNREACHED: i64 = i64::MIN / 4;

/// Landau-Vishkin over the table `D[i][j] = min_{c ≤ start_max} ED(x[0..i), w[c..j))`.
///
/// Returns `min(D[|x|][t], cap)` for every target column `t`.
fn frontier<A, B>(x: &A, w: &B, start_max: usize, cap: usize, targets: &[usize]) -> Vec<usize>
where
    A: Text + ?Sized,
    B: Text + ?Sized,
{
    let m = x.len() as i64;
    let wl = w.len() as i64;
    let start_max = start_max.min(w.len()) as i64;
    let mut out = vec![cap; targets.len()];
    if cap == 0 {
        return out;
    }
    let off = cap as i64 + 1;
    let width = (start_max + 2 * cap as i64 + 3) as usize;
    let mut cur = vec![UNREACHED; width];
    let mut next = vec![UNREACHED; width];
    let idx = |g: i64| (g + off) as usize;

    let slide = |row: i64, g: i64| -> i64 { row + lce(x, row as usize, w, (row + g) as usize) as i64 };

    for g in 0..=start_max {
        cur[idx(g)] = slide(0, g);
    }
    let mut open = targets.len();
    let resolve = |cur: &[i64], d: usize, out: &mut [usize], open: &mut usize| {
        for (t, &col) in targets.iter().enumerate() {
            if out[t] == cap {
                let g = col as i64 - m;
                if g >= -(cap as i64) && g <= start_max + cap as i64 && cur[idx(g)] >= m {
                    out[t] = d;
                    *open -= 1;
                }
            }
        }
    };
    resolve(&cur, 0, &mut out, &mut open);

    for d in 1..cap as i64 {
        if open == 0 {
            break;
        }
        let lo = (-d).max(-m);
        let hi = (start_max + d).min(wl);
        next.fill(UNREACHED);
        for g in lo..=hi {
            let mut cand = UNREACHED;
            let same = cur[idx(g)];
            if same > UNREACHED {
                cand = cand.max(same + 1);
            }
            let up = cur[idx(g + 1)];
            if up > UNREACHED {
                cand = cand.max(up + 1);
            }
            let left = cur[idx(g - 1)];
            if left > UNREACHED {
                cand = cand.max(left);
            }
            if cand == UNREACHED {
                continue;
            }
            let bound = m.min(wl - g);
            let floor = (-g).max(0);
            let row = cand.min(bound);
            if row < floor {
                continue;
            }
            next[idx(g)] = slide(row, g);
        }
        std::mem::swap(&mut cur, &mut next);
        resolve(&cur, d as usize, &mut out, &mut open);
    }
    out
}

/// `min(ED(x, y), k)` in `O(|x| + k²)` comparisons.
pub fn capped_edit_distance<A: Text + ?Sized, B: Text + ?Sized>(x: &A, y: &B, k: usize) -> usize {
    let diff = x.len().abs_diff(y.len());
    if diff >= k {
        return k;
    }
    frontier(x, y, 0, k, &[y.len()])[0]
}

/// For `|y| = |x| + 2K`, returns `min(D[m][m+K+s], K)` for `s ∈ {−K..K}`
/// where `D[i][j] = min_{0 ≤ s' ≤ 2K} ED(x[0..i), y[s'..j))`.
///
/// Each entry `e` satisfies `e ≤ ED^{≤K}(x, y[K+s..m+K+s)) ≤ min(2e, K)`.
pub fn ed_many_shifts_2approx<A, B>(x: &A, y: &B, k: usize) -> Result<ShiftProfile, Error>
where
    A: Text + ?Sized,
    B: Text + ?Sized,
{
    let m = x.len();
    if y.len() != m + 2 * k {
        return Err(Error::LengthMismatch {
            left: m + 2 * k,
            right: y.len(),
        });
    }
    let targets: Vec<usize> = (0..=2 * k).map(|t| m + t).collect();
    let d = frontier(x, y, 2 * k, k, &targets);
    Ok(ShiftProfile::from_values(k, d.into_iter().map(|v| v as f64).collect()))
}

/// Many-shifts 2-approximation for a node whose `Y` window may be clamped.
///
/// `x` is `X[i..i+|x|)` and `y` is the whole of `Y`; shift `s` compares `x`
/// against `Y[i+s..i+|x|+s)` clamped to `Y`'s bounds. Shifts whose end stays
/// inside `Y` share one forward pass; shifts clamped on the right are solved
/// exactly on the reversed strings (they all share one start there), and the
/// rare shifts clamped on both sides fall back to capped LV.
pub fn window_shifts_2approx<A, B>(x: &A, y: &B, i: usize, k: usize) -> ShiftProfile
where
    A: Text + ?Sized,
    B: Text + ?Sized,
{
    let m = x.len() as i64;
    let ny = y.len() as i64;
    let (i, ki) = (i as i64, k as i64);
    let j = i + m;
    let clamp = |v: i64| v.clamp(0, ny);
    let mut prof = ShiftProfile::zeros(k);

    let mut forward: Vec<i64> = Vec::new();
    let mut reverse: Vec<i64> = Vec::new();
    for s in -ki..=ki {
        let (st, en) = (clamp(i + s), clamp(j + s));
        if st >= en {
            prof.set(s, m.min(ki) as f64);
        } else if j + s <= ny {
            forward.push(s);
        } else if i + s >= 0 {
            reverse.push(s);
        } else {
            let ys = Slice::new(y, st as usize, en as usize);
            prof.set(s, capped_edit_distance(x, &ys, k) as f64);
        }
    }

    if let (Some(&first), Some(&last)) = (forward.first(), forward.last()) {
        let lo = clamp(i + first);
        let hi = clamp(j + last);
        let window = Slice::new(y, lo as usize, hi as usize);
        let start_max = (clamp(i + last) - lo) as usize;
        let targets: Vec<usize> = forward.iter().map(|&s| (clamp(j + s) - lo) as usize).collect();
        let vals = frontier(x, &window, start_max, k, &targets);
        for (&s, v) in forward.iter().zip(vals) {
            prof.set(s, v as f64);
        }
    }

    if let Some(&first) = reverse.first() {
        let lo = clamp(i + first);
        let window = Reversed(Slice::new(y, lo as usize, ny as usize));
        let rx = Reversed(x);
        let targets: Vec<usize> = reverse.iter().map(|&s| (ny - clamp(i + s)) as usize).collect();
        let vals = frontier(&rx, &window, 0, k, &targets);
        for (&s, v) in reverse.iter().zip(vals) {
            prof.set(s, v as f64);
        }
    }
    prof
}

/// Monotone map `A` over `{0..|X|}` with `A(0) = 0`, `A(|X|) = |Y|`.
///
/// For `|X| = 0` and `|Y| > 0` the pins contradict each other; the map is then
/// empty and the whole of `Y` is charged to a virtual position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub map: Vec<usize>,
    pub cost: usize,
}

impl Alignment {
    /// `Σ_i ED(X[i], Y[A(i)..A(i+1)))`.
    pub fn certificate_cost(&self, x: &[u8], y: &[u8]) -> usize {
        if self.map.is_empty() {
            return y.len();
        }
        (0..x.len())
            .map(|i| edit_distance(&x[i..i + 1], &y[self.map[i]..self.map[i + 1]]))
            .sum()
    }
}

/// An optimal alignment by DP backtracking.
///
/// Ties prefer match/substitute, then delete, then insert. `A(i)` is the
/// column where the path first enters row `i`; trailing insertions go to the
/// last character.
pub fn optimal_alignment(x: &[u8], y: &[u8]) -> Alignment {
    let (m, n) = (x.len(), y.len());
    if m == 0 {
        return Alignment {
            map: if n == 0 { vec![0] } else { Vec::new() },
            cost: n,
        };
    }
    let w = n + 1;
    let mut d = vec![0u32; (m + 1) * w];
    for j in 0..=n {
        d[j] = j as u32;
    }
    for i in 1..=m {
        d[i * w] = i as u32;
        for j in 1..=n {
            let sub = d[(i - 1) * w + j - 1] + u32::from(x[i - 1] != y[j - 1]);
            d[i * w + j] = sub.min(d[(i - 1) * w + j] + 1).min(d[i * w + j - 1] + 1);
        }
    }
    // Walk back from (m, n); `entry[i]` is the smallest column on row i.
    let mut entry = vec![usize::MAX; m + 1];
    let (mut i, mut j) = (m, n);
    entry[m] = n;
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        if i > 0 && j > 0 && here == d[(i - 1) * w + j - 1] + u32::from(x[i - 1] != y[j - 1]) {
            i -= 1;
            j -= 1;
        } else if i > 0 && here == d[(i - 1) * w + j] + 1 {
            i -= 1;
        } else {
            j -= 1;
        }
        entry[i] = entry[i].min(j);
    }
    let mut map = entry;
    map[m] = n;
    map[0] = 0;
    Alignment {
        map,
        cost: d[m * w + n] as usize,
    }
}
