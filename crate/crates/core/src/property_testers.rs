//! One-sided sublinear testers for equality, periodicity and shifted matches.
//!
//! A `Far` verdict is always backed by a real mismatch (or, for the matching
//! test, by the absence of any candidate shift). A `Close` verdict may be
//! wrong with probability at most `δ`, and then only by a Hamming slack of
//! `1/r`.

use crate::string_oracle::{smallest_period, PeriodicText, Slice, Text};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Close,
    Far,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Mismatch(usize),
    Period(Vec<u8>),
    Shift(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TesterVerdict {
    pub kind: Kind,
    pub witness: Option<Witness>,
}

impl TesterVerdict {
    fn close(witness: Option<Witness>) -> Self {
        Self {
            kind: Kind::Close,
            witness,
        }
    }

    fn far(witness: Option<Witness>) -> Self {
        Self {
            kind: Kind::Far,
            witness,
        }
    }

    pub fn is_close(&self) -> bool {
        self.kind == Kind::Close
    }

    pub fn mismatch(&self) -> Option<usize> {
        match self.witness {
            Some(Witness::Mismatch(i)) => Some(i),
            _ => None,
        }
    }

    pub fn period(&self) -> Option<&[u8]> {
        match &self.witness {
            Some(Witness::Period(p)) => Some(p),
            _ => None,
        }
    }

    pub fn shift(&self) -> Option<i64> {
        match self.witness {
            Some(Witness::Shift(s)) => Some(s),
            _ => None,
        }
    }
}

/// `⌈r · len · ln(1/δ)⌉`.
pub fn sample_count(len: usize, r: f64, delta: f64) -> f64 {
    (r * len as f64 * (1.0 / delta).ln()).ceil()
}

/// `4 · (r|X|·ln(1/δ) + K·log₂|X| + 8K + 1)`; the `+1` covers rounding the sample count up.
pub fn read_ceiling(len: usize, k: usize, r: f64, delta: f64) -> f64 {
    let log = (len.max(1) as f64).log2();
    4.0 * (r * len as f64 * (1.0 / delta).ln() + k as f64 * log + 8.0 * k as f64 + 1.0)
}

fn check_rate(r: f64, delta: f64) -> Result<(), Error> {
    if !(r > 0.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("tester needs r > 0, δ ∈ (0,1) (got {r}, {delta})")));
    }
    Ok(())
}

/// Samples `⌈r|X|ln(1/δ)⌉` positions and reports the first mismatch seen.
///
/// When that many samples would cover the string anyway, every position is
/// compared once in order instead, which can only make `Close` more reliable.
pub fn equality_test<A, B, R>(x: &A, y: &B, r: f64, delta: f64, rng: &mut R) -> Result<TesterVerdict, Error>
where
    A: Text + ?Sized,
    B: Text + ?Sized,
    R: rand::Rng + ?Sized,
{
    check_rate(r, delta)?;
    let n = x.len();
    if n != y.len() {
        return Err(Error::LengthMismatch { left: n, right: y.len() });
    }
    if n == 0 {
        return Ok(TesterVerdict::close(None));
    }
    let samples = sample_count(n, r, delta);
    if samples >= n as f64 {
        for i in 0..n {
            if x.at(i) != y.at(i) {
                return Ok(TesterVerdict::far(Some(Witness::Mismatch(i))));
            }
        }
    } else {
        for _ in 0..samples as u64 {
            let i = rng.random_range(0..n);
            if x.at(i) != y.at(i) {
                return Ok(TesterVerdict::far(Some(Witness::Mismatch(i))));
            }
        }
    }
    Ok(TesterVerdict::close(None))
}

/// Is `x` close to `P*` for a primitive `P` with `|P| ≤ K`?
///
/// The candidate `P` is the smallest period of `x[0..2K)`. `Far` means `x`
/// is not K-periodic: any period `Q ≤ K` of `x` would, by Fine and Wilf, be
/// a multiple of `|P|` and make `x = P*`.
pub fn periodicity_test<A, R>(x: &A, k: usize, r: f64, delta: f64, rng: &mut R) -> Result<TesterVerdict, Error>
where
    A: Text + ?Sized,
    R: rand::Rng + ?Sized,
{
    check_rate(r, delta)?;
    if k == 0 || x.len() < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "periodicity test needs |X| ≥ 2K ≥ 2 (got |X| = {}, K = {k})",
            x.len()
        )));
    }
    let prefix: Vec<u8> = (0..2 * k).map(|i| x.at(i)).collect();
    let p = smallest_period(&prefix);
    if p.len() > k {
        return Ok(TesterVerdict::far(None));
    }
    let star = PeriodicText::new(&p.pattern, x.len());
    let v = equality_test(x, &star, r, delta, rng)?;
    Ok(if v.is_close() {
        TesterVerdict::close(Some(Witness::Period(p.pattern)))
    } else {
        v
    })
}

/// All `p ∈ [0, |text| − |pat|]` with `text[p..p+|pat|) = pat`.
fn occurrences(pat: &[u8], text: &[u8]) -> Vec<usize> {
    let f = crate::string_oracle::failure_function(pat);
    let mut out = Vec::new();
    let mut q = 0;
    for (i, &c) in text.iter().enumerate() {
        while q > 0 && (q == pat.len() || pat[q] != c) {
            q = f[q];
        }
        if pat[q] == c {
            q += 1;
        }
        if q == pat.len() {
            out.push(i + 1 - pat.len());
        }
    }
    out
}

/// Finds `s* ∈ {−K..K}` with `x ≈ y[K+s*..|x|+K+s*)`, or reports that none exists.
///
/// Requires `|y| = |x| + 2K` and `|x| ≥ 2K`. The prefix `x[0..2K)` pins the
/// candidate shifts; with one candidate it is verified directly. With two or
/// more the prefix is periodic, and either both strings follow the period
/// (any candidate works) or the first mismatch against the period that has
/// a clean 2K-run before it fixes the shift.
pub fn matching_test<A, B, R>(x: &A, y: &B, k: usize, r: f64, delta: f64, rng: &mut R) -> Result<TesterVerdict, Error>
where
    A: Text + ?Sized,
    B: Text + ?Sized,
    R: rand::Rng + ?Sized,
{
    check_rate(r, delta)?;
    let m = x.len();
    if y.len() != m + 2 * k {
        return Err(Error::LengthMismatch {
            left: m + 2 * k,
            right: y.len(),
        });
    }
    if k == 0 || m < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "matching test needs |X| ≥ 2K ≥ 2 (got |X| = {m}, K = {k})"
        )));
    }
    let ki = k as i64;
    let d3 = delta / 3.0;
    let y_at = |s: i64| Slice::new(y, (ki + s) as usize, (ki + s) as usize + m);

    // Aligning the prefixes.
    let pat: Vec<u8> = (0..2 * k).map(|i| x.at(i)).collect();
    let text: Vec<u8> = (0..4 * k).map(|i| y.at(i)).collect();
    let shifts: Vec<i64> = occurrences(&pat, &text).into_iter().map(|p| p as i64 - ki).collect();
    let verify = |s: i64, rng: &mut R| -> Result<TesterVerdict, Error> {
        let v = equality_test(x, &y_at(s), r, d3, rng)?;
        Ok(if v.is_close() {
            TesterVerdict::close(Some(Witness::Shift(s)))
        } else {
            TesterVerdict::far(None)
        })
    };
    match shifts.len() {
        0 => return Ok(TesterVerdict::far(None)),
        1 => return verify(shifts[0], rng),
        _ => {}
    }

    // Testing for periodicity.
    let s = shifts[0];
    let period = &pat[..(shifts[1] - s) as usize];
    let star = PeriodicText::new(period, m);
    let ys = y_at(s);
    let mut i0 = equality_test(x, &star, 2.0 * r, d3, rng)?.mismatch();
    if i0.is_none() {
        i0 = equality_test(&ys, &star, 2.0 * r, d3, rng)?.mismatch();
    }
    let Some(i0) = i0 else {
        return Ok(TesterVerdict::close(Some(Witness::Shift(s))));
    };

    // Aligning the leading mismatches. Invariant: [lo, lo+2K) is clean, hi is dirty.
    let dirty = |t: usize| x.at(t) != star.at(t) || ys.at(t) != star.at(t);
    let (mut lo, mut hi) = (0usize, i0);
    while hi > lo + 4 * k {
        let mid = (lo + hi).div_ceil(2);
        match (mid..(mid + 2 * k + 1).min(hi)).find(|&t| dirty(t)) {
            Some(t) => hi = t,
            None => lo = mid,
        }
    }
    let lead = (lo..=hi).find(|&t| dirty(t)).expect("hi is a mismatch");
    // Y's deviation may lie past the end of Y_s, so that side reads Y itself.
    let y_end = (m as i64 + ki - s) as usize;
    let star_ext = PeriodicText::new(period, y_end);
    let candidate = if x.at(lead) != star.at(lead) {
        (lead..(lead + 2 * k + 1).min(y_end))
            .find(|&j| y.at((ki + s) as usize + j) != star_ext.at(j))
            .map(|j| s + (j - lead) as i64)
    } else {
        // s is the smallest prefix-consistent shift, so this side only rules shifts out.
        (lead..(lead + 2 * k + 1).min(m))
            .find(|&j| x.at(j) != star.at(j))
            .map(|j| s - (j - lead) as i64)
    };
    match candidate {
        Some(c) if c.abs() <= ki => verify(c, rng),
        _ => Ok(TesterVerdict::far(None)),
    }
}
