//! Input strings behind a read-counting oracle, plus periodicity utilities.
//!
//! Only reads of the two input strings are charged. Everything derived from
//! them (periodic extensions, reversed views over scratch data) is free.

use std::cell::Cell;

use crate::Error;

/// Random access to a byte string. Implementations may charge each access.
pub trait Text {
    fn len(&self) -> usize;
    fn at(&self, i: usize) -> u8;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Text for [u8] {
    fn len(&self) -> usize {
        <[u8]>::len(self)
    }

    fn at(&self, i: usize) -> u8 {
        self[i]
    }
}

impl Text for Vec<u8> {
    fn len(&self) -> usize {
        Vec::len(self)
    }

    fn at(&self, i: usize) -> u8 {
        self[i]
    }
}

impl<T: Text + ?Sized> Text for &T {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn at(&self, i: usize) -> u8 {
        (**self).at(i)
    }
}

/// An immutable string that counts every character access.
#[derive(Debug)]
pub struct StringOracle {
    data: Vec<u8>,
    reads: Cell<u64>,
}

impl StringOracle {
    pub fn new(data: impl Into<Vec<u8>>) -> Self {
        Self {
            data: data.into(),
            reads: Cell::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Returns `S[i]` and charges one read. Panics when `i` is out of range.
    pub fn char_at(&self, i: usize) -> u8 {
        let c = self.data[i];
        self.reads.set(self.reads.get() + 1);
        c
    }

    pub fn reads(&self) -> u64 {
        self.reads.get()
    }

    pub fn reset_reads(&self) {
        self.reads.set(0);
    }

    /// Uncounted access for ground-truth checks. Solvers must not use this.
    pub fn raw(&self) -> &[u8] {
        &self.data
    }

    pub fn clamped_range(&self, i: i64, j: i64) -> (usize, usize) {
        clamped_range(self.len(), i, j)
    }

    pub fn view(&self, lo: usize, hi: usize) -> OracleView<'_> {
        assert!(lo <= hi && hi <= self.len(), "view [{lo}, {hi}) out of range");
        OracleView {
            oracle: self,
            start: lo,
            len: hi - lo,
        }
    }

    /// `S[i..j)` with both ends clamped into `[0, |S|]`.
    pub fn clamped_view(&self, i: i64, j: i64) -> OracleView<'_> {
        let (lo, hi) = self.clamped_range(i, j);
        self.view(lo, hi)
    }

    pub fn full(&self) -> OracleView<'_> {
        self.view(0, self.len())
    }
}

/// `(max(i,0), min(j,len))`, collapsed to an empty range when crossed.
pub fn clamped_range(len: usize, i: i64, j: i64) -> (usize, usize) {
    let lo = i.clamp(0, len as i64) as usize;
    let hi = j.clamp(0, len as i64) as usize;
    (lo, hi.max(lo))
}

/// A counted window into a [`StringOracle`].
#[derive(Clone, Copy, Debug)]
pub struct OracleView<'a> {
    oracle: &'a StringOracle,
    start: usize,
    len: usize,
}

impl<'a> OracleView<'a> {
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn slice(&self, lo: usize, hi: usize) -> OracleView<'a> {
        assert!(lo <= hi && hi <= self.len, "slice [{lo}, {hi}) of view with length {}", self.len);
        OracleView {
            oracle: self.oracle,
            start: self.start + lo,
            len: hi - lo,
        }
    }

    /// Copies the window out, charging one read per character.
    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.at(i)).collect()
    }
}

impl Text for OracleView<'_> {
    fn len(&self) -> usize {
        self.len
    }

    fn at(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        self.oracle.char_at(self.start + i)
    }
}

/// `P*[0..len)`, the periodic extension of a pattern. Never charged.
#[derive(Clone, Copy, Debug)]
pub struct PeriodicText<'a> {
    pattern: &'a [u8],
    len: usize,
}

impl<'a> PeriodicText<'a> {
    pub fn new(pattern: &'a [u8], len: usize) -> Self {
        assert!(!pattern.is_empty() || len == 0);
        Self { pattern, len }
    }
}

impl Text for PeriodicText<'_> {
    fn len(&self) -> usize {
        self.len
    }

    fn at(&self, i: usize) -> u8 {
        self.pattern[i % self.pattern.len()]
    }
}

/// `inner[start..start+len)` over any text; charges whatever `inner` charges.
#[derive(Clone, Copy, Debug)]
pub struct Slice<T> {
    inner: T,
    start: usize,
    len: usize,
}

impl<T: Text> Slice<T> {
    pub fn new(inner: T, lo: usize, hi: usize) -> Self {
        assert!(lo <= hi && hi <= inner.len(), "slice [{lo}, {hi}) out of range");
        Self {
            inner,
            start: lo,
            len: hi - lo,
        }
    }
}

impl<T: Text> Text for Slice<T> {
    fn len(&self) -> usize {
        self.len
    }

    fn at(&self, i: usize) -> u8 {
        self.inner.at(self.start + i)
    }
}

/// Reads a text back to front.
#[derive(Clone, Copy, Debug)]
pub struct Reversed<T>(pub T);

impl<T: Text> Text for Reversed<T> {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn at(&self, i: usize) -> u8 {
        self.0.at(self.0.len() - 1 - i)
    }
}

pub fn hamming_distance<A: Text + ?Sized, B: Text + ?Sized>(x: &A, y: &B) -> Result<usize, Error> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok((0..x.len()).filter(|&i| x.at(i) != y.at(i)).count())
}

/// A repeating unit `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Period {
    pub pattern: Vec<u8>,
    pub primitive: bool,
}

impl Period {
    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.is_empty()
    }
}

/// KMP failure function: `f[i]` is the length of the longest proper border
/// of `x[0..i)`, for `i` in `0..=|x|`.
pub fn failure_function(x: &[u8]) -> Vec<usize> {
    let mut f = vec![0usize; x.len() + 1];
    let mut k = 0;
    for i in 1..x.len() {
        while k > 0 && x[i] != x[k] {
            k = f[k];
        }
        if x[i] == x[k] {
            k += 1;
        }
        f[i + 1] = k;
    }
    f
}

/// Shortest `P` with `x = P*[0..|x|)`. Minimality makes `P` primitive.
pub fn smallest_period(x: &[u8]) -> Period {
    assert!(!x.is_empty(), "smallest_period of the empty string");
    let p = x.len() - failure_function(x)[x.len()];
    Period {
        pattern: x[..p].to_vec(),
        primitive: true,
    }
}

/// Like [`smallest_period`], but `None` when the period exceeds `cap`.
pub fn smallest_period_capped(x: &[u8], cap: usize) -> Option<Period> {
    let p = smallest_period(x);
    (p.len() <= cap).then_some(p)
}

/// True when `x` has some period of length at most `k`.
pub fn is_k_periodic(x: &[u8], k: usize) -> bool {
    x.is_empty() || smallest_period(x).len() <= k
}

/// Length of the longest K-periodic prefix of `y`.
///
/// The smallest period can only grow as the prefix grows, so one online
/// failure-function pass suffices.
pub fn longest_periodic_prefix(y: &[u8], k: usize) -> usize {
    if y.is_empty() {
        return 0;
    }
    let mut f = vec![0usize; y.len() + 1];
    let mut b = 0;
    for i in 1..y.len() {
        while b > 0 && y[i] != y[b] {
            b = f[b];
        }
        if y[i] == y[b] {
            b += 1;
        }
        f[i + 1] = b;
        if i + 1 - b > k {
            return i;
        }
    }
    y.len()
}

/// Block periodicity `bp_K(y)`: fewest K-periodic blocks partitioning `y`.
///
/// Greedy is optimal because every substring of a K-periodic string is
/// K-periodic.
pub fn block_periodicity(y: &[u8], k: usize) -> usize {
    assert!(k >= 1);
    let mut blocks = 0;
    let mut i = 0;
    while i < y.len() {
        i += longest_periodic_prefix(&y[i..], k);
        blocks += 1;
    }
    blocks
}
