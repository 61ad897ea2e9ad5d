//! Shift profiles and the slope-2 range minimum used to combine children.

use serde::{Deserialize, Serialize};

/// Values `Δ_s` for `s ∈ {−K..K}`, stored at index `s + K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftProfile {
    pub k: usize,
    pub values: Vec<f64>,
}

impl ShiftProfile {
    pub fn zeros(k: usize) -> Self {
        Self {
            k,
            values: vec![0.0; 2 * k + 1],
        }
    }

    pub fn from_fn(k: usize, mut f: impl FnMut(i64) -> f64) -> Self {
        let values = (-(k as i64)..=k as i64).map(&mut f).collect();
        Self { k, values }
    }

    pub fn from_values(k: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), 2 * k + 1, "profile needs 2K+1 entries");
        Self { k, values }
    }

    pub fn get(&self, s: i64) -> f64 {
        self.values[(s + self.k as i64) as usize]
    }

    pub fn set(&mut self, s: i64, v: f64) {
        let k = self.k as i64;
        self.values[(s + k) as usize] = v;
    }

    pub fn shifts(&self) -> impl Iterator<Item = i64> {
        let k = self.k as i64;
        -k..=k
    }

    /// Clamps every entry to at most `K`.
    pub fn capped(mut self) -> Self {
        let k = self.k as f64;
        for v in &mut self.values {
            *v = v.min(k);
        }
        self
    }
}

/// `B_s = min_{s'} A_{s'} + 2|s − s'|` in two linear sweeps.
pub fn combine(a: &ShiftProfile) -> ShiftProfile {
    let vals = &a.values;
    let len = vals.len();
    let mut left = vals.clone();
    for s in 1..len {
        left[s] = left[s].min(left[s - 1] + 2.0);
    }
    let mut out = vals.clone();
    for s in (0..len.saturating_sub(1)).rev() {
        out[s] = out[s].min(out[s + 1] + 2.0);
    }
    for (o, l) in out.iter_mut().zip(&left) {
        *o = o.min(*l);
    }
    ShiftProfile { k: a.k, values: out }
}

/// `s ↦ 2·min_j |s − s* + j·p|`, capped at `K`.
pub fn periodic_profile(k: usize, s_star: i64, p: usize) -> ShiftProfile {
    let p = p as i64;
    ShiftProfile::from_fn(k, |s| {
        let r = (s - s_star).rem_euclid(p);
        (2 * r.min(p - r)) as f64
    })
    .capped()
}

/// `s ↦ 2|s − s*|`, capped at `K`.
pub fn cone_profile(k: usize, s_star: i64) -> ShiftProfile {
    ShiftProfile::from_fn(k, |s| (2 * (s - s_star).abs()) as f64).capped()
}
