//! Precision sampling: draw a precision `u_i` per summand, read each summand
//! only to additive accuracy `u_i`, and still recover the sum to `(1+ε)`.
//!
//! Precisions are minima of `λ` rate-1 exponentials, i.e. `Exp(λ)`. The
//! replicas are kept so that recovery can take a median over them.

use rand_distr::Exp1;

use crate::Error;

/// Word-RAM rounding grid for precisions.
pub const GRID: f64 = 1.0 / (1u64 << 40) as f64;

pub const DEFAULT_C_LAMBDA: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionParams {
    pub eps: f64,
    pub delta: f64,
    pub c_lambda: f64,
    pub lambda: usize,
}

impl PrecisionParams {
    pub fn new(eps: f64, delta: f64) -> Result<Self, Error> {
        Self::with_constant(eps, delta, DEFAULT_C_LAMBDA)
    }

    /// `λ = ⌈c · ε⁻² · ln(1/δ)⌉`.
    pub fn with_constant(eps: f64, delta: f64, c_lambda: f64) -> Result<Self, Error> {
        if !(eps > 0.0) || !(delta > 0.0 && delta < 1.0) || !(c_lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "precision sampling needs ε > 0, δ ∈ (0,1), c > 0 (got {eps}, {delta}, {c_lambda})"
            )));
        }
        let lambda = (c_lambda * (1.0 / delta).ln() / (eps * eps)).ceil().max(1.0) as usize;
        Ok(Self {
            eps,
            delta,
            c_lambda,
            lambda,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionSample {
    /// `min(1, min_j replicas[j])`.
    pub u: f64,
    pub replicas: Vec<f64>,
}

fn round_to_grid(x: f64) -> f64 {
    ((x * GRID.recip()).floor() * GRID).max(GRID)
}

pub fn sample_precision<R: rand::Rng + ?Sized>(params: &PrecisionParams, rng: &mut R) -> PrecisionSample {
    let replicas: Vec<f64> = (0..params.lambda)
        .map(|_| round_to_grid(rng.sample::<f64, _>(Exp1)))
        .collect();
    let u = replicas.iter().copied().fold(1.0, f64::min);
    PrecisionSample { u, replicas }
}

fn lower_median(buf: &mut [f64]) -> f64 {
    let mid = (buf.len() - 1) / 2;
    *buf.select_nth_unstable_by(mid, |a, b| a.total_cmp(b)).1
}

/// `ln 2 · median_j max_i Ã_i / u_{i,j}`.
///
/// For even `λ` the lower median is used.
pub fn recover_sum(estimates: &[f64], samples: &[&PrecisionSample]) -> f64 {
    assert_eq!(estimates.len(), samples.len(), "one precision per estimate");
    if estimates.is_empty() {
        return 0.0;
    }
    let lambda = samples[0].replicas.len();
    let mut m = vec![0.0f64; lambda];
    for (a, smp) in estimates.iter().zip(samples) {
        debug_assert_eq!(smp.replicas.len(), lambda);
        for (mj, &u) in m.iter_mut().zip(&smp.replicas) {
            *mj = mj.max(a / u);
        }
    }
    std::f64::consts::LN_2 * lower_median(&mut m)
}

/// [`recover_sum`] applied shift by shift to a family of child profiles.
///
/// `rows[i][t]` is child `i`'s estimate at shift index `t`.
pub fn recover_rows(rows: &[Vec<f64>], samples: &[&PrecisionSample]) -> Vec<f64> {
    assert_eq!(rows.len(), samples.len());
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let width = first.len();
    let lambda = samples[0].replicas.len();
    let mut m = vec![0.0f64; lambda];
    let mut out = vec![0.0; width];
    for (t, o) in out.iter_mut().enumerate() {
        if rows.iter().all(|r| r[t] == 0.0) {
            continue;
        }
        m.fill(0.0);
        for (row, smp) in rows.iter().zip(samples) {
            let a = row[t];
            if a == 0.0 {
                continue;
            }
            for (mj, &u) in m.iter_mut().zip(&smp.replicas) {
                *mj = mj.max(a / u);
            }
        }
        *o = std::f64::consts::LN_2 * lower_median(&mut m);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseMeanReport {
    /// Empirical `E[1/u | u > 1/(λN)]`.
    pub mean: f64,
    /// Fraction of trials in which the event held.
    pub event_rate: f64,
    pub lambda: usize,
}

/// Monte-Carlo estimate of the conditional inverse-precision mean.
pub fn conditional_inverse_mean_check<R: rand::Rng + ?Sized>(
    params: &PrecisionParams,
    big_n: f64,
    trials: usize,
    rng: &mut R,
) -> InverseMeanReport {
    let threshold = 1.0 / (params.lambda as f64 * big_n);
    let (mut sum, mut hits) = (0.0, 0usize);
    for _ in 0..trials {
        let u = sample_precision(params, rng).u;
        if u > threshold {
            sum += 1.0 / u;
            hits += 1;
        }
    }
    InverseMeanReport {
        mean: if hits == 0 { f64::NAN } else { sum / hits as f64 },
        event_rate: hits as f64 / trials.max(1) as f64,
        lambda: params.lambda,
    }
}
