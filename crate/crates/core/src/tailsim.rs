//! Monte-Carlo tail experiments for Weyl sums and theta pair products.
//!
//! Samples are split into fixed-size chunks; chunk c draws from the ChaCha
//! stream (seed, c). Results therefore do not depend on the number of
//! worker threads.

use std::f64::consts::PI;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::arith::RationalPair;
use crate::constants::t_of_q;
use crate::error::{invalid, Error, Result};
use crate::homog::MuAbSampler;
use crate::orbits::{enumerate_orbit, DEFAULT_Q_CAP};
use crate::theta::theta_pair;
use crate::weight::{d_rat_numeric, WeightFunction};
use crate::weylsum::{normalized_product, WeylSumSpec};

/// Samples per chunk (one RNG stream each).
pub const CHUNK: u64 = 4096;

/// Default seed of the experiments.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// The law of the random x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SamplingLaw {
    StandardNormal,
    Uniform01,
    UniformAB(f64, f64),
}

impl SamplingLaw {
    /// One draw by inverse CDF from a single uniform.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        // (k + 1/2) / 2^53 lies strictly inside (0, 1)
        let u = ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
        match *self {
            SamplingLaw::StandardNormal => standard_normal().inverse_cdf(u),
            SamplingLaw::Uniform01 => u,
            SamplingLaw::UniformAB(a, b) => a + (b - a) * u,
        }
    }
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Sample count, seed and thread count of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        SimConfig { samples, seed, workers: rayon::current_num_threads() }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// The RNG stream for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Evaluates `draw` on `cfg.samples` independent RNG draws, in sample order.
pub fn simulate_values<F>(cfg: &SimConfig, draw: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if cfg.samples == 0 {
        return invalid("sample count must be positive");
    }
    let chunks = cfg.samples.div_ceil(CHUNK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::ResourceLimit(format!("cannot start worker pool: {e}")))?;
    let parts: Result<Vec<Vec<f64>>> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = chunk_rng(cfg.seed, c);
                let len = CHUNK.min(cfg.samples - c * CHUNK);
                (0..len).map(|_| draw(&mut rng)).collect()
            })
            .collect()
    });
    Ok(parts?.into_iter().flatten().collect())
}

/// Geometric grid from `lo` to `hi` with `steps` points.
pub fn geometric_thresholds(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && steps >= 1) {
        return invalid(format!("bad threshold grid {lo}:{hi}:{steps}"));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).powf(1.0 / (steps - 1) as f64);
    Ok((0..steps).map(|i| lo * ratio.powi(i as i32)).collect())
}

/// R from 1.5 to 6, 20 geometric steps.
pub fn default_thresholds() -> Vec<f64> {
    geometric_thresholds(1.5, 6.0, 20).expect("valid default grid")
}

/// Empirical survival P(value > R^2) at each threshold R, with the
/// prediction constant * R^-4.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailCurve {
    pub thresholds: Vec<f64>,
    pub survival: Vec<f64>,
    pub predicted: Vec<f64>,
    pub counts: Vec<u64>,
    pub n_samples: u64,
    pub seed: u64,
    pub constant: f64,
}

impl TailCurve {
    /// Builds the curve from values on the |product| scale.
    pub fn from_values(values: &[f64], thresholds: &[f64], constant: f64, seed: u64) -> Result<Self> {
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("thresholds must be strictly increasing");
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as u64;
        let counts: Vec<u64> = thresholds
            .iter()
            .map(|r| n - sorted.partition_point(|v| *v <= r * r) as u64)
            .collect();
        Ok(Self::from_counts(thresholds.to_vec(), counts, n, constant, seed))
    }

    pub fn from_counts(thresholds: Vec<f64>, counts: Vec<u64>, n: u64, constant: f64, seed: u64) -> Self {
        TailCurve {
            survival: counts.iter().map(|&c| c as f64 / n as f64).collect(),
            predicted: thresholds.iter().map(|r| constant * r.powi(-4)).collect(),
            thresholds,
            counts,
            n_samples: n,
            seed,
            constant,
        }
    }

    /// Survival at the threshold equal to `r`, if present.
    pub fn survival_at(&self, r: f64) -> Option<f64> {
        self.thresholds.iter().position(|t| (t - r).abs() < 1e-12).map(|i| self.survival[i])
    }
}

/// |S_N(x) conj(S_{floor(rN)}(x))| / N for x drawn from `law`.
pub fn weyl_tail_values(spec: &WeylSumSpec, r: f64, law: SamplingLaw, cfg: &SimConfig) -> Result<Vec<f64>> {
    if spec.n == 0 {
        return invalid("N must be at least 1");
    }
    simulate_values(cfg, |rng| Ok(normalized_product(law.sample(rng), spec, r)?.norm()))
}

/// Empirical tail of |S_N conj(S_{floor(rN)})|/N against T(q; r) R^-4.
pub fn simulate_weyl_tail(
    spec: &WeylSumSpec,
    r: f64,
    law: SamplingLaw,
    thresholds: &[f64],
    cfg: &SimConfig,
) -> Result<TailCurve> {
    let pair = spec
        .pair()
        .ok_or_else(|| Error::InvalidArgument("tail prediction needs rational parameters".into()))?;
    let constant = t_of_q(&pair, r)?;
    let values = weyl_tail_values(spec, r, law, cfg)?;
    TailCurve::from_values(&values, thresholds, constant, cfg.seed)
}

/// The leading constant (2U + V)/S * D(f1, f2) / pi^2 of the theta tail.
pub fn theta_tail_constant<A, B>(pair: &RationalPair, f1: &A, f2: &B) -> Result<f64>
where
    A: WeightFunction + ?Sized,
    B: WeightFunction + ?Sized,
{
    let c = enumerate_orbit(pair, DEFAULT_Q_CAP)?.leading_constant();
    let c = *c.numer() as f64 / *c.denom() as f64;
    Ok(c * d_rat_numeric(f1, f2)? / (PI * PI))
}

/// |Theta_{f1} conj(Theta_{f2})| at draws from mu^(alpha, beta).
pub fn theta_tail_values<A, B>(pair: &RationalPair, f1: &A, f2: &B, cfg: &SimConfig) -> Result<Vec<f64>>
where
    A: WeightFunction + ?Sized,
    B: WeightFunction + ?Sized,
{
    if !(f1.is_regular() && f2.is_regular()) {
        return Err(Error::Unsupported("theta tails need regular weights".into()));
    }
    let sampler = MuAbSampler::new(pair)?;
    simulate_values(cfg, |rng| Ok(theta_pair(f1, f2, &sampler.sample(rng))?.norm()))
}

/// Empirical mu^(alpha, beta)-measure of {|Theta_{f1} conj(Theta_{f2})| > R^2}.
pub fn simulate_theta_tail<A, B>(
    pair: &RationalPair,
    f1: &A,
    f2: &B,
    thresholds: &[f64],
    cfg: &SimConfig,
) -> Result<TailCurve>
where
    A: WeightFunction + ?Sized,
    B: WeightFunction + ?Sized,
{
    let constant = theta_tail_constant(pair, f1, f2)?;
    let values = theta_tail_values(pair, f1, f2, cfg)?;
    TailCurve::from_values(&values, thresholds, constant, cfg.seed)
}

/// Result of [`fit_tail_constant`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailFit {
    pub estimate: f64,
    pub stderr: f64,
    pub bins_used: usize,
    /// Fewer than three non-empty bins were available.
    pub insufficient_tail: bool,
}

const BOOTSTRAP: usize = 200;

fn fit_log_intercept(thresholds: &[f64], counts: &[u64], n: u64, window: (f64, f64)) -> Option<(f64, usize)> {
    let logs: Vec<f64> = thresholds
        .iter()
        .zip(counts)
        .filter(|(r, c)| **r >= window.0 && **r <= window.1 && **c > 0)
        .map(|(r, &c)| (c as f64 / n as f64).ln() + 4.0 * r.ln())
        .collect();
    if logs.is_empty() {
        return None;
    }
    Some(((logs.iter().sum::<f64>() / logs.len() as f64).exp(), logs.len()))
}

/// Least-squares fit of log survival = log T - 4 log R over the window,
/// with a parametric (multinomial) bootstrap standard error.
pub fn fit_tail_constant(curve: &TailCurve, window: (f64, f64)) -> Result<TailFit> {
    let (estimate, used) = fit_log_intercept(&curve.thresholds, &curve.counts, curve.n_samples, window)
        .ok_or_else(|| Error::InvalidArgument(format!("no non-empty bins in window {window:?}")))?;
    let n = curve.n_samples;
    // cell probabilities: (R_i, R_{i+1}] and the top cell
    let k = curve.counts.len();
    let cells: Vec<f64> = (0..k)
        .map(|i| {
            let next = if i + 1 < k { curve.counts[i + 1] } else { 0 };
            (curve.counts[i] - next) as f64 / n as f64
        })
        .collect();
    let mut rng = chunk_rng(curve.seed, u64::MAX);
    let mut reps = Vec::with_capacity(BOOTSTRAP);
    for _ in 0..BOOTSTRAP {
        let mut remaining = n;
        let mut mass = 1.0;
        let mut drawn = vec![0u64; k];
        for i in 0..k {
            let p = if mass > 0.0 { (cells[i] / mass).clamp(0.0, 1.0) } else { 0.0 };
            let b = if remaining == 0 || p == 0.0 {
                0
            } else {
                Binomial::new(remaining, p).map_err(|e| Error::NumericFailure(e.to_string()))?.sample(&mut rng)
            };
            drawn[i] = b;
            remaining -= b;
            mass -= cells[i];
        }
        let mut counts = vec![0u64; k];
        let mut acc = 0;
        for i in (0..k).rev() {
            acc += drawn[i];
            counts[i] = acc;
        }
        if let Some((t, _)) = fit_log_intercept(&curve.thresholds, &counts, n, window) {
            reps.push(t);
        }
    }
    let mean = reps.iter().sum::<f64>() / reps.len().max(1) as f64;
    let var = reps.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (reps.len().max(2) - 1) as f64;
    Ok(TailFit { estimate, stderr: var.sqrt(), bins_used: used, insufficient_tail: used < 3 })
}

/// Summary used to judge whether a sample looks compactly supported.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompactSupportReport {
    pub max: f64,
    /// (R, survival(R) R^4) at R = 1, 2, 4, ...
    pub trend: Vec<(f64, f64)>,
    pub compatible_with_compact_support: bool,
    /// Counts of samples in [k/4, (k+1)/4), k = 0, 1, ...
    pub radial_histogram: Vec<u64>,
}

/// Report on radius-scale samples (event: sample > R).
pub fn compact_support_report(samples: &[f64]) -> Result<CompactSupportReport> {
    if samples.is_empty() {
        return invalid("no samples");
    }
    let max = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let n = samples.len() as f64;
    let surv = |r: f64| samples.iter().filter(|v| **v > r).count() as f64 / n;
    let mut trend = Vec::new();
    let mut r = 1.0;
    while r <= 4.0 || r <= 2.0 * max {
        trend.push((r, surv(r) * r.powi(4)));
        r *= 2.0;
    }
    let (s2, s4) = (trend[1].1, trend[2].1);
    let bins = (max * 4.0).floor().max(0.0) as usize + 1;
    let mut hist = vec![0u64; bins.min(1 << 16)];
    for v in samples {
        let i = ((v * 4.0).floor().max(0.0) as usize).min(hist.len() - 1);
        hist[i] += 1;
    }
    Ok(CompactSupportReport {
        max,
        trend,
        compatible_with_compact_support: s4 < 0.1 * s2 || s2 == 0.0,
        radial_histogram: hist,
    })
}
