//! Monte-Carlo estimate of the expected signature, for statistical
//! cross-checks of the exact field.
//!
//! Each path is a Gaussian random walk with step variance `dt` per
//! coordinate, read as the piecewise-linear path through its points. The walk
//! stops at the first point outside the disc; the last segment is cut where it
//! crosses the circle, so every path ends exactly on the boundary. The
//! signature is accumulated segment by segment with Chen's identity.
//!
//! Path `k` draws from ChaCha8 seeded with `seed` on stream `k`, and paths are
//! summed in fixed batches merged in batch order, so the estimate depends on
//! the configuration only, not on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluator::{PointEvaluation, RealSeries};
use crate::word::Word;

/// Highest level the simulator accumulates.
pub const MAX_MC_LEVEL: usize = 8;

/// Hard cap on walk steps per path.
pub const MAX_STEPS: u64 = 1_000_000_000;

const BATCH: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub start: (f64, f64),
    pub dt: f64,
    pub paths: u64,
    pub level: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let (x, y) = self.start;
        if !(x.is_finite() && y.is_finite()) || x.hypot(y) >= 1.0 {
            return Err(Error::usage(format!("start ({x}, {y}) must lie strictly inside the unit disc")));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::usage(format!("time step {} must be positive", self.dt)));
        }
        if self.paths == 0 {
            return Err(Error::usage("need at least one path"));
        }
        if self.level > MAX_MC_LEVEL {
            return Err(Error::usage(format!(
                "simulation level {} above supported {MAX_MC_LEVEL}",
                self.level
            )));
        }
        Ok(())
    }
}

/// `Σ_{k≤N} δ^⊗k / k!`, the signature of one straight segment.
pub fn segment_signature(delta: (f64, f64), level: usize) -> RealSeries {
    let mut out = RealSeries::zero(level);
    out.level_values_mut(0)[0] = 1.0;
    let d = [delta.0, delta.1];
    for k in 1..=level {
        let (lower, upper) = split_levels(&mut out, k);
        for (idx, x) in lower.iter().enumerate() {
            upper[2 * idx] = x * d[0] / k as f64;
            upper[2 * idx + 1] = x * d[1] / k as f64;
        }
    }
    out
}

fn split_levels(s: &mut RealSeries, k: usize) -> (Vec<f64>, &mut [f64]) {
    let lower = s.level_values(k - 1).to_vec();
    (lower, s.level_values_mut(k))
}

const fn offset(n: usize) -> usize {
    (1 << n) - 1
}

/// Per-path running signature, levels `0..=L` in one flat buffer of size
/// `B = offset(L + 1)` with level `n` at `offset(n)..offset(n + 1)`. Both are
/// const parameters so the loops below have constant bounds and the state
/// stays small enough to live in registers.
struct Chen<const L: usize, const B: usize> {
    buf: [f64; B],
    seg: [f64; B],
}

impl<const L: usize, const B: usize> Chen<L, B> {
    fn new() -> Self {
        debug_assert_eq!(B, offset(L + 1));
        let mut c = Chen { buf: [0.0; B], seg: [0.0; B] };
        c.reset();
        c
    }

    fn reset(&mut self) {
        self.buf = [0.0; B];
        self.buf[0] = 1.0;
        self.seg[0] = 1.0;
    }

    fn values(&self) -> &[f64] {
        &self.buf
    }

    /// `S ← S ⊗ exp(δ)`: with `Eⱼ = δ^⊗j / j!`, level `n` becomes
    /// `Sₙ + Σ_{j=1}^{n} S_{n−j} ⊗ Eⱼ`. Levels are updated from the top so
    /// every right-hand side still reads the old `S`.
    #[inline(always)]
    fn push(&mut self, d: [f64; 2]) {
        // Exclusive ranges on purpose: with `..=` these loops are not
        // unrolled and the update runs about six times slower.
        for k in 1..L + 1 {
            let inv = 1.0 / k as f64;
            let (d0, d1) = (d[0] * inv, d[1] * inv);
            for i in 0..1 << (k - 1) {
                let x = self.seg[offset(k - 1) + i];
                self.seg[offset(k) + 2 * i] = x * d0;
                self.seg[offset(k) + 2 * i + 1] = x * d1;
            }
        }
        for m in 0..L {
            let n = L - m;
            for j in 1..n + 1 {
                for h in 0..1 << (n - j) {
                    let a = self.buf[offset(n - j) + h];
                    for t in 0..1 << j {
                        self.buf[offset(n) + (h << j) + t] += a * self.seg[offset(j) + t];
                    }
                }
            }
        }
    }
}

/// Fraction `t ∈ (0, 1]` of the step `δ` from `p` (inside) at which `|p + tδ| = 1`.
fn exit_fraction(p: [f64; 2], d: [f64; 2]) -> f64 {
    let pd = p[0] * d[0] + p[1] * d[1];
    let dd = d[0] * d[0] + d[1] * d[1];
    let pp = p[0] * p[0] + p[1] * p[1];
    let t = (-pd + (pd * pd + dd * (1.0 - pp)).max(0.0).sqrt()) / dd;
    t.clamp(0.0, 1.0)
}

/// Streaming mean and sum of squared deviations.
#[derive(Clone, Debug)]
struct Moments {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(len: usize) -> Self {
        Moments { count: 0, mean: vec![0.0; len], m2: vec![0.0; len] }
    }

    fn push(&mut self, x: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let d = v - *m;
            *m += d / n;
            *s += d * (v - *m);
        }
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for i in 0..self.mean.len() {
            let d = other.mean[i] - self.mean[i];
            self.mean[i] += d * nb / n;
            self.m2[i] += other.m2[i] + d * d * na * nb / n;
        }
        self.count += other.count;
    }
}

/// Mean and componentwise standard error over the simulated paths.
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureEstimate {
    pub mean: RealSeries,
    pub stderr: RealSeries,
    pub paths: u64,
    pub steps: u64,
}

impl SignatureEstimate {
    pub fn level(&self) -> usize {
        self.mean.level()
    }
}

fn simulate_batch<const L: usize, const B: usize>(cfg: &SimConfig, range: std::ops::Range<u64>) -> Result<(Moments, u64)> {
    let mut chen = Chen::<L, B>::new();
    let mut moments = Moments::new(offset(L + 1));
    let sd = cfg.dt.sqrt();
    let mut steps = 0u64;
    for path in range {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(path);
        chen.reset();
        let mut p = [cfg.start.0, cfg.start.1];
        let mut n = 0u64;
        loop {
            if n >= MAX_STEPS {
                return Err(Error::StepCap { path, steps: n });
            }
            n += 1;
            let g0: f64 = rng.sample(StandardNormal);
            let g1: f64 = rng.sample(StandardNormal);
            let mut d = [sd * g0, sd * g1];
            let q = [p[0] + d[0], p[1] + d[1]];
            if q[0] * q[0] + q[1] * q[1] >= 1.0 {
                let t = exit_fraction(p, d);
                d = [d[0] * t, d[1] * t];
                chen.push(d);
                break;
            }
            chen.push(d);
            p = q;
        }
        steps += n;
        moments.push(chen.values());
    }
    Ok((moments, steps))
}

fn run_batch(cfg: &SimConfig, range: std::ops::Range<u64>) -> Result<(Moments, u64)> {
    match cfg.level {
        0 => simulate_batch::<0, 1>(cfg, range),
        1 => simulate_batch::<1, 3>(cfg, range),
        2 => simulate_batch::<2, 7>(cfg, range),
        3 => simulate_batch::<3, 15>(cfg, range),
        4 => simulate_batch::<4, 31>(cfg, range),
        5 => simulate_batch::<5, 63>(cfg, range),
        6 => simulate_batch::<6, 127>(cfg, range),
        7 => simulate_batch::<7, 255>(cfg, range),
        8 => simulate_batch::<8, 511>(cfg, range),
        l => Err(Error::usage(format!("simulation level {l} above supported {MAX_MC_LEVEL}"))),
    }
}

/// Runs `cfg.paths` independent paths and summarizes their signatures.
pub fn simulate_exit_signature(cfg: &SimConfig) -> Result<SignatureEstimate> {
    cfg.validate()?;
    let batches: Vec<std::ops::Range<u64>> = (0..cfg.paths.div_ceil(BATCH))
        .map(|b| b * BATCH..((b + 1) * BATCH).min(cfg.paths))
        .collect();
    let parts: Vec<Result<(Moments, u64)>> =
        batches.into_par_iter().map(|r| run_batch(cfg, r)).collect();
    let mut total = Moments::new(offset(cfg.level + 1));
    let mut steps = 0;
    for part in parts {
        let (m, s) = part?;
        total.merge(&m);
        steps += s;
    }
    let mut mean = RealSeries::zero(cfg.level);
    let mut stderr = RealSeries::zero(cfg.level);
    let n = total.count as f64;
    for lvl in 0..=cfg.level {
        let range = offset(lvl)..offset(lvl + 1);
        mean.level_values_mut(lvl).copy_from_slice(&total.mean[range.clone()]);
        for (se, m2) in stderr.level_values_mut(lvl).iter_mut().zip(&total.m2[range]) {
            *se = if total.count > 1 { (m2 / (n - 1.0) / n).sqrt() } else { f64::INFINITY };
        }
    }
    // Level 0 is identically 1 on every path.
    mean.level_values_mut(0)[0] = 1.0;
    stderr.level_values_mut(0)[0] = 0.0;
    Ok(SignatureEstimate { mean, stderr, paths: cfg.paths, steps })
}

/// One compared component.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McRow {
    pub level: usize,
    pub word: String,
    pub mean: f64,
    pub stderr: f64,
    pub exact: f64,
    pub zscore: f64,
    pub flagged: bool,
}

/// `z = (mean − exact) / stderr` per component, flagged when `|z| > sigmas`.
/// A component with zero standard error scores 0 if it matches to 1e−12 and
/// is flagged otherwise.
pub fn mc_compare(est: &SignatureEstimate, exact: &PointEvaluation, sigmas: f64) -> Result<Vec<McRow>> {
    if exact.values.level() < est.level() {
        return Err(Error::usage(format!(
            "exact values stop at level {}, estimate has level {}",
            exact.values.level(),
            est.level()
        )));
    }
    let mut rows = Vec::new();
    for lvl in 0..=est.level() {
        for idx in 0..1u64 << lvl {
            let w = Word::from_index(lvl, idx);
            let (mean, se, ex) = (est.mean.get(&w), est.stderr.get(&w), exact.values.get(&w));
            let zscore = if se > 0.0 {
                (mean - ex) / se
            } else if (mean - ex).abs() <= 1e-12 {
                0.0
            } else {
                f64::INFINITY.copysign(mean - ex)
            };
            rows.push(McRow {
                level: lvl,
                word: w.to_string(),
                mean,
                stderr: se,
                exact: ex,
                zscore,
                flagged: zscore.is_nan() || zscore.abs() > sigmas,
            });
        }
    }
    Ok(rows)
}
