//! Empirical validation: eavesdropper-channel sampling, outage estimates and
//! distribution checks for the wiretap gain.
//!
//! Trial `i` always draws from stream `i` of the caller's seed, so results are
//! bit-identical whether shards run serially or across a thread pool.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::analytics::{gain_cdf, GammaFit, SopInputs};
use crate::error::{dim_err, Error, Result};
use crate::model::{
    complex_normal, stream_rng, Beamformer, ChannelSet, EveChannels, PhaseVector, SystemConfig,
};
use crate::C64;

/// Trials per shard. Fixed so that shard boundaries never depend on the thread count.
const SHARD: usize = 2048;

/// Trial count used when a caller does not choose one.
pub const DEFAULT_TRIALS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Binomial outage estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub trials: usize,
    /// `sqrt(p_hat (1 - p_hat) / trials)`.
    pub std_err: f64,
    pub seed: u64,
}

impl McEstimate {
    fn from_count(outages: usize, trials: usize, seed: u64) -> Self {
        let p_hat = outages as f64 / trials as f64;
        let std_err = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
        Self { p_hat, trials, std_err, seed }
    }
}

fn shards(trials: usize) -> impl IndexedParallelIterator<Item = std::ops::Range<usize>> {
    let n = trials.div_ceil(SHARD);
    (0..n).into_par_iter().map(move |s| s * SHARD..((s + 1) * SHARD).min(trials))
}

fn map_shards<T, F>(trials: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    match exec {
        Execution::Parallel => shards(trials).map(f).collect(),
        Execution::Serial => {
            let n = trials.div_ceil(SHARD);
            (0..n).map(|s| f(s * SHARD..((s + 1) * SHARD).min(trials))).collect()
        }
    }
}

/// Estimates `P(||(beta H_e + G_e diag(q) H) b||^2 >= phi_1)` from `trials` draws.
pub fn empirical_sop(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    phase: &PhaseVector,
    bf: &Beamformer,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    empirical_sop_with(cfg, ch, phase, bf, trials, seed, Execution::Parallel)
}

pub fn empirical_sop_with(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    phase: &PhaseVector,
    bf: &Beamformer,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::Domain("Monte Carlo needs at least one trial".into()));
    }
    let inputs = SopInputs::evaluate(cfg, ch, phase, bf)?;
    let phi = inputs.phi();
    if phi <= 0.0 {
        return Ok(McEstimate::from_count(trials, trials, seed));
    }
    let b = bf.b().clone();
    let u: DVector<C64> = (&ch.h_ris * &b).component_mul(phase.as_vector());
    let (n_e, n_t, n_s, beta) = (cfg.n_e, cfg.n_t, cfg.n_s, C64::from(cfg.beta));

    let counts = map_shards(trials, exec, |range| {
        range
            .filter(|&t| {
                let mut rng = stream_rng(seed, t as u64);
                let eve = EveChannels::sample(n_e, n_t, n_s, &mut rng);
                let y = &eve.h_e * &b * beta + &eve.g_e * &u;
                y.norm_squared() >= phi
            })
            .count()
    });
    Ok(McEstimate::from_count(counts.into_iter().sum(), trials, seed))
}

/// One draw of `x = ||beta a + C u||^2` with `a ~ CN(0, I_m)` and `C ~ CN(0, I_m ⊗ I_n)`.
fn draw_gain(beta: f64, m: usize, u: &DVector<C64>, rng: &mut crate::model::StreamRng) -> f64 {
    let n = u.len();
    let mut x = 0.0;
    for _ in 0..m {
        let mut y = complex_normal(rng) * beta;
        for j in 0..n {
            y += complex_normal(rng) * u[j];
        }
        x += y.norm_sqr();
    }
    x
}

/// `trials` independent wiretap-gain draws, in trial order.
pub fn gain_samples(beta: f64, m: usize, u: &DVector<C64>, trials: usize, seed: u64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(dim_err("gain needs m >= 1 receive antennas"));
    }
    let parts = map_shards(trials, Execution::Parallel, |range| {
        range
            .map(|t| draw_gain(beta, m, u, &mut stream_rng(seed, t as u64)))
            .collect::<Vec<_>>()
    });
    Ok(parts.concat())
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Welford) -> Welford {
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Welford { n, mean: self.mean + d * o.n / n, m2: self.m2 + o.m2 + d * d * self.n * o.n / n }
    }
}

/// Sample mean and unbiased sample variance of the wiretap gain.
pub fn empirical_gain_moments(beta: f64, m: usize, u: &DVector<C64>, trials: usize, seed: u64) -> Result<(f64, f64)> {
    if trials < 2 {
        return Err(Error::Domain("moment estimates need at least two trials".into()));
    }
    if m == 0 {
        return Err(dim_err("gain needs m >= 1 receive antennas"));
    }
    let parts = map_shards(trials, Execution::Parallel, |range| {
        let mut w = Welford::default();
        for t in range {
            w.push(draw_gain(beta, m, u, &mut stream_rng(seed, t as u64)));
        }
        w
    });
    let total = parts.into_iter().fold(Welford::default(), Welford::merge);
    Ok((total.mean, total.m2 / (total.n - 1.0)))
}

/// Kolmogorov–Smirnov sup-distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (((i + 1) as f64 / n) - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// KS distance between sampled wiretap gains and the closed-form gamma CDF.
pub fn empirical_cdf_distance(beta: f64, m: usize, u: &DVector<C64>, trials: usize, seed: u64) -> Result<f64> {
    if trials < 100 {
        return Err(Error::Domain("KS distance needs at least 100 trials".into()));
    }
    let shape = u32::try_from(m).map_err(|_| dim_err("m too large"))?;
    let u2 = u.norm_squared();
    GammaFit::new(beta, shape, u2)?;
    let mut xs = gain_samples(beta, m, u, trials, seed)?;
    Ok(ks_statistic(&mut xs, |x| gain_cdf(beta, shape, u2, x.max(0.0)).unwrap_or(0.0)))
}

/// Materialized eavesdropper realization for trial `t`; exposes the sampling order.
pub fn eve_realization(cfg: &SystemConfig, seed: u64, trial: u64) -> EveChannels {
    EveChannels::sample(cfg.n_e, cfg.n_t, cfg.n_s, &mut stream_rng(seed, trial))
}
