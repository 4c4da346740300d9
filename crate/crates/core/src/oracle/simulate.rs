//! Seeded trajectory simulation.
//!
//! Random stream layout (fixed; golden outputs depend on it):
//!
//! * generator: ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`);
//! * key: the 64-bit seed in little-endian order in bytes 0..8, zeros elsewhere;
//! * trajectory `k` (0-based) reads stream id `k` from word position 0;
//! * a uniform variate is `(next_u64 >> 11) * 2^-53`, in `[0, 1)`.
//!
//! Trajectories are grouped in fixed chunks of [`CHUNK`] and the per-chunk
//! statistics are merged in chunk order, so results do not depend on the
//! number of worker threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::OracleError;
use crate::algebra::Scalar;
use crate::chain::{AbsorbingChain, ContinuousChain, DiscreteChain};
use crate::Rational;

/// Trajectories per aggregation chunk.
pub const CHUNK: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Censoring horizon: steps (discrete) or jumps (continuous) per trajectory.
    pub max_steps: u64,
}

impl McConfig {
    pub const DEFAULT_MAX_STEPS: u64 = 100_000;

    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            max_steps: Self::DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    fn validate(&self) -> Result<(), OracleError> {
        if self.samples == 0 {
            return Err(OracleError::InvalidConfig("samples must be at least 1".into()));
        }
        if self.max_steps == 0 {
            return Err(OracleError::InvalidConfig("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Statistics over the uncensored trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub samples: u64,
    pub absorbed: u64,
    pub censored: u64,
    pub mean: f64,
    /// Unbiased sample variance (zero with fewer than two absorbed samples).
    pub variance: f64,
    /// Discrete only: `empirical_pmf[n]` counts trajectories absorbed at step `n`.
    pub empirical_pmf: Vec<u64>,
}

impl SimulationSummary {
    pub fn censored_fraction(&self) -> f64 {
        self.censored as f64 / self.samples as f64
    }

    /// Standard error of the mean for a known standard deviation.
    pub fn standard_error(&self, sd: f64) -> f64 {
        sd / (self.absorbed as f64).sqrt()
    }
}

fn base_rng(seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn trajectory_rng(base: &ChaCha8Rng, index: u64) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_stream(index);
    rng.set_word_pos(0);
    rng
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Cumulative distribution over the targets with nonzero weight, computed
/// exactly then rounded.
struct JumpTable {
    cumulative: Vec<f64>,
    targets: Vec<usize>,
}

impl JumpTable {
    fn new(weights: impl Iterator<Item = (usize, Rational)>, total: &Rational) -> Self {
        let mut acc = Rational::from_integer(0.into());
        let mut cumulative = Vec::new();
        let mut targets = Vec::new();
        for (j, w) in weights {
            if num_traits::Zero::is_zero(&w) {
                continue;
            }
            acc += w / total;
            cumulative.push(acc.to_f64_lossy());
            targets.push(j);
        }
        Self { cumulative, targets }
    }

    fn sample(&self, u: f64) -> usize {
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.targets[k.min(self.targets.len() - 1)]
    }
}

fn chunk_ranges(samples: u64) -> Vec<(u64, u64)> {
    (0..samples.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(samples)))
        .collect()
}

fn check_start(chain: &impl AbsorbingChain, start: usize) -> Result<(), OracleError> {
    let d = chain.d();
    if start >= d {
        return Err(OracleError::StartOutOfRange { start, d });
    }
    Ok(())
}

struct DiscreteChunk {
    absorbed: u64,
    sum: u128,
    sum_sq: u128,
    counts: Vec<u64>,
}

/// Simulates the discrete chain from `start`, `cfg.samples` times.
pub fn simulate_discrete(
    chain: &DiscreteChain,
    start: usize,
    cfg: &McConfig,
) -> Result<SimulationSummary, OracleError> {
    cfg.validate()?;
    check_start(chain, start)?;
    let d = chain.d();
    let one = Rational::from_integer(1.into());
    let tables: Vec<JumpTable> = chain
        .matrix()
        .iter()
        .map(|row| JumpTable::new(row.iter().cloned().enumerate(), &one))
        .collect();
    let base = base_rng(cfg.seed);

    let chunks: Vec<DiscreteChunk> = chunk_ranges(cfg.samples)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut out = DiscreteChunk {
                absorbed: 0,
                sum: 0,
                sum_sq: 0,
                counts: Vec::new(),
            };
            for k in lo..hi {
                let mut rng = trajectory_rng(&base, k);
                let mut state = start;
                let mut steps = 0u64;
                while state != d && steps < cfg.max_steps {
                    state = tables[state].sample(uniform(&mut rng));
                    steps += 1;
                }
                if state == d {
                    out.absorbed += 1;
                    out.sum += steps as u128;
                    out.sum_sq += (steps as u128) * (steps as u128);
                    let n = steps as usize;
                    if out.counts.len() <= n {
                        out.counts.resize(n + 1, 0);
                    }
                    out.counts[n] += 1;
                }
            }
            out
        })
        .collect();

    let mut absorbed = 0u64;
    let mut sum = 0u128;
    let mut sum_sq = 0u128;
    let mut counts: Vec<u64> = Vec::new();
    for c in chunks {
        absorbed += c.absorbed;
        sum += c.sum;
        sum_sq += c.sum_sq;
        if counts.len() < c.counts.len() {
            counts.resize(c.counts.len(), 0);
        }
        for (n, k) in c.counts.into_iter().enumerate() {
            counts[n] += k;
        }
    }
    let n = absorbed as f64;
    let mean = if absorbed > 0 { sum as f64 / n } else { 0.0 };
    let variance = if absorbed > 1 {
        let a = absorbed as u128;
        (a * sum_sq - sum * sum) as f64 / (n * (n - 1.0))
    } else {
        0.0
    };
    Ok(SimulationSummary {
        samples: cfg.samples,
        absorbed,
        censored: cfg.samples - absorbed,
        mean,
        variance,
        empirical_pmf: counts,
    })
}

/// Count, mean and centred sum of squares; merged with Chan's update.
#[derive(Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }
}

/// Simulates the continuous chain: hold an Exponential(gamma_i) time in
/// state `i`, then jump to `j` with probability `Q[i][j] / gamma_i`.
/// States with `gamma_i = 0` are traps and censor the trajectory.
pub fn simulate_continuous(
    chain: &ContinuousChain,
    start: usize,
    cfg: &McConfig,
) -> Result<SimulationSummary, OracleError> {
    cfg.validate()?;
    check_start(chain, start)?;
    let d = chain.d();
    let rates: Vec<f64> = (0..=d).map(|i| chain.rate(i).to_f64_lossy()).collect();
    let tables: Vec<JumpTable> = (0..=d)
        .map(|i| {
            let gamma = chain.rate(i);
            let row = chain.matrix()[i]
                .iter()
                .cloned()
                .enumerate()
                .filter(move |&(j, _)| j != i);
            if num_traits::Zero::is_zero(&gamma) {
                JumpTable {
                    cumulative: Vec::new(),
                    targets: Vec::new(),
                }
            } else {
                JumpTable::new(row, &gamma)
            }
        })
        .collect();
    let base = base_rng(cfg.seed);

    let chunks: Vec<Moments> = chunk_ranges(cfg.samples)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut m = Moments::default();
            for k in lo..hi {
                let mut rng = trajectory_rng(&base, k);
                let mut state = start;
                let mut jumps = 0u64;
                let mut time = 0.0f64;
                while state != d && jumps < cfg.max_steps && rates[state] > 0.0 {
                    let u = uniform(&mut rng);
                    time += -(-u).ln_1p() / rates[state];
                    state = tables[state].sample(uniform(&mut rng));
                    jumps += 1;
                }
                if state == d {
                    m.push(time);
                }
            }
            m
        })
        .collect();

    let total = chunks.into_iter().fold(Moments::default(), Moments::merge);
    Ok(SimulationSummary {
        samples: cfg.samples,
        absorbed: total.n,
        censored: cfg.samples - total.n,
        mean: if total.n > 0 { total.mean } else { 0.0 },
        variance: if total.n > 1 {
            total.m2 / (total.n - 1) as f64
        } else {
            0.0
        },
        empirical_pmf: Vec::new(),
    })
}
