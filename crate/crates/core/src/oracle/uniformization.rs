//! Uniformization: the continuous chain observed at the epochs of a Poisson
//! clock of rate `L = max gamma_i` is the discrete chain `P = I + Q / L`.
//! The absorption time is then `N` exponential(L) holding times, where `N`
//! is the discrete absorption time of `P`.

use num_traits::{One, Zero};

use super::{pmf_matrix_power, DistributionTable, OracleError, Support, TableKind, TableSource, TableValues};
use crate::algebra::Scalar;
use crate::chain::{AbsorbingChain, ContinuousChain, DiscreteChain};
use crate::Rational;

const MAX_ITERATIONS: usize = 10_000_000;

/// `(I + Q / L, L)` with `L` the largest exit rate.
pub fn uniformized_chain(chain: &ContinuousChain) -> Result<(DiscreteChain, Rational), OracleError> {
    let lambda = chain.max_rate();
    if lambda.is_zero() {
        return Err(OracleError::AllRatesZero);
    }
    let matrix = chain
        .matrix()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, q)| {
                    let base = if i == j { Rational::one() } else { Rational::zero() };
                    base + q / &lambda
                })
                .collect()
        })
        .collect();
    let p = DiscreteChain::new(matrix).expect("uniformized generator is stochastic");
    Ok((p, lambda))
}

/// Poisson(x) weights `w_0..=w_N`, with `N` the first index past the mode
/// at which the remaining tail is provably below `eps`.
fn poisson_weights(x: f64, eps: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut log_fact = 0.0f64;
    let ln_x = x.ln();
    for n in 0.. {
        if n > 0 {
            log_fact += (n as f64).ln();
        }
        let w = (-x + n as f64 * ln_x - log_fact).exp();
        out.push(w);
        // for n + 2 > x the terms after n+1 shrink geometrically by x/(n+2)
        let next = (-x + (n + 1) as f64 * ln_x - log_fact - ((n + 1) as f64).ln()).exp();
        let ratio = x / (n + 2) as f64;
        if ratio < 1.0 && next / (1.0 - ratio) < eps {
            break;
        }
    }
    out
}

fn check_eps(eps: f64) -> Result<(), OracleError> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(OracleError::InvalidConfig(format!("eps must be positive, got {eps}")))
    }
}

/// `F(t) = P(tau <= t)` at each grid time, with absolute truncation error
/// below `eps`. Inner discrete probabilities are exact; the Poisson mixture
/// is summed in double precision.
pub fn cdf_uniformization(
    chain: &ContinuousChain,
    start: usize,
    t_grid: &[f64],
    eps: f64,
) -> Result<DistributionTable, OracleError> {
    check_eps(eps)?;
    let d = chain.d();
    if start >= d {
        return Err(OracleError::StartOutOfRange { start, d });
    }
    if let Some(t) = t_grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(OracleError::InvalidConfig(format!("time must be finite and >= 0, got {t}")));
    }
    let (p, lambda) = uniformized_chain(chain)?;
    let rate = lambda.to_f64_lossy();
    let weights: Vec<Vec<f64>> = t_grid
        .iter()
        .map(|&t| if t == 0.0 { Vec::new() } else { poisson_weights(rate * t, eps) })
        .collect();
    let n_max = weights.iter().map(Vec::len).max().unwrap_or(0);
    let pmf = pmf_matrix_power(&p, start, n_max)?;
    let mut acc = Rational::zero();
    let cumulative: Vec<f64> = pmf
        .exact_values()
        .expect("matrix power is exact")
        .iter()
        .map(|x| {
            acc += x;
            acc.to_f64_lossy()
        })
        .collect();
    let values = weights
        .iter()
        .map(|w| w.iter().zip(&cumulative).fold(0.0, |acc, (a, b)| acc + a * b))
        .collect();
    Ok(DistributionTable {
        kind: TableKind::Cdf,
        support: Support::Times(t_grid.to_vec()),
        values: TableValues::Float(values),
        source: TableSource::Uniformization,
    })
}

/// `E exp(-s tau) = sum_n P(N = n) (L / (L + s))^n`, the Laplace-Stieltjes
/// integral of the uniformized CDF taken term by term. The sum stops once
/// the probability still able to reach `d`, times the next power of the
/// ratio, is below `eps`.
pub fn laplace_uniformization(
    chain: &ContinuousChain,
    start: usize,
    s: f64,
    eps: f64,
) -> Result<f64, OracleError> {
    check_eps(eps)?;
    let d = chain.d();
    if start >= d {
        return Err(OracleError::StartOutOfRange { start, d });
    }
    if !(s.is_finite() && s >= 0.0) {
        return Err(OracleError::InvalidConfig(format!("s must be finite and >= 0, got {s}")));
    }
    let (p, lambda) = uniformized_chain(chain)?;
    let rate = lambda.to_f64_lossy();
    let z = rate / (rate + s);
    let pf: Vec<Vec<f64>> = p
        .matrix()
        .iter()
        .map(|row| row.iter().map(Scalar::to_f64_lossy).collect())
        .collect();
    let live: Vec<usize> = (0..d).filter(|&i| chain.reaches_absorbing(i)).collect();
    if !chain.reaches_absorbing(start) {
        return Ok(0.0);
    }
    let mut dist = vec![0.0f64; d + 1];
    dist[start] = 1.0;
    let mut total = 0.0f64;
    let mut power = 1.0f64;
    for _ in 0..MAX_ITERATIONS {
        let mut next = vec![0.0f64; d + 1];
        for i in 0..d {
            let mass = dist[i];
            if mass == 0.0 {
                continue;
            }
            for (j, pij) in pf[i].iter().enumerate() {
                next[j] += mass * pij;
            }
        }
        power *= z;
        total += next[d] * power;
        next[d] = 0.0;
        dist = next;
        let remaining: f64 = live.iter().map(|&i| dist[i]).sum();
        if remaining * power * z < eps {
            return Ok(total);
        }
    }
    Err(OracleError::NotConverged(MAX_ITERATIONS))
}
