//! Ground-truth engines that share no code path with the determinant
//! formulas: exact matrix powers, uniformization for continuous chains,
//! and seeded Monte Carlo simulation.

mod simulate;
mod uniformization;

use num_traits::{One, Zero};

use crate::chain::{AbsorbingChain, DiscreteChain};
use crate::Rational;

pub use simulate::{simulate_continuous, simulate_discrete, McConfig, SimulationSummary};
pub use uniformization::{cdf_uniformization, laplace_uniformization, uniformized_chain};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("every exit rate is zero; uniformization is undefined")]
    AllRatesZero,
    #[error("start state {start} is not transient (d = {d})")]
    StartOutOfRange { start: usize, d: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("series did not reach tolerance within {0} steps")]
    NotConverged(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Pmf,
    Cdf,
    DensitySamples,
}

/// How a table's values were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    ExactSeries,
    MatrixPower,
    MonteCarlo,
    Uniformization,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Steps(Vec<u64>),
    Times(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableValues {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// Samples of a PMF, CDF or density, tagged with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTable {
    pub kind: TableKind,
    pub support: Support,
    pub values: TableValues,
    pub source: TableSource,
}

impl DistributionTable {
    /// PMF over `0..=n_max` from exact values.
    pub fn exact_pmf(values: Vec<Rational>, source: TableSource) -> Self {
        Self {
            kind: TableKind::Pmf,
            support: Support::Steps((0..values.len() as u64).collect()),
            values: TableValues::Exact(values),
            source,
        }
    }

    pub fn len(&self) -> usize {
        match &self.values {
            TableValues::Exact(v) => v.len(),
            TableValues::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exact_values(&self) -> Option<&[Rational]> {
        match &self.values {
            TableValues::Exact(v) => Some(v),
            TableValues::Float(_) => None,
        }
    }

    pub fn float_values(&self) -> Vec<f64> {
        match &self.values {
            TableValues::Exact(v) => v.iter().map(crate::algebra::Scalar::to_f64_lossy).collect(),
            TableValues::Float(v) => v.clone(),
        }
    }
}

/// Exact `P(tau = n)` for `n = 0..=n_max` by iterating the row vector
/// `e_start P^n` and differencing its absorbing coordinate.
pub fn pmf_matrix_power(
    chain: &DiscreteChain,
    start: usize,
    n_max: usize,
) -> Result<DistributionTable, OracleError> {
    let d = chain.d();
    if start >= d {
        return Err(OracleError::StartOutOfRange { start, d });
    }
    let p = chain.matrix();
    let mut dist = vec![Rational::zero(); d + 1];
    dist[start] = Rational::one();
    let mut absorbed = Rational::zero();
    let mut pmf = Vec::with_capacity(n_max + 1);
    pmf.push(Rational::zero());
    for _ in 0..n_max {
        let mut next = vec![Rational::zero(); d + 1];
        for (i, mass) in dist.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for (j, pij) in p[i].iter().enumerate() {
                if !pij.is_zero() {
                    next[j] += mass * pij;
                }
            }
        }
        pmf.push(&next[d] - &absorbed);
        absorbed = next[d].clone();
        dist = next;
    }
    Ok(DistributionTable::exact_pmf(pmf, TableSource::MatrixPower))
}
