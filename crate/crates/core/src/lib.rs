//! Exact absorption-time distributions for finite Markov chains with a
//! single absorbing state.
//!
//! For a discrete chain with transition matrix `P` on states `0..=d`
//! (state `d` absorbing) the generating function of the absorption time
//! from state `i` is a ratio of two determinants of submatrices of
//! `I - sP`; the continuous-time analogue uses `sI - Q`. This crate builds
//! those rational functions exactly, extracts probability mass functions
//! and moments from them, decomposes skip-free chains into sums of
//! geometric or exponential variables, and ships independent oracles
//! (matrix powers, uniformization, Monte Carlo) that check every result.

pub mod algebra;
pub mod chain;
pub mod cli;
pub mod hitting;
pub mod oracle;
pub mod spectral;

use num_rational::BigRational;

/// Exact scalar used throughout the engine.
pub type Rational = BigRational;
/// Polynomial with exact rational coefficients.
pub type RatPoly = algebra::Polynomial<Rational>;
/// Rational function with exact rational coefficients.
pub type RatFunc = algebra::RationalFunction<Rational>;
/// Double-precision polynomial.
pub type PolyF64 = algebra::Polynomial<f64>;
/// Double-precision rational function.
pub type RatFuncF64 = algebra::RationalFunction<f64>;

pub use chain::{AbsorbingChain, Chain, ChainError, ChainKind, ContinuousChain, DiscreteChain};
pub use hitting::{HittingError, HittingTimeTransform, TransformKind};
pub use oracle::{DistributionTable, McConfig, OracleError};
pub use spectral::{SkipFreeDecomposition, SpectralError, SpectrumReport};
