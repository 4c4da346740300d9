//! Seeded corpus generators shared by the integration tests.

#![allow(dead_code)]

use absorption::{ContinuousChain, DiscreteChain, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen(ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.0.next_u64() % (hi - lo + 1)
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.int(0, den - 1) < num
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn absorbing_row(d: usize, value: Rational) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); d + 1];
    row[d] = value;
    row
}

/// Row of `d + 1` probabilities from integer weights; at least one weight
/// is positive and the absorbing weight is positive with probability 1/2.
fn weight_row(g: &mut Gen, d: usize, max_weight: u64) -> Vec<Rational> {
    loop {
        let weights: Vec<u64> = (0..=d)
            .map(|_| if g.chance(1, 4) { 0 } else { g.int(1, max_weight) })
            .collect();
        let total: u64 = weights.iter().sum();
        if total > 0 {
            return weights
                .iter()
                .map(|&w| rat(w as i64, total as i64))
                .collect();
        }
    }
}

/// Random discrete chain with `d` transient states and rational entries.
pub fn random_discrete(g: &mut Gen, d: usize) -> DiscreteChain {
    let mut m: Vec<Vec<Rational>> = (0..d).map(|_| weight_row(g, d, 9)).collect();
    m.push(absorbing_row(d, Rational::one()));
    DiscreteChain::new(m).expect("generated rows are stochastic")
}

/// Random generator with `d` transient states, off-diagonal rates `a/b`
/// and a positive exit rate in every transient row.
pub fn random_continuous(g: &mut Gen, d: usize) -> ContinuousChain {
    let mut m: Vec<Vec<Rational>> = Vec::new();
    for i in 0..d {
        let mut row = vec![Rational::zero(); d + 1];
        let mut total = Rational::zero();
        while total.is_zero() {
            for (j, cell) in row.iter_mut().enumerate() {
                if j != i && !g.chance(1, 3) {
                    *cell = rat(g.int(1, 6) as i64, g.int(1, 4) as i64);
                    total += cell.clone();
                }
            }
        }
        row[i] = -total;
        m.push(row);
    }
    m.push(vec![Rational::zero(); d + 1]);
    ContinuousChain::new(m).expect("generated rows sum to zero")
}

/// Lazy birth-death chain: holding probability at least 1/2 keeps the
/// transient spectrum real and nonnegative.
pub fn lazy_birth_death(g: &mut Gen, d: usize) -> DiscreteChain {
    let mut m = vec![vec![Rational::zero(); d + 1]; d + 1];
    for i in 0..d {
        let hold = rat(g.int(10, 18) as i64, 20);
        let move_mass = Rational::one() - &hold;
        let up = if i == 0 {
            move_mass.clone()
        } else {
            &move_mass * rat(g.int(1, 9) as i64, 10)
        };
        m[i][i] = hold;
        m[i][i + 1] = up.clone();
        if i > 0 {
            m[i][i - 1] = move_mass - up;
        }
    }
    m[d][d] = Rational::one();
    DiscreteChain::new(m).expect("generated rows are stochastic")
}

/// Continuous birth-death generator with positive birth and death rates;
/// the transient block is then similar to a symmetric irreducible
/// tridiagonal matrix, so its eigenvalues are real and distinct.
pub fn continuous_birth_death(g: &mut Gen, d: usize) -> ContinuousChain {
    let mut m = vec![vec![Rational::zero(); d + 1]; d + 1];
    for i in 0..d {
        let birth = rat(g.int(1, 8) as i64, g.int(1, 2) as i64);
        let death = if i == 0 {
            Rational::zero()
        } else {
            rat(g.int(1, 6) as i64, g.int(1, 2) as i64)
        };
        m[i][i + 1] = birth.clone();
        if i > 0 {
            m[i][i - 1] = death.clone();
        }
        m[i][i] = -(birth + death);
    }
    ContinuousChain::new(m).expect("generated rows sum to zero")
}

/// Dense-as-possible chain whose entries have denominators dividing 10:
/// each transient row spreads ten tenths over the columns.
pub fn tenths_chain(g: &mut Gen, d: usize) -> DiscreteChain {
    let mut m = Vec::new();
    for _ in 0..d {
        let mut counts = vec![0i64; d + 1];
        counts[d] = 1;
        let mut placed = 1;
        while placed < 10 {
            let j = g.int(0, d as u64) as usize;
            if counts[j] == 0 || g.chance(1, 4) {
                counts[j] += 1;
                placed += 1;
            }
        }
        m.push(counts.iter().map(|&c| rat(c, 10)).collect());
    }
    m.push(absorbing_row(d, Rational::one()));
    DiscreteChain::new(m).expect("tenths sum to one")
}
