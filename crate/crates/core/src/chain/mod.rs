//! Validated absorbing chains.
//!
//! States are `0..=d`; state `d` is the single absorbing state. Matrices are
//! row-major `Vec<Vec<Rational>>` of size `(d+1) x (d+1)`.

mod file;

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};

use crate::Rational;

pub use file::{format_rational, parse_chain_file, parse_rational, to_chain_file};

/// Row-major square matrix of exact rationals.
pub type Matrix = Vec<Vec<Rational>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("chain needs at least one transient state (d >= 1)")]
    TooSmall,
    #[error("row {row} sums to {sum}, expected {expected}")]
    RowSum {
        row: usize,
        sum: String,
        expected: &'static str,
    },
    #[error("entry ({row}, {col}) is negative: {value}")]
    NegativeEntry {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("last row must be {0} (state d absorbing)")]
    AbsorbingRow(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    Discrete,
    Continuous,
}

impl ChainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ChainKind::Discrete => "discrete",
            ChainKind::Continuous => "continuous",
        }
    }
}

/// Read access shared by both chain flavours.
pub trait AbsorbingChain {
    fn kind(&self) -> ChainKind;

    fn matrix(&self) -> &Matrix;

    /// Whether the absorbing state is reachable from `state`.
    fn reaches_absorbing(&self, state: usize) -> bool;

    /// Index of the absorbing state (number of transient states).
    fn d(&self) -> usize {
        self.matrix().len() - 1
    }

    fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.matrix()[row][col]
    }

    /// Transient states from which `d` cannot be reached.
    fn unreachable_states(&self) -> Vec<usize> {
        (0..self.d()).filter(|&i| !self.reaches_absorbing(i)).collect()
    }
}

fn check_square(matrix: &Matrix) -> Result<usize, ChainError> {
    let n = matrix.len();
    if n == 0 {
        return Err(ChainError::Shape("matrix is empty".into()));
    }
    if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(ChainError::Shape(format!(
            "row {i} has {} entries, expected {n}",
            row.len()
        )));
    }
    if n < 2 {
        return Err(ChainError::TooSmall);
    }
    Ok(n - 1)
}

/// Backward breadth-first search from `d` over the off-diagonal support.
fn reachability(matrix: &Matrix) -> Vec<bool> {
    let n = matrix.len();
    let d = n - 1;
    let mut reaches = vec![false; n];
    reaches[d] = true;
    let mut queue = VecDeque::from([d]);
    while let Some(target) = queue.pop_front() {
        for source in 0..n {
            if !reaches[source] && source != target && !matrix[source][target].is_zero() {
                reaches[source] = true;
                queue.push_back(source);
            }
        }
    }
    reaches
}

/// Discrete-time chain: stochastic matrix `P` with absorbing last row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteChain {
    matrix: Matrix,
    reaches: Vec<bool>,
}

impl DiscreteChain {
    /// Validates a transition matrix. Chains in which some state cannot
    /// reach `d` are accepted; see [`AbsorbingChain::unreachable_states`].
    pub fn new(matrix: Matrix) -> Result<Self, ChainError> {
        let d = check_square(&matrix)?;
        for (i, row) in matrix.iter().enumerate() {
            if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| v.is_negative()) {
                return Err(ChainError::NegativeEntry {
                    row: i,
                    col: j,
                    value: format_rational(v),
                });
            }
            if i == d {
                continue;
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(ChainError::RowSum {
                    row: i,
                    sum: format_rational(&sum),
                    expected: "1",
                });
            }
        }
        let last = &matrix[d];
        if !last[d].is_one() || last[..d].iter().any(|v| !v.is_zero()) {
            return Err(ChainError::AbsorbingRow("the unit vector e_d"));
        }
        let reaches = reachability(&matrix);
        Ok(Self { matrix, reaches })
    }
}

impl AbsorbingChain for DiscreteChain {
    fn kind(&self) -> ChainKind {
        ChainKind::Discrete
    }

    fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    fn reaches_absorbing(&self, state: usize) -> bool {
        self.reaches[state]
    }
}

/// Continuous-time chain: generator `Q` with zero last row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuousChain {
    matrix: Matrix,
    reaches: Vec<bool>,
}

impl ContinuousChain {
    pub fn new(matrix: Matrix) -> Result<Self, ChainError> {
        let d = check_square(&matrix)?;
        for (i, row) in matrix.iter().enumerate() {
            if let Some((j, v)) = row
                .iter()
                .enumerate()
                .find(|&(j, v)| j != i && v.is_negative())
            {
                return Err(ChainError::NegativeEntry {
                    row: i,
                    col: j,
                    value: format_rational(v),
                });
            }
            if i == d {
                continue;
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_zero() {
                return Err(ChainError::RowSum {
                    row: i,
                    sum: format_rational(&sum),
                    expected: "0",
                });
            }
        }
        if matrix[d].iter().any(|v| !v.is_zero()) {
            return Err(ChainError::AbsorbingRow("all zeros"));
        }
        let reaches = reachability(&matrix);
        Ok(Self { matrix, reaches })
    }

    /// Total exit rate `gamma_i = -Q[i][i]`.
    pub fn rate(&self, state: usize) -> Rational {
        -self.matrix[state][state].clone()
    }

    /// Largest exit rate over all states.
    pub fn max_rate(&self) -> Rational {
        (0..self.d())
            .map(|i| self.rate(i))
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl AbsorbingChain for ContinuousChain {
    fn kind(&self) -> ChainKind {
        ChainKind::Continuous
    }

    fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    fn reaches_absorbing(&self, state: usize) -> bool {
        self.reaches[state]
    }
}

/// Either chain flavour, as read from a chain file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chain {
    Discrete(DiscreteChain),
    Continuous(ContinuousChain),
}

impl Chain {
    pub fn from_matrix(kind: ChainKind, matrix: Matrix) -> Result<Self, ChainError> {
        match kind {
            ChainKind::Discrete => DiscreteChain::new(matrix).map(Chain::Discrete),
            ChainKind::Continuous => ContinuousChain::new(matrix).map(Chain::Continuous),
        }
    }

    fn inner(&self) -> &dyn AbsorbingChain {
        match self {
            Chain::Discrete(c) => c,
            Chain::Continuous(c) => c,
        }
    }
}

impl AbsorbingChain for Chain {
    fn kind(&self) -> ChainKind {
        self.inner().kind()
    }

    fn matrix(&self) -> &Matrix {
        self.inner().matrix()
    }

    fn reaches_absorbing(&self, state: usize) -> bool {
        self.inner().reaches_absorbing(state)
    }
}

impl From<DiscreteChain> for Chain {
    fn from(c: DiscreteChain) -> Self {
        Chain::Discrete(c)
    }
}

impl From<ContinuousChain> for Chain {
    fn from(c: ContinuousChain) -> Self {
        Chain::Continuous(c)
    }
}
