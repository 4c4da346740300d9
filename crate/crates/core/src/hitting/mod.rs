//! Absorption-time transforms as determinant ratios.
//!
//! For a discrete chain, let `A_j(s)` be `I - sP` with its last row and its
//! `j`-th column (1-based) removed. Then the generating function of the
//! absorption time from transient state `i` is
//!
//! ```text
//! f_i(s) = (-1)^(d-i) det A_{i+1}(s) / det A_{d+1}(s)
//! ```
//!
//! which is Cramer's rule applied to the first-step equations. The
//! continuous version uses `sI - Q` in place of `I - sP` and yields the
//! Laplace transform `E exp(-s tau)`.

mod density;
mod moments;
mod residual;

use num_traits::{One, Zero};

use crate::algebra::{poly_det_affine, AlgebraError, Polynomial};
use crate::chain::{AbsorbingChain, ChainKind, ContinuousChain, DiscreteChain};
use crate::oracle::{DistributionTable, TableSource};
use crate::{RatFunc, RatPoly, Rational};

pub use density::{density_partial_fractions, ExponentialTerm, PartialFractionDensity};
pub use moments::{mean, moment, variance};
pub use residual::{first_step_residual, residuals_vanish};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HittingError {
    #[error("start state {start} is not transient (d = {d})")]
    StartOutOfRange { start: usize, d: usize },
    #[error("column index {j} outside 1..={max}")]
    ColumnOutOfRange { j: usize, max: usize },
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("expected one transform per transient state ({expected}), got {got}")]
    TransformCount { expected: usize, got: usize },
    #[error("defective distribution: absorption probability is {0}, not 1")]
    DefectiveDistribution(String),
    #[error("moment order {0} unsupported (1..=4)")]
    MomentOrder(usize),
    #[error("transform has a repeated pole near {0}")]
    RepeatedPole(f64),
    #[error("transform has a complex pole {re} + {im}i")]
    ComplexPole { re: f64, im: f64 },
    #[error("transform is not strictly proper")]
    ImproperTransform,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    /// `E s^tau`, discrete time.
    GeneratingFunction,
    /// `E exp(-s tau)`, continuous time.
    LaplaceTransform,
}

impl TransformKind {
    pub fn for_chain(kind: ChainKind) -> Self {
        match kind {
            ChainKind::Discrete => TransformKind::GeneratingFunction,
            ChainKind::Continuous => TransformKind::LaplaceTransform,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::GeneratingFunction => "generating_function",
            TransformKind::LaplaceTransform => "laplace_transform",
        }
    }
}

/// Transform of the absorption time from one start state.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingTimeTransform {
    pub start: usize,
    pub kind: TransformKind,
    pub func: RatFunc,
    /// `func(1)` for generating functions, `func(0)` for Laplace transforms.
    pub absorption_probability: Rational,
}

impl HittingTimeTransform {
    fn new(start: usize, kind: TransformKind, func: RatFunc) -> Result<Self, HittingError> {
        let at = match kind {
            TransformKind::GeneratingFunction => Rational::one(),
            TransformKind::LaplaceTransform => Rational::zero(),
        };
        let absorption_probability = func.eval(&at)?;
        Ok(Self {
            start,
            kind,
            func,
            absorption_probability,
        })
    }

    pub fn is_certain(&self) -> bool {
        self.absorption_probability.is_one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubmatrixBase {
    /// `I - sP`
    IMinusSP,
    /// `sI - Q`
    SIMinusQ,
}

/// Which submatrix to build: the base matrix without its last row and
/// without column `j` (1-based, `1..=d+1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubmatrixSpec {
    pub j: usize,
    pub base: SubmatrixBase,
}

impl SubmatrixSpec {
    pub fn for_chain(chain: &impl AbsorbingChain, j: usize) -> Self {
        let base = match chain.kind() {
            ChainKind::Discrete => SubmatrixBase::IMinusSP,
            ChainKind::Continuous => SubmatrixBase::SIMinusQ,
        };
        Self { j, base }
    }
}

/// The full `(d+1) x (d+1)` affine matrix `I - sP` or `sI - Q`.
pub fn base_matrix(chain: &impl AbsorbingChain) -> Vec<Vec<RatPoly>> {
    let m = chain.matrix();
    let kind = chain.kind();
    m.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    let delta = if i == j { Rational::one() } else { Rational::zero() };
                    match kind {
                        ChainKind::Discrete => Polynomial::linear(delta, -x.clone()),
                        ChainKind::Continuous => Polynomial::linear(-x.clone(), delta),
                    }
                })
                .collect()
        })
        .collect()
}

pub fn build_submatrix(
    chain: &impl AbsorbingChain,
    spec: SubmatrixSpec,
) -> Result<Vec<Vec<RatPoly>>, HittingError> {
    let d = chain.d();
    if spec.j == 0 || spec.j > d + 1 {
        return Err(HittingError::ColumnOutOfRange { j: spec.j, max: d + 1 });
    }
    if spec != SubmatrixSpec::for_chain(chain, spec.j) {
        return Err(HittingError::KindMismatch(format!(
            "{:?} requested for a {} chain",
            spec.base,
            chain.kind().as_str()
        )));
    }
    let mut rows = base_matrix(chain);
    rows.truncate(d);
    for row in rows.iter_mut() {
        row.remove(spec.j - 1);
    }
    Ok(rows)
}

fn submatrix_det(chain: &impl AbsorbingChain, j: usize) -> RatPoly {
    let m = build_submatrix(chain, SubmatrixSpec::for_chain(chain, j)).expect("index in range");
    poly_det_affine(&m)
}

/// `det A_{d+1}(s)` (discrete) or `det Ã_{d+1}(s)` (continuous): the
/// determinant of the transient block of the base matrix.
pub fn transient_determinant(chain: &impl AbsorbingChain) -> RatPoly {
    submatrix_det(chain, chain.d() + 1)
}

fn transform_with(
    chain: &impl AbsorbingChain,
    start: usize,
    denominator: &RatPoly,
) -> Result<HittingTimeTransform, HittingError> {
    let d = chain.d();
    if start >= d {
        return Err(HittingError::StartOutOfRange { start, d });
    }
    let mut numerator = submatrix_det(chain, start + 1);
    if (d - start) % 2 == 1 {
        numerator = -numerator;
    }
    let func = RatFunc::new(numerator, denominator.clone())?;
    HittingTimeTransform::new(start, TransformKind::for_chain(chain.kind()), func)
}

/// Generating function `E s^tau` from `start`.
pub fn hitting_gf_discrete(
    chain: &DiscreteChain,
    start: usize,
) -> Result<HittingTimeTransform, HittingError> {
    transform_with(chain, start, &transient_determinant(chain))
}

/// Laplace transform `E exp(-s tau)` from `start`.
pub fn hitting_lt_continuous(
    chain: &ContinuousChain,
    start: usize,
) -> Result<HittingTimeTransform, HittingError> {
    transform_with(chain, start, &transient_determinant(chain))
}

/// Transform of either kind, matching the chain.
pub fn hitting_transform(
    chain: &impl AbsorbingChain,
    start: usize,
) -> Result<HittingTimeTransform, HittingError> {
    transform_with(chain, start, &transient_determinant(chain))
}

/// Transforms for every transient state, sharing the denominator determinant.
pub fn all_hitting_transforms(chain: &impl AbsorbingChain) -> Vec<HittingTimeTransform> {
    let den = transient_determinant(chain);
    (0..chain.d())
        .map(|i| transform_with(chain, i, &den).expect("denominator has unit constant term"))
        .collect()
}

/// Exact `P(tau = n)` for `n = 0..=n_max` from the generating function's series.
pub fn pmf(
    transform: &HittingTimeTransform,
    n_max: usize,
) -> Result<DistributionTable, HittingError> {
    if transform.kind != TransformKind::GeneratingFunction {
        return Err(HittingError::KindMismatch(
            "a probability mass function needs a generating function".into(),
        ));
    }
    let coeffs = transform.func.series_coefficients(n_max)?;
    Ok(DistributionTable::exact_pmf(coeffs, TableSource::ExactSeries))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::chain::tests::{mat, q};

    fn poly(c: &[(i64, i64)]) -> RatPoly {
        Polynomial::new(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    fn rf(num: &[(i64, i64)], den: &[(i64, i64)]) -> RatFunc {
        RatFunc::new(poly(num), poly(den)).unwrap()
    }

    pub(crate) fn tc1() -> DiscreteChain {
        DiscreteChain::new(mat(&[&[(1, 3), (2, 3)], &[(0, 1), (1, 1)]])).unwrap()
    }

    pub(crate) fn ladder() -> DiscreteChain {
        DiscreteChain::new(mat(&[
            &[(0, 1), (1, 1), (0, 1)],
            &[(0, 1), (0, 1), (1, 1)],
            &[(0, 1), (0, 1), (1, 1)],
        ]))
        .unwrap()
    }

    pub(crate) fn tc3() -> DiscreteChain {
        DiscreteChain::new(mat(&[
            &[(1, 2), (1, 2), (0, 1)],
            &[(1, 4), (1, 4), (1, 2)],
            &[(0, 1), (0, 1), (1, 1)],
        ]))
        .unwrap()
    }

    pub(crate) fn tc4() -> DiscreteChain {
        DiscreteChain::new(mat(&[
            &[(0, 1), (1, 2), (1, 2)],
            &[(1, 2), (0, 1), (1, 2)],
            &[(0, 1), (0, 1), (1, 1)],
        ]))
        .unwrap()
    }

    pub(crate) fn exp2() -> ContinuousChain {
        ContinuousChain::new(mat(&[&[(-2, 1), (2, 1)], &[(0, 1), (0, 1)]])).unwrap()
    }

    pub(crate) fn ladder12() -> ContinuousChain {
        ContinuousChain::new(mat(&[
            &[(-1, 1), (1, 1), (0, 1)],
            &[(0, 1), (-2, 1), (2, 1)],
            &[(0, 1), (0, 1), (0, 1)],
        ]))
        .unwrap()
    }

    #[test]
    fn submatrices_of_smallest_chains() {
        let c = tc1();
        let a2 = build_submatrix(&c, SubmatrixSpec::for_chain(&c, 2)).unwrap();
        assert_eq!(a2, vec![vec![poly(&[(1, 1), (-1, 3)])]]);
        let a1 = build_submatrix(&c, SubmatrixSpec::for_chain(&c, 1)).unwrap();
        assert_eq!(a1, vec![vec![poly(&[(0, 1), (-2, 3)])]]);

        let e = exp2();
        let b2 = build_submatrix(&e, SubmatrixSpec::for_chain(&e, 2)).unwrap();
        assert_eq!(b2, vec![vec![poly(&[(2, 1), (1, 1)])]]);
    }

    #[test]
    fn submatrix_errors() {
        let c = tc1();
        assert!(matches!(
            build_submatrix(&c, SubmatrixSpec::for_chain(&c, 3)),
            Err(HittingError::ColumnOutOfRange { .. })
        ));
        assert!(matches!(
            build_submatrix(&c, SubmatrixSpec::for_chain(&c, 0)),
            Err(HittingError::ColumnOutOfRange { .. })
        ));
        let wrong = SubmatrixSpec {
            j: 1,
            base: SubmatrixBase::SIMinusQ,
        };
        assert!(matches!(
            build_submatrix(&c, wrong),
            Err(HittingError::KindMismatch(_))
        ));
    }

    #[test]
    fn discrete_transforms() {
        let t = hitting_gf_discrete(&tc1(), 0).unwrap();
        assert_eq!(t.func, rf(&[(0, 1), (2, 3)], &[(1, 1), (-1, 3)]));
        assert_eq!(t.absorption_probability, q(1, 1));
        assert_eq!(t.kind, TransformKind::GeneratingFunction);

        let t = hitting_gf_discrete(&ladder(), 0).unwrap();
        assert_eq!(t.func, rf(&[(0, 1), (0, 1), (1, 1)], &[(1, 1)]));

        // s / (2 - s)
        let t = hitting_gf_discrete(&tc4(), 0).unwrap();
        assert_eq!(t.func, rf(&[(0, 1), (1, 1)], &[(2, 1), (-1, 1)]));

        assert!(matches!(
            hitting_gf_discrete(&tc1(), 1),
            Err(HittingError::StartOutOfRange { .. })
        ));
    }

    #[test]
    fn continuous_transforms() {
        let t = hitting_lt_continuous(&exp2(), 0).unwrap();
        assert_eq!(t.func, rf(&[(2, 1)], &[(2, 1), (1, 1)]));
        assert_eq!(t.absorption_probability, q(1, 1));

        // 2 / ((s+1)(s+2))
        let t = hitting_lt_continuous(&ladder12(), 0).unwrap();
        assert_eq!(t.func, rf(&[(2, 1)], &[(2, 1), (3, 1), (1, 1)]));
        let t = hitting_lt_continuous(&ladder12(), 1).unwrap();
        assert_eq!(t.func, rf(&[(2, 1)], &[(2, 1), (1, 1)]));
    }

    #[test]
    fn reducible_chain_gives_zero_transform() {
        let c = DiscreteChain::new(mat(&[
            &[(1, 1), (0, 1), (0, 1)],
            &[(0, 1), (1, 2), (1, 2)],
            &[(0, 1), (0, 1), (1, 1)],
        ]))
        .unwrap();
        let ts = all_hitting_transforms(&c);
        assert!(ts[0].func.is_zero());
        assert_eq!(ts[0].absorption_probability, q(0, 1));
        assert_eq!(ts[1].absorption_probability, q(1, 1));
    }

    #[test]
    fn pmf_from_series() {
        let t = hitting_gf_discrete(&tc1(), 0).unwrap();
        assert_eq!(
            pmf(&t, 3).unwrap().exact_values().unwrap(),
            &[q(0, 1), q(2, 3), q(2, 9), q(2, 27)]
        );
        let t = hitting_gf_discrete(&ladder(), 0).unwrap();
        assert_eq!(
            pmf(&t, 3).unwrap().exact_values().unwrap(),
            &[q(0, 1), q(0, 1), q(1, 1), q(0, 1)]
        );
        // paths 0->1->2 (1/4) and, at n = 3, 0->0->1->2 plus 0->1->1->2 (1/8 + 1/16)
        let t = hitting_gf_discrete(&tc3(), 0).unwrap();
        assert_eq!(
            pmf(&t, 3).unwrap().exact_values().unwrap(),
            &[q(0, 1), q(0, 1), q(1, 4), q(3, 16)]
        );
        let lt = hitting_lt_continuous(&exp2(), 0).unwrap();
        assert!(matches!(pmf(&lt, 3), Err(HittingError::KindMismatch(_))));
    }
}
