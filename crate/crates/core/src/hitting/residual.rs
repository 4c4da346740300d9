use num_traits::Zero;

use super::{HittingError, HittingTimeTransform, TransformKind};
use crate::algebra::Polynomial;
use crate::chain::{AbsorbingChain, ChainKind};
use crate::{RatFunc, Rational};

/// Residuals of the first-step equations, one per transient state.
///
/// Discrete row `i`: `f_i - s (sum_{j<d} P[i][j] f_j + P[i][d])`.
/// Continuous row `i`: `(gamma_i + s) f_i - sum_{j != i, j<d} Q[i][j] f_j - Q[i][d]`.
///
/// Exact transforms make every residual the zero function.
pub fn first_step_residual(
    chain: &impl AbsorbingChain,
    transforms: &[HittingTimeTransform],
) -> Result<Vec<RatFunc>, HittingError> {
    let d = chain.d();
    if transforms.len() != d {
        return Err(HittingError::TransformCount {
            expected: d,
            got: transforms.len(),
        });
    }
    let expected_kind = TransformKind::for_chain(chain.kind());
    let mut by_start: Vec<Option<&RatFunc>> = vec![None; d];
    for t in transforms {
        if t.kind != expected_kind {
            return Err(HittingError::KindMismatch(format!(
                "{} transform for a {} chain",
                t.kind.as_str(),
                chain.kind().as_str()
            )));
        }
        let slot = by_start
            .get_mut(t.start)
            .ok_or(HittingError::StartOutOfRange { start: t.start, d })?;
        if slot.is_some() {
            return Err(HittingError::KindMismatch(format!(
                "duplicate transform for start state {}",
                t.start
            )));
        }
        *slot = Some(&t.func);
    }
    let f: Vec<&RatFunc> = by_start.into_iter().map(|x| x.expect("all slots filled")).collect();
    let m = chain.matrix();
    let s = Polynomial::variable();

    let residuals = (0..d)
        .map(|i| {
            let mut combo = RatFunc::from_polynomial(Polynomial::constant(m[i][d].clone()));
            for (j, fj) in f.iter().enumerate() {
                if j == i && chain.kind() == ChainKind::Continuous {
                    continue;
                }
                if !m[i][j].is_zero() {
                    combo = &combo + &fj.scale(&m[i][j]);
                }
            }
            match chain.kind() {
                ChainKind::Discrete => f[i] - &(&combo * &s),
                ChainKind::Continuous => {
                    let gamma_plus_s = Polynomial::linear(-m[i][i].clone(), Rational::from_integer(1.into()));
                    &(f[i] * &gamma_plus_s) - &combo
                }
            }
        })
        .collect();
    Ok(residuals)
}

/// True when every first-step residual is identically zero.
pub fn residuals_vanish(
    chain: &impl AbsorbingChain,
    transforms: &[HittingTimeTransform],
) -> Result<bool, HittingError> {
    Ok(first_step_residual(chain, transforms)?
        .iter()
        .all(RatFunc::is_zero))
}
