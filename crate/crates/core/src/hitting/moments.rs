use num_traits::One;

use super::{HittingError, HittingTimeTransform, TransformKind};
use crate::chain::format_rational;
use crate::Rational;

const MAX_ORDER: usize = 4;

fn require_certain(t: &HittingTimeTransform) -> Result<(), HittingError> {
    if t.is_certain() {
        Ok(())
    } else {
        Err(HittingError::DefectiveDistribution(format_rational(
            &t.absorption_probability,
        )))
    }
}

/// Order-`k` moment, `1 <= k <= 4`.
///
/// Generating functions give the factorial moment
/// `E[tau (tau-1) ... (tau-k+1)] = f^(k)(1)`; Laplace transforms give the
/// raw moment `E[tau^k] = (-1)^k f^(k)(0)`.
pub fn moment(t: &HittingTimeTransform, k: usize) -> Result<Rational, HittingError> {
    if k == 0 || k > MAX_ORDER {
        return Err(HittingError::MomentOrder(k));
    }
    require_certain(t)?;
    let deriv = t.func.nth_derivative(k);
    match t.kind {
        TransformKind::GeneratingFunction => Ok(deriv.eval(&Rational::one())?),
        TransformKind::LaplaceTransform => {
            let v = deriv.eval(&Rational::from_integer(0.into()))?;
            Ok(if k % 2 == 1 { -v } else { v })
        }
    }
}

pub fn mean(t: &HittingTimeTransform) -> Result<Rational, HittingError> {
    moment(t, 1)
}

pub fn variance(t: &HittingTimeTransform) -> Result<Rational, HittingError> {
    let m1 = moment(t, 1)?;
    let m2 = moment(t, 2)?;
    Ok(match t.kind {
        // E[tau^2] = E[tau(tau-1)] + E[tau]
        TransformKind::GeneratingFunction => &m2 + &m1 - &m1 * &m1,
        TransformKind::LaplaceTransform => &m2 - &m1 * &m1,
    })
}
