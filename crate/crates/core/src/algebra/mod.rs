//! Exact (and floating-point) univariate algebra: polynomials, rational
//! functions, determinants of polynomial matrices and series extraction.
//!
//! Everything here is generic over [`Scalar`]. The engine itself runs on
//! [`crate::Rational`]; the `f64` instantiation is used wherever a result is
//! handed to numerical code (root finding, transform comparisons).

mod det;
mod gcd;
mod poly;
mod ratfunc;

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

pub use det::{determinant, interpolate, poly_det_affine, poly_det_affine_at};
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;

/// Errors raised by rational-function operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("rational function has a pole at s = 0; no Maclaurin expansion")]
    PoleAtZero,
    #[error("rational function has a pole at s = {0}")]
    PoleAtPoint(String),
}

/// A field the algebra layer can compute over.
///
/// The two hooks let exact fields keep intermediate sizes under control:
/// rational functions are reduced by [`Scalar::poly_gcd`], and Bareiss
/// elimination starts from rows rescaled by [`Scalar::clear_row_denominators`].
/// Inexact fields keep the defaults (no gcd reduction, no rescaling).
pub trait Scalar:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive + ToPrimitive + Send + Sync
{
    /// Monic greatest common divisor, or [`Polynomial::one`] when the field
    /// cannot decide divisibility reliably.
    fn poly_gcd(_a: &Polynomial<Self>, _b: &Polynomial<Self>) -> Polynomial<Self> {
        Polynomial::one()
    }

    /// Multiplies `row` by a nonzero factor that makes it integral and
    /// returns that factor.
    fn clear_row_denominators(_row: &mut [Self]) -> Self {
        Self::one()
    }

    /// Lossy conversion used at the boundary to numerical code.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {}

impl Scalar for f32 {}

impl Scalar for BigRational {
    fn poly_gcd(a: &Polynomial<Self>, b: &Polynomial<Self>) -> Polynomial<Self> {
        gcd::rational_poly_gcd(a, b)
    }

    fn clear_row_denominators(row: &mut [Self]) -> Self {
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        if lcm.is_one() {
            return Self::one();
        }
        let factor = BigRational::from_integer(lcm);
        for x in row.iter_mut() {
            *x = &*x * &factor;
        }
        factor
    }

    fn to_f64_lossy(&self) -> f64 {
        // Ratio::to_f64 handles numerators and denominators beyond f64 range.
        self.to_f64().unwrap_or_else(|| {
            if self.is_zero() {
                0.0
            } else {
                f64::NAN
            }
        })
    }
}
