use super::{HittingError, HittingTimeTransform, TransformKind};
use crate::algebra::{Polynomial, RationalFunction};
use crate::spectral::roots::polynomial_roots;
use crate::spectral::REAL_TOL;
use crate::RatFuncF64;

/// One term `weight * exp(-rate * t)` of a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialTerm {
    pub rate: f64,
    pub weight: f64,
}

/// Density `sum_k weight_k exp(-rate_k t)` whose Laplace transform is
/// `sum_k weight_k / (s + rate_k)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PartialFractionDensity {
    pub terms: Vec<ExponentialTerm>,
}

impl PartialFractionDensity {
    pub fn density(&self, t: f64) -> f64 {
        self.terms.iter().map(|e| e.weight * (-e.rate * t).exp()).sum()
    }

    /// `integral_0^t density`, in closed form.
    pub fn cdf(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|e| e.weight / e.rate * -(-e.rate * t).exp_m1())
            .sum()
    }

    pub fn transform(&self, s: f64) -> f64 {
        self.terms.iter().map(|e| e.weight / (s + e.rate)).sum()
    }

    /// Recombines the terms over the common denominator `prod (s + rate_k)`.
    pub fn recombine(&self) -> RatFuncF64 {
        let mut num = Polynomial::<f64>::zero();
        let mut den = Polynomial::<f64>::one();
        for e in &self.terms {
            let factor = Polynomial::linear(e.rate, 1.0);
            num = &(&num * &factor) + &den.scale(&e.weight);
            den = &den * &factor;
        }
        RationalFunction::new(num, den).expect("product of monic factors")
    }
}

/// Partial-fraction expansion of a Laplace transform with simple real
/// poles: the density of the absorption time as a signed mixture of
/// exponentials.
pub fn density_partial_fractions(
    t: &HittingTimeTransform,
) -> Result<PartialFractionDensity, HittingError> {
    if t.kind != TransformKind::LaplaceTransform {
        return Err(HittingError::KindMismatch(
            "partial fractions need a Laplace transform".into(),
        ));
    }
    if t.func.is_zero() {
        return Ok(PartialFractionDensity::default());
    }
    let num = t.func.num();
    let den = t.func.den();
    if num.degree() >= den.degree() {
        return Err(HittingError::ImproperTransform);
    }
    let roots = polynomial_roots(den);
    if let Some(r) = roots.iter().find(|r| r.multiplicity > 1) {
        return Err(HittingError::RepeatedPole(r.value.re));
    }
    if let Some(r) = roots
        .iter()
        .find(|r| r.value.im.abs() >= REAL_TOL * r.value.norm().max(1.0))
    {
        return Err(HittingError::ComplexPole {
            re: r.value.re,
            im: r.value.im,
        });
    }
    let num_f = num.to_f64();
    let dden_f = den.derivative().to_f64();
    let terms = roots
        .iter()
        .map(|r| {
            let pole = r.value.re;
            ExponentialTerm {
                rate: -pole,
                weight: num_f.eval(&pole) / dden_f.eval(&pole),
            }
        })
        .collect();
    Ok(PartialFractionDensity { terms })
}
