//! Executable checks of the determinant identities behind the product forms.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{is_skip_free, SpectrumReport};
use crate::algebra::{poly_det_affine, Polynomial, Scalar};
use crate::chain::{format_rational, AbsorbingChain, ChainKind};
use crate::hitting::{base_matrix, build_submatrix, SubmatrixSpec};
use crate::spectral::roots::eval_complex;
use crate::{RatPoly, Rational};

/// Relative tolerance for identities that involve computed eigenvalues.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Absolute floor below which two values are considered equal (both ~ 0).
const ABS_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityStatus {
    Passed,
    Failed,
    NotApplicable,
}

impl IdentityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityStatus::Passed => "pass",
            IdentityStatus::Failed => "fail",
            IdentityStatus::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    /// Whether the check is an exact rational comparison.
    pub exact: bool,
    pub status: IdentityStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    /// No check failed (not-applicable checks are ignored).
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != IdentityStatus::Failed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, exact: bool, ok: bool, detail: String) {
        let status = if ok {
            IdentityStatus::Passed
        } else {
            IdentityStatus::Failed
        };
        self.checks.push(IdentityCheck {
            name,
            exact,
            status,
            detail,
        });
    }

    fn not_applicable(&mut self, name: &'static str, exact: bool) {
        self.checks.push(IdentityCheck {
            name,
            exact,
            status: IdentityStatus::NotApplicable,
            detail: "chain is not skip-free".into(),
        });
    }
}

fn rel_close(a: Complex64, b: Complex64) -> bool {
    let diff = (a - b).norm();
    diff <= ABS_FLOOR || diff <= IDENTITY_TOL * a.norm().max(b.norm())
}

fn to_c(x: &Rational) -> Complex64 {
    Complex64::new(x.to_f64_lossy(), 0.0)
}

/// Product of the transitions (or rates) `i -> i+1`.
fn superdiagonal_product(chain: &impl AbsorbingChain) -> Rational {
    (0..chain.d()).map(|i| chain.entry(i, i + 1).clone()).product()
}

/// Runs every identity applicable to `chain`, using `spectrum` for the
/// floating-point ones.
///
/// Discrete: `det(I - sP) = (1 - s) det A_{d+1}(s)` (exact) and
/// `det A_{d+1}(s) = prod (1 - l_i s)` always; for skip-free chains also
/// `det A_1(s) = (-1)^d p01 p12 ... s^d` (exact),
/// `p01 p12 ... = prod (1 - l_i)` and `det A_1(s) = (-1)^d prod (1 - l_i) s^d`.
///
/// Continuous: the same shapes with `sI - Q`, `s + l_i` and the rates
/// `a01 a12 ...` compared against `prod l_i`.
pub fn verify_identities(chain: &impl AbsorbingChain, spectrum: &SpectrumReport) -> IdentityReport {
    let mut report = IdentityReport::default();
    let d = chain.d();
    let kind = chain.kind();
    let eigs = spectrum.expanded();
    let transient = &spectrum.char_poly;

    // full characteristic polynomial factors off the absorbing state
    let full = poly_det_affine(&base_matrix(chain));
    let absorbing_factor = match kind {
        ChainKind::Discrete => RatPoly::linear(Rational::one(), -Rational::one()),
        ChainKind::Continuous => RatPoly::variable(),
    };
    let factored = &absorbing_factor * transient;
    report.push(
        "factorization",
        true,
        full == factored,
        format!("full determinant {full}; absorbing factor times transient determinant {factored}"),
    );

    // transient determinant against the eigenvalue product
    let grid: [f64; 3] = match kind {
        ChainKind::Discrete => [0.25, 0.5, 0.75],
        ChainKind::Continuous => [0.5, 1.0, 2.0],
    };
    let transient_f = transient.to_f64();
    let mut worst = 0.0f64;
    let mut ok = eigs.len() == d;
    for &s in &grid {
        let z = Complex64::new(s, 0.0);
        let lhs = eval_complex(&transient_f, z);
        let rhs: Complex64 = match kind {
            ChainKind::Discrete => eigs.iter().map(|l| Complex64::new(1.0, 0.0) - l * z).product(),
            ChainKind::Continuous => eigs.iter().map(|l| z + l).product(),
        };
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE));
        ok &= rel_close(lhs, rhs);
    }
    report.push(
        "denominator_product",
        false,
        ok,
        format!("max relative deviation {worst:e} over s in {grid:?}"),
    );

    if !is_skip_free(chain) {
        report.not_applicable("numerator_monomial", true);
        report.not_applicable("superdiagonal_product", false);
        report.not_applicable("numerator_spectral", false);
        return report;
    }

    let first = poly_det_affine(
        &build_submatrix(chain, SubmatrixSpec::for_chain(chain, 1)).expect("column 1 exists"),
    );
    let sup = superdiagonal_product(chain);
    let sign = if d % 2 == 1 { -Rational::one() } else { Rational::one() };
    let power = match kind {
        ChainKind::Discrete => d,
        ChainKind::Continuous => 0,
    };
    let expected = Polynomial::monomial(&sign * &sup, power);
    report.push(
        "numerator_monomial",
        true,
        first == expected,
        format!("first-column determinant {first}; expected {expected}"),
    );

    let spectral_product: Complex64 = match kind {
        ChainKind::Discrete => eigs.iter().map(|l| Complex64::new(1.0, 0.0) - l).product(),
        ChainKind::Continuous => eigs.iter().product(),
    };
    report.push(
        "superdiagonal_product",
        false,
        rel_close(to_c(&sup), spectral_product),
        format!(
            "superdiagonal product {} vs spectral product {spectral_product}",
            format_rational(&sup)
        ),
    );

    let is_monomial = first.coeffs().iter().enumerate().all(|(k, c)| k == power || c.is_zero());
    let lead = first.coeff(power);
    let rhs = to_c(&sign) * spectral_product;
    report.push(
        "numerator_spectral",
        false,
        is_monomial && rel_close(to_c(&lead), rhs),
        format!(
            "coefficient of s^{power}: {} vs {rhs}",
            format_rational(&lead)
        ),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::tests::q;
    use crate::hitting::tests::{ladder, ladder12, tc3, tc4};
    use crate::spectral::nonunit_spectrum;

    #[test]
    fn birth_death_identities() {
        let c = tc3();
        let r = verify_identities(&c, &nonunit_spectrum(&c));
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.checks.len(), 5);
        assert!(r
            .checks
            .iter()
            .all(|x| x.status == IdentityStatus::Passed));
        // det A_1(s) = (1/4) s^2
        let first = poly_det_affine(&build_submatrix(&c, SubmatrixSpec::for_chain(&c, 1)).unwrap());
        assert_eq!(first, Polynomial::monomial(q(1, 4), 2));
    }

    #[test]
    fn ladder_identities() {
        let c = ladder();
        let r = verify_identities(&c, &nonunit_spectrum(&c));
        assert!(r.all_passed(), "{r:?}");
    }

    #[test]
    fn general_chain_skips_skip_free_checks() {
        let c = tc4();
        let r = verify_identities(&c, &nonunit_spectrum(&c));
        assert!(r.all_passed());
        assert_eq!(r.get("factorization").unwrap().status, IdentityStatus::Passed);
        assert_eq!(
            r.get("numerator_monomial").unwrap().status,
            IdentityStatus::NotApplicable
        );
    }

    #[test]
    fn continuous_identities() {
        let c = ladder12();
        let r = verify_identities(&c, &nonunit_spectrum(&c));
        assert!(r.all_passed(), "{r:?}");
        assert!(r.checks.iter().all(|x| x.status == IdentityStatus::Passed));
    }
}
