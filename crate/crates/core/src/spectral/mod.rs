//! Spectra of the transient block and the product-form decompositions of
//! skip-free chains.
//!
//! For a discrete chain the transient determinant factors as
//! `det A_{d+1}(s) = prod (1 - lambda_i s)` over the eigenvalues of the
//! transient block of `P`; in continuous time
//! `det Ã_{d+1}(s) = prod (s + lambda_i)` over the eigenvalues of the
//! transient block of `-Q`. When the chain is skip-free upward and those
//! eigenvalues are real and nonnegative, the absorption time from state 0
//! is a sum of independent geometric (resp. exponential) variables.

mod identities;
pub mod roots;

use num_complex::Complex64;

use crate::chain::{AbsorbingChain, ChainKind};
use crate::hitting::transient_determinant;
use crate::RatPoly;

pub use identities::{verify_identities, IdentityCheck, IdentityReport, IdentityStatus, IDENTITY_TOL};
pub use roots::{polynomial_roots, Root};

/// Imaginary parts and negative real parts below this count as zero.
pub const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("chain is not skip-free: entry ({row}, {col}) jumps up by more than one")]
    NotSkipFree { row: usize, col: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    AllRealNonneg,
    RealMixed,
    ComplexPresent,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::AllRealNonneg => "all_real_nonneg",
            Classification::RealMixed => "real_mixed",
            Classification::ComplexPresent => "complex_present",
        }
    }
}

/// Eigenvalues of the transient block, recovered from the exact
/// characteristic polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub kind: ChainKind,
    /// `det A_{d+1}(s)` (discrete) or `det Ã_{d+1}(s)` (continuous).
    pub char_poly: RatPoly,
    /// Roots of `char_poly` with multiplicities.
    pub roots: Vec<Root>,
    /// Eigenvalues with multiplicities; for discrete chains this includes
    /// the zero eigenvalues implied by the degree deficit of `char_poly`.
    pub eigenvalues: Vec<Root>,
    /// Number of zero eigenvalues inferred from the degree deficit (discrete only).
    pub zero_eigenvalues: usize,
    pub classification: Classification,
}

impl SpectrumReport {
    /// Eigenvalues repeated by multiplicity (length `d`).
    pub fn expanded(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    /// Real eigenvalues (clamped to zero from below) when the spectrum is
    /// classified as real and nonnegative.
    pub fn real_nonneg(&self) -> Option<Vec<f64>> {
        (self.classification == Classification::AllRealNonneg)
            .then(|| self.expanded().iter().map(|z| z.re.max(0.0)).collect())
    }
}

fn classify(eigs: &[Root]) -> Classification {
    if eigs.iter().any(|r| r.value.im.abs() >= REAL_TOL) {
        Classification::ComplexPresent
    } else if eigs.iter().any(|r| r.value.re < -REAL_TOL) {
        Classification::RealMixed
    } else {
        Classification::AllRealNonneg
    }
}

/// Upward jumps are of unit size only (above-superdiagonal entries vanish).
pub fn is_skip_free(chain: &impl AbsorbingChain) -> bool {
    first_skip(chain).is_none()
}

fn first_skip(chain: &impl AbsorbingChain) -> Option<(usize, usize)> {
    let m = chain.matrix();
    (0..m.len())
        .flat_map(|i| (i + 2..m.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !num_traits::Zero::is_zero(&m[i][j]))
}

/// Spectrum of the transient block (the non-unit eigenvalues of `P`, or the
/// nonzero eigenvalues of `-Q`).
pub fn nonunit_spectrum(chain: &impl AbsorbingChain) -> SpectrumReport {
    let char_poly = transient_determinant(chain);
    let roots = polynomial_roots(&char_poly);
    let d = chain.d();
    let (mut eigenvalues, zero_eigenvalues) = match chain.kind() {
        ChainKind::Discrete => {
            // prod (1 - lambda s): nonzero eigenvalues are reciprocal roots
            let eigs: Vec<Root> = roots
                .iter()
                .map(|r| Root {
                    value: r.value.inv(),
                    multiplicity: r.multiplicity,
                })
                .collect();
            let deficit = d - char_poly.degree().unwrap_or(0);
            (eigs, deficit)
        }
        ChainKind::Continuous => {
            let eigs = roots
                .iter()
                .map(|r| Root {
                    value: -r.value,
                    multiplicity: r.multiplicity,
                })
                .collect();
            (eigs, 0)
        }
    };
    if zero_eigenvalues > 0 {
        eigenvalues.push(Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zero_eigenvalues,
        });
    }
    let classification = classify(&eigenvalues);
    SpectrumReport {
        kind: chain.kind(),
        char_poly,
        roots,
        eigenvalues,
        zero_eigenvalues,
        classification,
    }
}

/// Geometric or exponential representation of the absorption time from state 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SkipFreeDecomposition {
    pub kind: ChainKind,
    pub spectrum: SpectrumReport,
    /// Geometric success probabilities `1 - lambda_i` (discrete) or
    /// exponential rates `lambda_i` (continuous); empty unless `valid`.
    pub parameters: Vec<f64>,
    pub valid: bool,
    pub invalid_reason: Option<String>,
    pub identity_checks: IdentityReport,
}

impl SkipFreeDecomposition {
    /// Product-form transform at a real point: `prod (1-l)s/(1-ls)` or
    /// `prod l/(s+l)`. `None` unless the decomposition is valid.
    pub fn product_transform(&self, s: f64) -> Option<f64> {
        if !self.valid {
            return None;
        }
        Some(match self.kind {
            ChainKind::Discrete => self
                .parameters
                .iter()
                .map(|&p| p * s / (1.0 - (1.0 - p) * s))
                .product(),
            ChainKind::Continuous => self.parameters.iter().map(|&l| l / (s + l)).product(),
        })
    }
}

pub fn decompose_skip_free(
    chain: &impl AbsorbingChain,
) -> Result<SkipFreeDecomposition, SpectralError> {
    if let Some((row, col)) = first_skip(chain) {
        return Err(SpectralError::NotSkipFree { row, col });
    }
    let spectrum = nonunit_spectrum(chain);
    let identity_checks = verify_identities(chain, &spectrum);
    let mut invalid_reason = None;
    let mut parameters = Vec::new();
    match spectrum.real_nonneg() {
        None => {
            invalid_reason = Some(format!(
                "eigenvalues are not all real and nonnegative ({})",
                spectrum.classification.as_str()
            ));
        }
        Some(eigs) => match chain.kind() {
            ChainKind::Discrete => {
                if let Some(l) = eigs.iter().find(|&&l| l >= 1.0 - REAL_TOL) {
                    invalid_reason = Some(format!("eigenvalue {l} leaves no success probability"));
                } else {
                    parameters = eigs.iter().map(|l| 1.0 - l).collect();
                }
            }
            ChainKind::Continuous => {
                if let Some(l) = eigs.iter().find(|&&l| l <= REAL_TOL) {
                    invalid_reason = Some(format!("eigenvalue {l} is not a positive rate"));
                } else {
                    parameters = eigs;
                }
            }
        },
    }
    Ok(SkipFreeDecomposition {
        kind: chain.kind(),
        spectrum,
        parameters,
        valid: invalid_reason.is_none(),
        invalid_reason,
        identity_checks,
    })
}
