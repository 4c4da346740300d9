//! Roots of exact rational polynomials.
//!
//! Multiplicities come from an exact square-free factorization (Yun), so
//! only simple roots are ever handed to the floating-point stage. Each
//! square-free factor's roots are the eigenvalues of its balanced
//! companion matrix, refined by Newton steps on the factor itself, first in
//! double precision and then with exactly evaluated residuals.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::algebra::{Polynomial, Scalar};
use crate::{RatPoly, Rational};

/// Roots closer than this (relative to `max(1, |root|)`) are merged.
pub const CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Square-free factorization `p = c * prod_k q_k^k`; returns the monic
/// `(q_k, k)` with `deg q_k >= 1`.
pub fn square_free_factors(p: &RatPoly) -> Vec<(RatPoly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = Scalar::poly_gcd(p, &dp);
    let mut b = p.exact_div(&a0);
    let c = dp.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut k = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = Scalar::poly_gcd(&b, &d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), k));
        }
        let next_b = b.exact_div(&a);
        let next_c = d.exact_div(&a);
        d = &next_c - &next_b.derivative();
        b = next_b;
        k += 1;
    }
    out
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::zero();
    let mut deriv = Complex64::zero();
    for &c in coeffs.iter().rev() {
        deriv = deriv * z + value;
        value = value * z + c;
    }
    (value, deriv)
}

/// Parlett-Reinsch balancing with radix 2 (exact in binary floating point).
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix = 2.0;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Roots of a polynomial known to have only simple roots.
fn simple_roots(q: &RatPoly) -> Vec<Complex64> {
    let deg = q.degree().unwrap_or(0);
    let monic = q.monic();
    let coeffs: Vec<f64> = monic.coeffs().iter().map(Scalar::to_f64_lossy).collect();
    match deg {
        0 => return Vec::new(),
        1 => return vec![Complex64::new(-coeffs[0], 0.0)],
        _ => {}
    }
    let mut companion = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -coeffs[i];
    }
    balance(&mut companion);
    let eig = companion.complex_eigenvalues();
    eig.iter()
        .map(|&z| polish_exact(&monic, &coeffs, polish(&coeffs, z)))
        .collect()
}

fn exact(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// `q(z)` at a complex point with exactly representable parts, rounded once.
fn eval_exact(q: &RatPoly, z: Complex64) -> Complex64 {
    let (zr, zi) = (exact(z.re), exact(z.im));
    let mut re = Rational::zero();
    let mut im = Rational::zero();
    for c in q.coeffs().iter().rev() {
        let next_re = &re * &zr - &im * &zi + c;
        im = &re * &zi + &im * &zr;
        re = next_re;
    }
    Complex64::new(re.to_f64_lossy(), im.to_f64_lossy())
}

/// Newton steps whose residual is evaluated exactly, so accuracy is not
/// limited by rounding the coefficients.
fn polish_exact(q: &RatPoly, coeffs: &[f64], mut z: Complex64) -> Complex64 {
    let mut value = eval_exact(q, z);
    for _ in 0..4 {
        let (_, dv) = horner(coeffs, z);
        if value.norm() == 0.0 || dv.norm() == 0.0 {
            break;
        }
        let mut candidate = z - value / dv;
        if z.im == 0.0 {
            candidate.im = 0.0;
        }
        let cv = eval_exact(q, candidate);
        if cv.norm().partial_cmp(&value.norm()) != Some(Ordering::Less) {
            break;
        }
        z = candidate;
        value = cv;
    }
    z
}

fn polish(coeffs: &[f64], mut z: Complex64) -> Complex64 {
    let (mut value, _) = horner(coeffs, z);
    for _ in 0..8 {
        let (v, dv) = horner(coeffs, z);
        if dv.norm() == 0.0 {
            break;
        }
        let candidate = z - v / dv;
        let (cv, _) = horner(coeffs, candidate);
        if cv.norm().partial_cmp(&value.norm()) != Some(Ordering::Less) {
            break;
        }
        z = candidate;
        value = cv;
    }
    // keep real roots of a real polynomial real
    if z.im.abs() <= 1e-12 * z.norm().max(1.0) {
        z.im = 0.0;
    }
    z
}

fn merge_close(mut roots: Vec<Root>) -> Vec<Root> {
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    for r in roots {
        if let Some(prev) = out
            .iter_mut()
            .find(|p| (p.value - r.value).norm() < CLUSTER_TOL * p.value.norm().max(1.0))
        {
            let total = (prev.multiplicity + r.multiplicity) as f64;
            prev.value = (prev.value * prev.multiplicity as f64 + r.value * r.multiplicity as f64)
                / total;
            prev.multiplicity += r.multiplicity;
        } else {
            out.push(r);
        }
    }
    out
}

/// All complex roots of `p` with multiplicities (summing to `deg p`).
pub fn polynomial_roots(p: &RatPoly) -> Vec<Root> {
    let roots = square_free_factors(p)
        .iter()
        .flat_map(|(q, k)| {
            simple_roots(q).into_iter().map(move |value| Root {
                value,
                multiplicity: *k,
            })
        })
        .collect();
    merge_close(roots)
}

/// Complex Horner evaluation of a double-precision polynomial.
pub fn eval_complex(p: &Polynomial<f64>, z: Complex64) -> Complex64 {
    horner(p.coeffs(), z).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::tests::q;

    fn poly(c: &[i64]) -> RatPoly {
        Polynomial::new(c.iter().map(|&x| q(x, 1)).collect())
    }

    fn sorted_real(roots: &[Root]) -> Vec<(f64, usize)> {
        let mut v: Vec<(f64, usize)> = roots.iter().map(|r| (r.value.re, r.multiplicity)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    }

    #[test]
    fn square_free_split() {
        // (s - 1)^3 (s + 2)
        let p = &poly(&[-1, 1]).pow(3) * &poly(&[2, 1]);
        let f = square_free_factors(&p);
        assert_eq!(f, vec![(poly(&[2, 1]), 1), (poly(&[-1, 1]), 3)]);
    }

    #[test]
    fn real_roots_with_multiplicity() {
        let p = &(&poly(&[-1, 1]).pow(2) * &poly(&[2, 1])) * &poly(&[-3, 1]);
        let roots = polynomial_roots(&p);
        let got = sorted_real(&roots);
        assert_eq!(got.len(), 3);
        assert!((got[0].0 + 2.0).abs() < 1e-14 && got[0].1 == 1);
        assert!((got[1].0 - 1.0).abs() < 1e-14 && got[1].1 == 2);
        assert!((got[2].0 - 3.0).abs() < 1e-14 && got[2].1 == 1);
    }

    #[test]
    fn complex_pair() {
        let roots = polynomial_roots(&poly(&[1, 1, 1]));
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!((r.value.re + 0.5).abs() < 1e-14);
            assert!((r.value.im.abs() - 3f64.sqrt() / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn widely_scaled_roots() {
        // roots 1/1000, 1, 1000
        let p = &(&Polynomial::new(vec![q(-1, 1000), q(1, 1)]) * &poly(&[-1, 1]))
            * &poly(&[-1000, 1]);
        let got = sorted_real(&polynomial_roots(&p));
        assert!((got[0].0 - 1e-3).abs() < 1e-16);
        assert!((got[1].0 - 1.0).abs() < 1e-13);
        assert!((got[2].0 - 1e3).abs() < 1e-10);
    }

    #[test]
    fn constants_have_no_roots() {
        assert!(polynomial_roots(&poly(&[5])).is_empty());
        assert!(polynomial_roots(&Polynomial::zero()).is_empty());
    }
}
