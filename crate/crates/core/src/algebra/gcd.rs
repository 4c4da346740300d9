//! Polynomial gcd over the rationals via the subresultant remainder sequence
//! on integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Polynomial;

type IntPoly = Vec<BigInt>;

fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn content(p: &IntPoly) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn primitive_part(p: &IntPoly) -> IntPoly {
    let c = content(p);
    if c.is_zero() || c.is_one() {
        return p.clone();
    }
    p.iter().map(|x| x / &c).collect()
}

/// Clears denominators and removes the content.
fn to_primitive_int(p: &Polynomial<BigRational>) -> IntPoly {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: IntPoly = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    primitive_part(&ints)
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`, exact over the integers.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r = a.clone();
    let mut steps = 0u32;
    let delta = a.len() - b.len();
    while r.len() > db {
        let lcr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x *= lcb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lcr * bc;
        }
        r.pop();
        trim(&mut r);
        steps += 1;
    }
    let missing = (delta as u32 + 1).saturating_sub(steps);
    if missing > 0 {
        let f = num_traits::pow(lcb.clone(), missing as usize);
        for x in r.iter_mut() {
            *x *= &f;
        }
    }
    r
}

fn subresultant_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut a, mut b) = if a.len() >= b.len() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.len() - b.len();
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return primitive_part(&b);
        }
        if r.len() == 1 {
            return vec![BigInt::one()];
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        a = b;
        b = r.iter().map(|x| x / &divisor).collect();
        g = a.last().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
    }
}

/// Monic gcd of two rational polynomials (zero only when both are zero).
pub(crate) fn rational_poly_gcd(
    a: &Polynomial<BigRational>,
    b: &Polynomial<BigRational>,
) -> Polynomial<BigRational> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let g = subresultant_gcd(&to_primitive_int(a), &to_primitive_int(b));
    let g = if g.last().is_some_and(Signed::is_negative) {
        g.into_iter().map(|x| -x).collect()
    } else {
        g
    };
    Polynomial::new(g.into_iter().map(BigRational::from_integer).collect()).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn p(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        // (s + 1)(s - 2) and (s + 1)(3s + 5)
        let common = p(&[1, 1]);
        let a = &common * &p(&[-2, 1]);
        let b = &common * &p(&[5, 3]);
        assert_eq!(rational_poly_gcd(&a, &b), common);
    }

    #[test]
    fn coprime_polynomials_have_unit_gcd() {
        assert_eq!(rational_poly_gcd(&p(&[1, 0, 1]), &p(&[-1, 1])), p(&[1]));
    }

    #[test]
    fn repeated_factor_with_large_degree_gap() {
        // (s - 1)^4 (s + 3) and (s - 1)^2 (s^2 + 1)
        let lin = p(&[-1, 1]);
        let a = &lin.pow(4) * &p(&[3, 1]);
        let b = &lin.pow(2) * &p(&[1, 0, 1]);
        assert_eq!(rational_poly_gcd(&a, &b), lin.pow(2));
    }

    #[test]
    fn rational_coefficients_and_zero_inputs() {
        let half = Rational::new(1.into(), 2.into());
        let a = Polynomial::new(vec![half.clone(), half.clone()]); // (1 + s)/2
        let b = &p(&[1, 1]) * &p(&[0, 7]);
        assert_eq!(rational_poly_gcd(&a, &b), p(&[1, 1]));
        assert_eq!(rational_poly_gcd(&Polynomial::zero(), &a), p(&[1, 1]));
    }
}
