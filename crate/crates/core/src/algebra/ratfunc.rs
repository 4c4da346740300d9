use std::ops::{Add, Mul, Neg, Sub};


use super::{AlgebraError, Polynomial, Scalar};

/// Quotient of two polynomials in `s`, kept in canonical form: numerator
/// and denominator share no common factor, and the denominator has
/// constant term one (or, when it vanishes at zero, leading coefficient one).
/// The zero function is stored as `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Scalar> RationalFunction<T> {
    /// Builds `num / den` in canonical form.
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = T::poly_gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let c0 = den.coeff(0);
        let scale = if c0.is_zero() {
            den.leading().cloned().expect("nonzero denominator")
        } else {
            c0
        };
        let inv = T::one() / scale;
        Ok(Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_polynomial(p: Polynomial<T>) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_polynomial(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_polynomial(Polynomial::one())
    }

    pub fn num(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact value at `s0`.
    pub fn eval(&self, s0: &T) -> Result<T, AlgebraError> {
        let d = self.den.eval(s0);
        if d.is_zero() {
            return Err(AlgebraError::PoleAtPoint(format!("{s0:?}")));
        }
        Ok(self.num.eval(s0) / d)
    }

    /// Maclaurin coefficients `a_0..=a_{n_max}` by the recurrence
    /// `a_n = (num_n - sum_{k>=1} den_k a_{n-k}) / den_0`.
    pub fn series_coefficients(&self, n_max: usize) -> Result<Vec<T>, AlgebraError> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(AlgebraError::PoleAtZero);
        }
        let den = self.den.coeffs();
        let mut out: Vec<T> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut acc = self.num.coeff(n);
            for k in 1..den.len().min(n + 1) {
                acc = acc - den[k].clone() * out[n - k].clone();
            }
            out.push(if d0.is_one() { acc } else { acc / d0.clone() });
        }
        Ok(out)
    }

    /// First derivative by the quotient rule.
    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        Self::new(num, den).expect("square of a nonzero denominator")
    }

    /// `k`-th derivative; `k = 0` returns a copy.
    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> RationalFunction<U> {
        RationalFunction::new(self.num.map(&f), self.den.map(&f))
            .expect("denominator stays nonzero under a field embedding")
    }

    pub fn to_f64(&self) -> RationalFunction<f64> {
        self.map(T::to_f64_lossy)
    }
}

impl<T: Scalar> Add for &RationalFunction<T> {
    type Output = RationalFunction<T>;

    fn add(self, rhs: Self) -> RationalFunction<T> {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl<T: Scalar> Sub for &RationalFunction<T> {
    type Output = RationalFunction<T>;

    fn sub(self, rhs: Self) -> RationalFunction<T> {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl<T: Scalar> Mul for &RationalFunction<T> {
    type Output = RationalFunction<T>;

    fn mul(self, rhs: Self) -> RationalFunction<T> {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominator")
    }
}

impl<T: Scalar> Mul<&Polynomial<T>> for &RationalFunction<T> {
    type Output = RationalFunction<T>;

    fn mul(self, rhs: &Polynomial<T>) -> RationalFunction<T> {
        RationalFunction::new(&self.num * rhs, self.den.clone()).expect("nonzero denominator")
    }
}

impl<T: Scalar> Neg for &RationalFunction<T> {
    type Output = RationalFunction<T>;

    fn neg(self) -> RationalFunction<T> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
