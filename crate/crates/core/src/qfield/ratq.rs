//! Exact rational functions in `q`: the scalar field for every coefficient.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::{poly_divrem, poly_gcd, LaurentQ};
use crate::error::{Error, Result};

/// A reduced fraction `num/den` of Laurent polynomials in `q`.
///
/// Canonical form: the fraction is reduced, the denominator is an ordinary
/// polynomial in `q` (lowest exponent 0) whose constant coefficient is 1, and
/// zero is `0/1`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatQ {
    num: LaurentQ,
    den: LaurentQ,
}

impl RatQ {
    pub fn zero() -> Self {
        Self {
            num: LaurentQ::zero(),
            den: LaurentQ::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentQ::one())
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::from_laurent(LaurentQ::q_pow(e))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_laurent(LaurentQ::from_int(n))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_laurent(LaurentQ::constant(c))
    }

    /// The Laurent polynomial `p` viewed as a fraction over 1.
    pub fn from_laurent(p: LaurentQ) -> Self {
        Self {
            num: p,
            den: LaurentQ::one(),
        }
    }

    /// `num/den` in canonical form.
    pub fn new(num: LaurentQ, den: LaurentQ) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn numer(&self) -> &LaurentQ {
        &self.num
    }

    pub fn denom(&self) -> &LaurentQ {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1 (the value is a Laurent polynomial).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// `Some((c, e))` if the value is the monomial `c·q^e`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_monomial().map(|(c, e)| (c.clone(), e))
    }

    /// Brings an arbitrary fraction into canonical form. `den` must be nonzero.
    fn normalize(num: LaurentQ, den: LaurentQ) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        // Fast path: unit denominator c·q^e is absorbed into the numerator.
        if let Some((c, e)) = den.as_monomial() {
            let inv = c.recip();
            return Self {
                num: num.shift(-e).scale(&inv),
                den: LaurentQ::one(),
            };
        }
        let (sn, vn) = num.to_dense();
        let (sd, vd) = den.to_dense();
        let g = poly_gcd(&vn, &vd);
        let (vn, vd) = if g.len() > 1 {
            let (qn, rn) = poly_divrem(&vn, &g);
            let (qd, rd) = poly_divrem(&vd, &g);
            debug_assert!(rn.is_empty() && rd.is_empty());
            (qn, qd)
        } else {
            (vn, vd)
        };
        // Denominator lowest coefficient (vd[0] ≠ 0 since sd is its lowest exponent
        // and dividing by a gcd with nonzero constant term keeps that property).
        let lead = vd
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero denominator");
        let inv = vd[lead].recip();
        let shift = sd + lead as i64;
        let den = LaurentQ::from_dense(0, &vd[lead..]).scale(&inv);
        let num = LaurentQ::from_dense(sn - shift, &vn).scale(&inv);
        if let Some((c, e)) = den.as_monomial() {
            // Cannot happen after the shift unless den is constant 1.
            debug_assert!(e == 0 && c.is_one());
        }
        Self { num, den }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = &self.num + &other.num;
            if self.den.is_one() {
                return Self::from_laurent(num);
            }
            return Self::normalize(num, self.den.clone());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::normalize(num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_laurent(&self.num * &other.num);
        }
        Self::normalize(&self.num * &other.num, &self.den * &other.den)
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Already reduced: swapping keeps gcd = 1, only renormalize the unit.
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power (negative powers require a nonzero base).
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            if self.den.is_one() {
                return Ok(Self::from_laurent(self.num.pow(n as u32)));
            }
            Ok(Self::normalize(self.num.pow(n as u32), self.den.pow(n as u32)))
        } else {
            self.inv()?.pow(-n)
        }
    }

    /// Multiplies by the rational scalar `c`.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }

    /// Substitutes `q ↦ q^k` for `k ≥ 1` (used to pass from `q` to `q_i = q^{d_i}`).
    pub fn subs_q_power(&self, k: i64) -> Self {
        assert!(k >= 1);
        if k == 1 {
            return self.clone();
        }
        Self::normalize(self.num.subs_q_power(k), self.den.subs_q_power(k))
    }

    /// Parses the textual grammar produced by [`fmt::Display`].
    pub fn parse(s: &str) -> Result<Self> {
        super::parse::parse_ratq(s)
    }
}

impl Default for RatQ {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RatQ {
    /// `q + q^-1` for Laurent values, `(num)/(den)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for RatQ {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl From<i64> for RatQ {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for RatQ {
    fn from(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }
}

impl<'a> Add<&'a RatQ> for &'a RatQ {
    type Output = RatQ;
    fn add(self, rhs: &RatQ) -> RatQ {
        RatQ::add(self, rhs)
    }
}

impl<'a> Sub<&'a RatQ> for &'a RatQ {
    type Output = RatQ;
    fn sub(self, rhs: &RatQ) -> RatQ {
        RatQ::sub(self, rhs)
    }
}

impl<'a> Mul<&'a RatQ> for &'a RatQ {
    type Output = RatQ;
    fn mul(self, rhs: &RatQ) -> RatQ {
        RatQ::mul(self, rhs)
    }
}

impl<'a> Div<&'a RatQ> for &'a RatQ {
    type Output = RatQ;
    /// Panics on division by zero; use [`RatQ::div`] for a checked version.
    fn div(self, rhs: &RatQ) -> RatQ {
        RatQ::div(self, rhs).expect("division by zero")
    }
}

impl Neg for &RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        RatQ::neg(self)
    }
}
#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i64) -> RatQ {
        RatQ::q_pow(e)
    }

    #[test]
    fn inverse_of_q_minus_q_inverse() {
        let x = q(1).sub(&q(-1));
        assert!(x.mul(&x.inv().unwrap()).is_one());
    }

    #[test]
    fn long_division_reduces() {
        let a = q(2).sub(&q(-2));
        let b = q(1).sub(&q(-1));
        assert_eq!(a.div(&b).unwrap(), q(1).add(&q(-1)));
    }

    #[test]
    fn division_by_zero_errors() {
        assert!(matches!(q(1).div(&RatQ::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn canonical_denominator_has_unit_constant_term() {
        // 1/(2q^3 - 4q^5) = (1/2 q^-3)/(1 - 2q^2)
        let d = RatQ::from_laurent(LaurentQ::from_terms([
            (3, BigRational::from_integer(2.into())),
            (5, BigRational::from_integer((-4).into())),
        ]));
        let x = d.inv().unwrap();
        assert_eq!(x.denom().min_exp(), Some(0));
        assert!(x.denom().coeff(0).is_one());
        assert_eq!(x.to_string(), "(1/2*q^-3)/(-2*q^2 + 1)");
    }
}
