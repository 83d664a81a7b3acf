//! Laurent polynomials in `q` with arbitrary-precision rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial `Σ c_e q^e` with `c_e ∈ ℚ`.
///
/// Invariant: no zero coefficient is ever stored, so the zero polynomial is
/// the empty map and structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentQ {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentQ {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    /// `c·q^e` (zero if `c = 0`).
    pub fn monomial(c: BigRational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(BigRational::one(), e)
    }

    /// The integer constant `n`.
    pub fn from_int(n: i64) -> Self {
        Self::monomial(BigRational::from_integer(BigInt::from(n)), 0)
    }

    /// The rational constant `c`.
    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(e, c);
        }
        out
    }

    /// Adds `c·q^e` in place.
    pub fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Iterates over `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i64) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, e))` if the polynomial is the single term `c·q^e`.
    pub fn as_monomial(&self) -> Option<(&BigRational, i64)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((c, *e))
        } else {
            None
        }
    }

    /// `Some(c)` if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Multiplies every coefficient by the rational `s`.
    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Substitutes `q ↦ q^k` (`k ≠ 0`).
    pub fn subs_q_power(&self, k: i64) -> Self {
        assert!(k != 0, "q ↦ q^0 is not an automorphism");
        Self {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// Nonnegative integer power.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Dense coefficient vector `(s, [c_s, c_{s+1}, …])` with `s` the lowest
    /// exponent; the zero polynomial gives `(0, [])`.
    pub(crate) fn to_dense(&self) -> (i64, Vec<BigRational>) {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => {
                let mut v = vec![BigRational::zero(); (hi - lo + 1) as usize];
                for (e, c) in &self.terms {
                    v[(e - lo) as usize] = c.clone();
                }
                (lo, v)
            }
            _ => (0, Vec::new()),
        }
    }

    pub(crate) fn from_dense(shift: i64, v: &[BigRational]) -> Self {
        Self::from_terms(
            v.iter()
                .enumerate()
                .map(|(i, c)| (shift + i as i64, c.clone())),
        )
    }
}

fn fmt_coeff_term(f: &mut fmt::Formatter<'_>, c: &BigRational, e: i64, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let unit = abs.is_one();
    if e == 0 {
        return write!(f, "{}", abs);
    }
    if !unit {
        write!(f, "{}*", abs)?;
    }
    if e == 1 {
        write!(f, "q")
    } else {
        write!(f, "q^{}", e)
    }
}

impl fmt::Display for LaurentQ {
    /// Terms in decreasing exponent order, e.g. `q^2 - 1/2*q - q^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            fmt_coeff_term(f, c, *e, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<'a> Add<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentQ> for LaurentQ {
    fn add_assign(&mut self, rhs: &LaurentQ) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> Sub<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&LaurentQ> for LaurentQ {
    fn sub_assign(&mut self, rhs: &LaurentQ) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl<'a> Mul<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        LaurentQ {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over ℚ (ascending coefficients), used for gcd.
// ---------------------------------------------------------------------------

pub(crate) fn poly_trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Euclidean division `a = q·b + r` with `deg r < deg b`. `b` must be nonzero.
pub(crate) fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r: Vec<BigRational> = a.to_vec();
    poly_trim(&mut r);
    let mut b = b.to_vec();
    poly_trim(&mut b);
    assert!(!b.is_empty(), "polynomial division by zero");
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut quot = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = &r[r.len() - 1] * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            let v = &r[shift + i] - &c * bc;
            r[shift + i] = v;
        }
        quot[shift] = c;
        r.pop();
        poly_trim(&mut r);
    }
    poly_trim(&mut quot);
    (quot, r)
}

/// Monic gcd of two polynomials (zero if both are zero).
pub(crate) fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
        if let Some(l) = y.last().cloned() {
            let inv = l.recip();
            for c in y.iter_mut() {
                *c = &*c * &inv;
            }
        }
    }
    if let Some(l) = x.last().cloned() {
        let inv = l.recip();
        for c in x.iter_mut() {
            *c = &*c * &inv;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn zero_is_empty_and_cancellation_prunes() {
        let mut p = LaurentQ::q_pow(3);
        p.add_term(3, r(-1));
        assert!(p.is_zero());
        assert_eq!(p, LaurentQ::zero());
    }

    #[test]
    fn product_of_q_minus_inverse() {
        // (q - q^-1)(q + q^-1) = q^2 - q^-2
        let a = &LaurentQ::q_pow(1) - &LaurentQ::q_pow(-1);
        let b = &LaurentQ::q_pow(1) + &LaurentQ::q_pow(-1);
        let expect = &LaurentQ::q_pow(2) - &LaurentQ::q_pow(-2);
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn display_is_decreasing() {
        let p = LaurentQ::from_terms([(2, r(1)), (-2, r(-1)), (0, r(3))]);
        assert_eq!(p.to_string(), "q^2 + 3 - q^-2");
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (1+x)(1-x) and (1+x)^2 share 1+x.
        let a = vec![r(1), r(0), r(-1)];
        let b = vec![r(1), r(2), r(1)];
        assert_eq!(poly_gcd(&a, &b), vec![r(1), r(1)]);
    }
}
