//! Truncated formal series in `z` or `z^{-1}` with [`RatQ`] coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::ratq::RatQ;
use crate::error::{Error, Result};

/// Expansion direction of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `Σ_{n≥0} c_n z^{lead+n}` (expansion around `z = 0`).
    InZ,
    /// `Σ_{n≥0} c_n z^{lead−n}` (expansion around `z = ∞`).
    InZInverse,
}

/// A truncated series `Σ_{n=0}^{order} c_n z^{lead ± n}`.
///
/// Exactly `order + 1` coefficients are stored; the sign in the exponent is
/// fixed by [`Direction`].
#[derive(Clone, PartialEq, Eq)]
pub struct ZSeries {
    direction: Direction,
    lead: i64,
    coeffs: Vec<RatQ>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ZSeries {
    /// Builds a series from its leading exponent and coefficient list
    /// (the order is `coeffs.len() − 1`; the list must be nonempty).
    pub fn new(direction: Direction, lead: i64, coeffs: Vec<RatQ>) -> Self {
        assert!(!coeffs.is_empty(), "a series stores order + 1 >= 1 coefficients");
        Self {
            direction,
            lead,
            coeffs,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    /// Coefficients in expansion order (`c_0` first).
    pub fn coeffs(&self) -> &[RatQ] {
        &self.coeffs
    }

    /// Coefficient of `z^e`, or `None` if `e` is outside the stored window.
    /// Exponents "before" the leading one are known to be zero.
    pub fn coeff_of(&self, e: i64) -> Option<RatQ> {
        let n = match self.direction {
            Direction::InZ => e - self.lead,
            Direction::InZInverse => self.lead - e,
        };
        if n < 0 {
            Some(RatQ::zero())
        } else if (n as usize) < self.coeffs.len() {
            Some(self.coeffs[n as usize].clone())
        } else {
            None
        }
    }

    fn check_same_direction(&self, other: &Self) -> Result<()> {
        if self.direction != other.direction {
            return Err(Error::Argument(
                "series arithmetic needs equal expansion directions".into(),
            ));
        }
        Ok(())
    }

    /// Product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_direction(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = RatQ::zero();
                for i in 0..=k {
                    acc = acc.add(&self.coeffs[i].mul(&other.coeffs[k - i]));
                }
                acc
            })
            .collect();
        Ok(Self::new(self.direction, self.lead + other.lead, coeffs))
    }

    /// Sum; both series must share direction and leading exponent.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_direction(other)?;
        if self.lead != other.lead {
            return Err(Error::Argument("series sum needs equal leading exponents".into()));
        }
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect();
        Ok(Self::new(self.direction, self.lead, coeffs))
    }

    /// Formal logarithm.
    ///
    /// The leading monomial `z^{lead}` is factored out first; its coefficient
    /// must equal 1 (otherwise a bad-leading-term error). The result has
    /// leading exponent 0, constant term 0, and the same order.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::BadLeadingTerm(format!(
                "log needs leading coefficient 1, found {}",
                self.coeffs[0]
            )));
        }
        let s = &self.coeffs;
        let n = self.order();
        let mut l = vec![RatQ::zero(); n + 1];
        // From s·L' = s': n·l_n = n·s_n − Σ_{k=1}^{n−1} k·l_k·s_{n−k}.
        for m in 1..=n {
            let mut acc = s[m].scale(&rat(m as i64));
            for k in 1..m {
                acc = acc.sub(&l[k].mul(&s[m - k]).scale(&rat(k as i64)));
            }
            l[m] = acc.scale(&rat(m as i64).recip());
        }
        Ok(Self::new(self.direction, 0, l))
    }

    /// Formal exponential of a series with zero constant term and leading exponent 0.
    pub fn exp(&self) -> Result<Self> {
        if self.lead != 0 || !self.coeffs[0].is_zero() {
            return Err(Error::BadLeadingTerm(
                "exp needs a series with zero constant term".into(),
            ));
        }
        let t = &self.coeffs;
        let n = self.order();
        let mut e = vec![RatQ::zero(); n + 1];
        e[0] = RatQ::one();
        // E' = T'E: m·e_m = Σ_{k=1}^{m} k·t_k·e_{m−k}.
        for m in 1..=n {
            let mut acc = RatQ::zero();
            for k in 1..=m {
                acc = acc.add(&t[k].mul(&e[m - k]).scale(&rat(k as i64)));
            }
            e[m] = acc.scale(&rat(m as i64).recip());
        }
        Ok(Self::new(self.direction, 0, e))
    }
}

impl fmt::Display for ZSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.direction {
            Direction::InZ => 1,
            Direction::InZInverse => -1,
        };
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*z^{}", c, self.lead + sign * n as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.lead + sign * (self.order() as i64 + 1))
    }
}

impl fmt::Debug for ZSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RatQ {
        RatQ::parse(s).unwrap()
    }

    #[test]
    fn log_of_one_plus_z() {
        let s = ZSeries::new(Direction::InZ, 0, vec![r("1"), r("1"), r("0"), r("0")]);
        let l = s.log().unwrap();
        assert_eq!(l.coeffs(), &[r("0"), r("1"), r("-1/2"), r("1/3")]);
    }

    #[test]
    fn exp_log_round_trip_geometric() {
        let s = ZSeries::new(Direction::InZ, 0, vec![r("1"); 5]);
        assert_eq!(s.log().unwrap().exp().unwrap(), s);
    }

    #[test]
    fn bad_leading_term() {
        let s = ZSeries::new(Direction::InZ, 0, vec![r("2"), r("1")]);
        assert!(matches!(s.log(), Err(Error::BadLeadingTerm(_))));
        let t = ZSeries::new(Direction::InZ, 0, vec![r("1"), r("1")]);
        assert!(matches!(t.exp(), Err(Error::BadLeadingTerm(_))));
    }

    #[test]
    fn direction_mismatch_is_an_error() {
        let a = ZSeries::new(Direction::InZ, 0, vec![r("1")]);
        let b = ZSeries::new(Direction::InZInverse, 0, vec![r("1")]);
        assert!(a.mul(&b).is_err());
    }
}
