//! Rational functions in `z` with [`RatQ`] coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use super::ratq::RatQ;
use super::series::{Direction, ZSeries};
use crate::error::{Error, Result};

/// `num(z)/den(z)` with coefficient vectors in ascending powers of `z`.
///
/// The representation is not reduced; degrees and evaluations are what
/// matter. Trailing zero coefficients are trimmed, and the denominator is
/// never the zero polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct ZRational {
    num: Vec<RatQ>,
    den: Vec<RatQ>,
}

fn trim(mut v: Vec<RatQ>) -> Vec<RatQ> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[RatQ], b: &[RatQ]) -> Vec<RatQ> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RatQ::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(out)
}

fn poly_eval(p: &[RatQ], z: &RatQ) -> RatQ {
    let mut acc = RatQ::zero();
    for c in p.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

/// Power-series quotient `n/d` to `order + 1` terms; `d[0]` must be nonzero.
fn series_div(n: &[RatQ], d: &[RatQ], order: usize) -> Result<Vec<RatQ>> {
    let d0_inv = d[0].inv()?;
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = n.get(k).cloned().unwrap_or_else(RatQ::zero);
        for i in 1..=k.min(d.len().saturating_sub(1)) {
            acc = acc.sub(&d[i].mul(&out[k - i]));
        }
        out.push(acc.mul(&d0_inv));
    }
    Ok(out)
}

/// Divides `p` by `(1 − b z)` exactly; returns `None` if the remainder is nonzero.
fn divide_linear(p: &[RatQ], b: &RatQ) -> Option<Vec<RatQ>> {
    if p.len() < 2 {
        return None;
    }
    let n = p.len() - 1;
    let mut quot = Vec::with_capacity(n);
    let mut prev = RatQ::zero();
    for c in p.iter().take(n) {
        let v = c.add(&b.mul(&prev));
        quot.push(v.clone());
        prev = v;
    }
    let rem = p[n].add(&b.mul(&prev));
    if rem.is_zero() {
        Some(quot)
    } else {
        None
    }
}

impl ZRational {
    /// The constant function `c`.
    pub fn constant(c: RatQ) -> Self {
        Self {
            num: trim(vec![c]),
            den: vec![RatQ::one()],
        }
    }

    pub fn one() -> Self {
        Self::constant(RatQ::one())
    }

    /// `1 − b z`.
    pub fn one_minus(b: RatQ) -> Self {
        Self {
            num: trim(vec![RatQ::one(), b.neg()]),
            den: vec![RatQ::one()],
        }
    }

    /// `c · Π_k (1 − q^k z)^{e_k}`.
    pub fn from_q_factors(c: RatQ, factors: &BTreeMap<i64, i64>) -> Self {
        let mut num = vec![c];
        let mut den = vec![RatQ::one()];
        for (&k, &e) in factors {
            let lin = [RatQ::one(), RatQ::q_pow(k).neg()];
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    num = poly_mul(&num, &lin);
                } else {
                    den = poly_mul(&den, &lin);
                }
            }
        }
        Self {
            num: trim(num),
            den: trim(den),
        }
    }

    /// General constructor from coefficient vectors (ascending in `z`).
    pub fn from_coeffs(num: Vec<RatQ>, den: Vec<RatQ>) -> Result<Self> {
        let den = trim(den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self {
            num: trim(num),
            den,
        })
    }

    pub fn numer(&self) -> &[RatQ] {
        &self.num
    }

    pub fn denom(&self) -> &[RatQ] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            num: poly_mul(&self.num, &other.num),
            den: poly_mul(&self.den, &other.den),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    /// Degree `deg num − deg den` (the shift `α_i(μ)` for a φ-eigenvalue).
    pub fn degree(&self) -> i64 {
        if self.num.is_empty() {
            return 0;
        }
        self.num.len() as i64 - self.den.len() as i64
    }

    /// Substitutes `z ↦ a z`.
    pub fn scale_z(&self, a: &RatQ) -> Self {
        let scale = |p: &[RatQ]| -> Vec<RatQ> {
            let mut pw = RatQ::one();
            let mut out = Vec::with_capacity(p.len());
            for c in p {
                out.push(c.mul(&pw));
                pw = pw.mul(a);
            }
            trim(out)
        };
        Self {
            num: scale(&self.num),
            den: scale(&self.den),
        }
    }

    /// Value at `z = p`; a vanishing denominator is reported as a pole.
    pub fn eval(&self, p: &RatQ) -> Result<RatQ> {
        let d = poly_eval(&self.den, p);
        if d.is_zero() {
            return Err(Error::Pole(format!("denominator vanishes at z = {p}")));
        }
        poly_eval(&self.num, p).div(&d)
    }

    /// Expansion to the given order around `z = 0` (`InZ`) or `z = ∞` (`InZInverse`).
    ///
    /// `InZ` requires regularity at 0 (nonzero denominator constant term);
    /// the `InZInverse` expansion starts at `z^{degree}`.
    pub fn series_expand(&self, direction: Direction, order: usize) -> Result<ZSeries> {
        match direction {
            Direction::InZ => {
                if self.den[0].is_zero() {
                    return Err(Error::Pole("expansion point z = 0 is a pole".into()));
                }
                let c = series_div(&self.num, &self.den, order)?;
                Ok(ZSeries::new(Direction::InZ, 0, c))
            }
            Direction::InZInverse => {
                if self.num.is_empty() {
                    return Ok(ZSeries::new(
                        Direction::InZInverse,
                        0,
                        vec![RatQ::zero(); order + 1],
                    ));
                }
                // f(z) = z^{deg} · Ñ(w)/D̃(w) with w = z^{-1} and reversed coefficients.
                let n_rev: Vec<RatQ> = self.num.iter().rev().cloned().collect();
                let d_rev: Vec<RatQ> = self.den.iter().rev().cloned().collect();
                let c = series_div(&n_rev, &d_rev, order)?;
                Ok(ZSeries::new(Direction::InZInverse, self.degree(), c))
            }
        }
    }

    /// Factors the function as `c · Π_k (1 − q^k z)^{e_k}`.
    ///
    /// Fails with a non-factorable error if any numerator or denominator
    /// factor is not of this shape (or if the function vanishes or has a pole
    /// at `z = 0`).
    pub fn factor_q_linear(&self) -> Result<(RatQ, BTreeMap<i64, i64>)> {
        if self.num.is_empty() || self.num[0].is_zero() || self.den[0].is_zero() {
            return Err(Error::NonFactorable(
                "function must be regular and nonzero at z = 0".into(),
            ));
        }
        let c = self.num[0].div(&self.den[0])?;
        let mut exps = BTreeMap::new();
        for (poly, sign) in [(&self.num, 1i64), (&self.den, -1i64)] {
            for k in Self::q_linear_roots(poly)? {
                *exps.entry(k).or_insert(0) += sign;
            }
        }
        exps.retain(|_, e| *e != 0);
        Ok((c, exps))
    }

    /// Exponents `k` (with multiplicity) with `p ∝ Π (1 − q^k z)`.
    fn q_linear_roots(p: &[RatQ]) -> Result<Vec<i64>> {
        let c0 = p[0].inv()?;
        let mut cur: Vec<RatQ> = p.iter().map(|x| x.mul(&c0)).collect();
        let mut roots = Vec::new();
        while cur.len() > 1 {
            // The z-coefficient is −Σ q^{k_t}: its exponents are the candidates.
            let lin = cur[1].neg();
            let candidates: Vec<i64> = if lin.is_laurent() {
                lin.numer()
                    .terms()
                    .filter(|(_, c)| c.is_positive())
                    .map(|(e, _)| e)
                    .collect()
            } else {
                Vec::new()
            };
            let mut found = false;
            for k in candidates {
                if let Some(qt) = divide_linear(&cur, &RatQ::q_pow(k)) {
                    roots.push(k);
                    cur = trim(qt);
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::NonFactorable(format!(
                    "polynomial factor {} is not a product of (1 - q^k z)",
                    Self::fmt_poly(&cur)
                )));
            }
        }
        Ok(roots)
    }

    fn fmt_poly(p: &[RatQ]) -> String {
        let parts: Vec<String> = p
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*z^{i}"))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for ZRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", Self::fmt_poly(&self.num), Self::fmt_poly(&self.den))
    }
}

impl fmt::Debug for ZRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_expansion() {
        let f = ZRational::one_minus(RatQ::one()).inv().unwrap();
        let s = f.series_expand(Direction::InZ, 3).unwrap();
        assert_eq!(s.coeffs(), &vec![RatQ::one(); 4][..]);
    }

    #[test]
    fn inverse_direction_starts_at_degree() {
        // (1 - q z) expanded at infinity: -q z + 1.
        let f = ZRational::one_minus(RatQ::q_pow(1));
        let s = f.series_expand(Direction::InZInverse, 2).unwrap();
        assert_eq!(s.lead(), 1);
        assert_eq!(s.coeffs(), &[RatQ::q_pow(1).neg(), RatQ::one(), RatQ::zero()]);
    }

    #[test]
    fn factor_round_trip() {
        let mut fs = BTreeMap::new();
        fs.insert(2, 1);
        fs.insert(-2, -2);
        fs.insert(0, 1);
        let f = ZRational::from_q_factors(RatQ::q_pow(3), &fs);
        let (c, g) = f.factor_q_linear().unwrap();
        assert_eq!(c, RatQ::q_pow(3));
        assert_eq!(g, fs);
    }

    #[test]
    fn non_factorable() {
        let f = ZRational::from_coeffs(vec![RatQ::one(), RatQ::zero(), RatQ::one()], vec![RatQ::one()])
            .unwrap();
        assert!(matches!(f.factor_q_linear(), Err(Error::NonFactorable(_))));
    }

    #[test]
    fn pole_detection() {
        let f = ZRational::one_minus(RatQ::q_pow(2)).inv().unwrap();
        assert!(matches!(f.eval(&RatQ::q_pow(-2)), Err(Error::Pole(_))));
    }
}
