//! q-numbers, q-factorials and q-binomial coefficients.

use super::ratq::RatQ;
use crate::error::{Error, Result};

/// `[m]_x = (x^m − x^{−m})/(x − x^{−1})` for any integer `m`.
///
/// Evaluated as the finite sum `x^{m−1} + x^{m−3} + … + x^{1−m}` so it is
/// exact and also defined at `x = ±1`; `[−m]_x = −[m]_x` and `[0]_x = 0`.
pub fn q_number_int(m: i64, x: &RatQ) -> Result<RatQ> {
    if x.is_zero() {
        return Err(Error::Argument("q-number base must be nonzero".into()));
    }
    if m < 0 {
        return Ok(q_number_int(-m, x)?.neg());
    }
    let mut acc = RatQ::zero();
    for j in 0..m {
        acc = acc.add(&x.pow(m - 1 - 2 * j)?);
    }
    Ok(acc)
}

/// `[m]_x` for nonnegative `m`.
pub fn q_number(m: u32, x: &RatQ) -> Result<RatQ> {
    q_number_int(m as i64, x)
}

/// `[m]_x! = [1]_x [2]_x ⋯ [m]_x`.
pub fn q_factorial(m: u32, x: &RatQ) -> Result<RatQ> {
    let mut acc = RatQ::one();
    for r in 1..=m {
        acc = acc.mul(&q_number(r, x)?);
    }
    Ok(acc)
}

/// `[m choose p]_x = [m]_x! / ([p]_x! [m−p]_x!)`; errors if `p > m`.
pub fn q_binomial(m: u32, p: u32, x: &RatQ) -> Result<RatQ> {
    if p > m {
        return Err(Error::Argument(format!(
            "q-binomial needs p <= m, got m = {m}, p = {p}"
        )));
    }
    let num = q_factorial(m, x)?;
    let den = q_factorial(p, x)?.mul(&q_factorial(m - p, x)?);
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let q = RatQ::q_pow(1);
        assert_eq!(q_number(2, &q).unwrap(), RatQ::parse("q + q^-1").unwrap());
        assert!(q_number(0, &q).unwrap().is_zero());
        assert_eq!(q_binomial(2, 1, &q).unwrap(), RatQ::parse("q + q^-1").unwrap());
        assert!(q_binomial(1, 2, &q).is_err());
    }

    #[test]
    fn matches_defining_quotient() {
        let q = RatQ::q_pow(1);
        for m in 0..6u32 {
            let lhs = q_number(m, &q).unwrap();
            let rhs = q
                .pow(m as i64)
                .unwrap()
                .sub(&q.pow(-(m as i64)).unwrap())
                .div(&q.sub(&q.inv().unwrap()))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
