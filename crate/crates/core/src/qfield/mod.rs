//! Exact scalar arithmetic: Laurent polynomials and rational functions in `q`,
//! q-combinatorics, and truncated series in `z` or `z^{-1}` with formal exp/log.
//!
//! Nothing here uses floating point. [`RatQ`] is the coefficient field for
//! every action table, φ-eigenvalue and identity in the crate.
//!
//! ```
//! use shqa::qfield::{RatQ, q_number};
//!
//! let q = RatQ::q_pow(1);
//! let two = q_number(2, &q).unwrap();
//! assert_eq!(two.to_string(), "q + q^-1");
//! let quotient = RatQ::parse("(q^2 - q^-2)/(q - q^-1)").unwrap();
//! assert_eq!(quotient, two);
//! ```

mod laurent;
mod parse;
mod qnum;
mod ratq;
mod series;
mod zrational;

pub use laurent::LaurentQ;
pub use qnum::{q_binomial, q_factorial, q_number, q_number_int};
pub use ratq::RatQ;
pub use series::{Direction, ZSeries};
pub use zrational::ZRational;

use crate::error::Result;

/// Arithmetic operation selector for [`ratq_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Div,
    Neg,
    Eq,
}

/// Outcome of [`ratq_arith`]: a field element, or a boolean for equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithValue {
    Value(RatQ),
    Bool(bool),
}

/// Applies a field operation to canonical operands (`Neg` ignores `b`).
pub fn ratq_arith(op: ArithOp, a: &RatQ, b: &RatQ) -> Result<ArithValue> {
    Ok(match op {
        ArithOp::Add => ArithValue::Value(a.add(b)),
        ArithOp::Mul => ArithValue::Value(a.mul(b)),
        ArithOp::Div => ArithValue::Value(a.div(b)?),
        ArithOp::Neg => ArithValue::Value(a.neg()),
        ArithOp::Eq => ArithValue::Bool(a == b),
    })
}

/// Expands a rational function of `z` to the given order (see
/// [`ZRational::series_expand`]).
pub fn series_expand(f: &ZRational, direction: Direction, order: usize) -> Result<ZSeries> {
    f.series_expand(direction, order)
}
