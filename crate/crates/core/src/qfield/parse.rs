//! Recursive-descent parser for rational expressions in `q`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | 'q' | '(' expr ')'
//! ```
//!
//! This accepts everything [`RatQ`]'s `Display` produces, e.g.
//! `(q^2 - q^-2)/(q - q^-1)` or `1/2*q^3 - q^-1`.

use num_bigint::BigInt;

use super::ratq::RatQ;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{} at byte {}", msg, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn expr(&mut self) -> Result<RatQ> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatQ> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let d = self.unary()?;
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatQ> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RatQ> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let n: i64 = n.try_into().map_err(|_| self.err("exponent too large"))?;
            base.pow(if neg { -n } else { n })
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatQ> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                Ok(RatQ::q_pow(1))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(RatQ::from(self.integer()?)),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub(crate) fn parse_ratq(s: &str) -> Result<RatQ> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_quotient_example() {
        let v = parse_ratq("(q^2 - q^-2)/(q - q^-1)").unwrap();
        assert_eq!(v, RatQ::q_pow(1).add(&RatQ::q_pow(-1)));
    }

    #[test]
    fn display_round_trips() {
        let v = parse_ratq("(1/2*q^3 - q^-1)/(1 + 3*q^2)").unwrap();
        assert_eq!(parse_ratq(&v.to_string()).unwrap(), v);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratq("q +").is_err());
        assert!(parse_ratq("x").is_err());
        assert!(parse_ratq("1/(q-q)").is_err());
    }
}
