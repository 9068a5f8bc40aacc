//! Recursive-descent reader for polynomial expressions.
//!
//! Grammar: `+ - * / ^`, parentheses, integer literals and symbols from a
//! [`VarTable`]. Division is only allowed by a nonzero constant or by a
//! single monomial whose symbols accept negative exponents.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt;

use num_bigint::BigInt;

use crate::poly::Poly;
use crate::scalar::{Coeff, Scalar};
use crate::vars::VarTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl core::error::Error for ParseError {}

/// Parse `src` as a polynomial over `vt`.
pub fn parse_poly<C: Coeff>(vt: &Arc<VarTable>, src: &str) -> Result<Poly<C>, ParseError> {
    let mut p = Parser { vt, src: src.as_bytes(), pos: 0 };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

/// Parse a rational-coefficient polynomial; panics on malformed input.
///
/// Intended for formulas embedded in this crate, which are fixed at compile time.
pub fn poly(vt: &Arc<VarTable>, src: &str) -> Poly<Scalar> {
    match parse_poly(vt, src) {
        Ok(p) => p,
        Err(e) => panic!("{e} in `{src}`"),
    }
}

struct Parser<'a> {
    vt: &'a Arc<VarTable>,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError { pos: self.pos, msg: msg.to_string() }
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

    fn expr<C: Coeff>(&mut self) -> Result<Poly<C>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add_poly(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub_poly(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<C: Coeff>(&mut self) -> Result<Poly<C>, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul_poly(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    acc = divide(&acc, &d).ok_or(ParseError {
                        pos: at,
                        msg: "divisor must be a nonzero constant or a Laurent monomial".to_string(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary<C: Coeff>(&mut self) -> Result<Poly<C>, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary::<C>()?.neg_poly())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power<C: Coeff>(&mut self) -> Result<Poly<C>, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            let p = base.pow(e);
            if neg {
                return divide(&Poly::one(self.vt), &p).ok_or_else(|| self.err("negative power of a non-monomial"));
            }
            return Ok(p);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.err("utf8"))?;
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn atom<C: Coeff>(&mut self) -> Result<Poly<C>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::from_scalar(self.vt, Scalar::from_bigint(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.err("utf8"))?;
                match self.vt.index(name) {
                    Some(i) => Ok(Poly::var_index(self.vt, i)),
                    None => Err(ParseError { pos: start, msg: alloc::format!("unknown symbol `{name}`") }),
                }
            }
            _ => Err(self.err("expected expression")),
        }
    }
}

/// Exact division by a constant or a single Laurent-compatible monomial.
fn divide<C: Coeff>(num: &Poly<C>, den: &Poly<C>) -> Option<Poly<C>> {
    if den.len() != 1 {
        return None;
    }
    let (m, c) = den.terms().next()?;
    let inv = c.inv()?;
    let vt = num.table();
    if m.0.iter().enumerate().any(|(i, &e)| e != 0 && !vt.allows_negative(i)) {
        return None;
    }
    let neg = crate::poly::Monomial(m.0.iter().map(|e| -e).collect());
    Some(num.shift(&neg).scale(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PhasePoly;

    #[test]
    fn precedence_and_division() {
        let vt = VarTable::new(&["x"], &["p"], &["k"]).unwrap();
        let a = poly(&vt, "1/2*p^2 + k*x^2 - 3*(x - 1)*x^-2");
        let p = PhasePoly::var(&vt, "p");
        let x = PhasePoly::var(&vt, "x");
        let k = PhasePoly::var(&vt, "k");
        let expect = &(&p.pow(2).scale_ratio(1, 2) + &(&k * &x.pow(2)))
            - &(&PhasePoly::var_pow(&vt, 0, -1) - &PhasePoly::var_pow(&vt, 0, -2)).scale_int(3);
        assert_eq!(a, expect);
        assert_eq!(poly(&vt, "-x^2"), x.pow(2).neg_poly());
    }

    #[test]
    fn rejects_non_laurent_division() {
        let vt = VarTable::new(&["x"], &["p"], &["k"]).unwrap();
        assert!(parse_poly::<Scalar>(&vt, "1/(x+1)").is_err());
        assert!(parse_poly::<Scalar>(&vt, "1/k").is_err());
        assert!(parse_poly::<Scalar>(&vt, "q").is_err());
        assert!(parse_poly::<Scalar>(&vt, "x +").is_err());
    }
}
