//! Text syntax for insertion polynomials.
//!
//! Accepts sums and products of rational constants, the variables
//! `u1..un` and `z`, integer powers and parentheses, e.g.
//! `3/2 * u1^2 * u2 - (u1 + u2)^4` or `(u1*u2)^2`.
//! Division is only allowed by expressions free of the `u` variables.

use num::{BigInt, BigRational};

use super::{Polynomial, ScalarZ};
use crate::error::{Error, Result};

pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, nvars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos, message: message.to_string() }
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

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    let c = scalar_of(&d).ok_or(Error::Parse {
                        offset: at,
                        message: "division by a non-constant expression".into(),
                    })?;
                    if c.is_zero() {
                        return Err(Error::Parse { offset: at, message: "division by zero".into() });
                    }
                    acc = acc.scale(&c.inv());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { offset: start, message: "integer out of range".into() })
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'u') => {
                self.pos += 1;
                let at = self.pos;
                let i = self.integer()? as usize;
                if i == 0 || i > self.nvars {
                    return Err(Error::Parse {
                        offset: at,
                        message: format!("variable u{i} out of range 1..={}", self.nvars),
                    });
                }
                Ok(Polynomial::var(self.nvars, i - 1))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(Polynomial::constant(self.nvars, ScalarZ::z()))
            }
            Some(c) if c.is_ascii_digit() => {
                let whole = self.integer()?;
                let mut value = BigRational::from_integer(BigInt::from(whole));
                if self.src.get(self.pos) == Some(&b'.') {
                    self.pos += 1;
                    let fstart = self.pos;
                    let frac = self.integer()?;
                    let digits = (self.pos - fstart) as u32;
                    let scale = BigInt::from(10u32).pow(digits);
                    value += BigRational::new(BigInt::from(frac), scale);
                }
                Ok(Polynomial::constant(self.nvars, ScalarZ::from_q(value)))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn scalar_of(p: &Polynomial) -> Option<ScalarZ> {
    if p.is_zero() {
        return Some(ScalarZ::zero());
    }
    if p.len() == 1 {
        let (e, c) = p.terms().next().unwrap();
        if e.iter().all(|&a| a == 0) {
            return Some(c.clone());
        }
    }
    None
}
