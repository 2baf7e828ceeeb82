//! Polynomial coefficient literals: `x1^2 - 3/2*x2*x3 + 2*i`.

use std::fmt::Write;

use crate::expr::{Coeff, Factor, FieldKind, GradedExpr, Rational};

/// A parse failure at a byte offset of the literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: u8,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, LiteralError> {
        Err(LiteralError { offset: self.pos, message: message.into() })
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

    fn integer(&mut self) -> Result<i64, LiteralError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("number too large")
        })
    }

    fn expr(&mut self) -> Result<GradedExpr, LiteralError> {
        let mut acc = GradedExpr::zero();
        let mut sign = Coeff::one();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -Coeff::one();
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            acc += &self.term()?.scale(sign);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Coeff::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Coeff::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GradedExpr, LiteralError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GradedExpr, LiteralError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                self.power(e)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(GradedExpr::constant(Coeff::i()))
            }
            Some(b'x') => {
                self.pos += 1;
                let at = self.pos;
                let mu = self.integer()?;
                if mu < 1 || mu > self.dim as i64 {
                    self.pos = at;
                    return self.err(format!("coordinate index {mu} outside 1..={}", self.dim));
                }
                self.power(GradedExpr::coord(mu as u8))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut den = 1;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    den = self.integer()?;
                    if den == 0 {
                        self.pos = at;
                        return self.err("zero denominator");
                    }
                }
                Ok(GradedExpr::constant(Coeff::new(Rational::new(num, den), Rational::from_integer(0))))
            }
            Some(_) => self.err("expected a number, `i`, a coordinate `xN` or `(`"),
            None => self.err("unexpected end of literal"),
        }
    }

    fn power(&mut self, base: GradedExpr) -> Result<GradedExpr, LiteralError> {
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let k = self.integer()?;
        if k > 32 {
            self.pos = at;
            return self.err("exponent too large");
        }
        Ok(base.pow(k as u32))
    }
}

/// Parses a polynomial in the coordinates `x1..xn` with Gaussian rational coefficients.
pub fn parse_polynomial(text: &str, dim: u8) -> Result<GradedExpr, LiteralError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, dim };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Inverse of [`parse_polynomial`]; `None` unless `e` is a polynomial in the coordinates.
pub fn format_polynomial(e: &GradedExpr) -> Option<String> {
    if e.is_zero() {
        return Some("0".into());
    }
    let mut out = String::new();
    for (k, (m, c)) in e.terms().iter().enumerate() {
        let mut factors = Vec::new();
        let mut run: Option<(u8, u32)> = None;
        for f in m.factors() {
            let Factor::Jet(j) = f else { return None };
            if j.field != FieldKind::X || j.order != 0 {
                return None;
            }
            run = match run {
                Some((mu, n)) if mu == j.index => Some((mu, n + 1)),
                Some((mu, n)) => {
                    factors.push(power(mu, n));
                    Some((j.index, 1))
                }
                None => Some((j.index, 1)),
            };
        }
        if let Some((mu, n)) = run {
            factors.push(power(mu, n));
        }
        let (re, im) = (c.re, c.im);
        let negative = if im == Rational::from_integer(0) { re < Rational::from_integer(0) } else { false };
        let coef = if im == Rational::from_integer(0) {
            rational(&if negative { -re } else { re })
        } else if re == Rational::from_integer(0) {
            format!("{}*i", rational(&im))
        } else {
            format!("({} + {}*i)", rational(&re), rational(&im))
        };
        if k > 0 {
            out.push_str(if negative { " - " } else { " + " });
        } else if negative {
            out.push('-');
        }
        let unit = coef == "1";
        if factors.is_empty() {
            out.push_str(&coef);
        } else {
            if !unit {
                write!(out, "{coef}*").unwrap();
            }
            out.push_str(&factors.join("*"));
        }
    }
    Some(out)
}

fn power(mu: u8, n: u32) -> String {
    if n == 1 {
        format!("x{mu}")
    } else {
        format!("x{mu}^{n}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats() {
        let e = parse_polynomial("x1^2 - 3/2*x2*x3 + 2*i + (x1 + 1)*x2", 3).unwrap();
        let x = GradedExpr::coord;
        let want = x(1) * x(1) - (x(2) * x(3)).scale(Coeff::ratio(3, 2))
            + GradedExpr::constant(Coeff::i() * Coeff::int(2))
            + x(1) * x(2)
            + x(2);
        assert_eq!(e, want);
        let text = format_polynomial(&e).unwrap();
        assert_eq!(parse_polynomial(&text, 3).unwrap(), e);
    }

    #[test]
    fn reports_offsets() {
        let err = parse_polynomial("x1 + x7", 3).unwrap_err();
        assert_eq!(err.offset, 6);
        let err = parse_polynomial("x1 + * 2", 3).unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(parse_polynomial("1/0", 3).is_err());
    }

    #[test]
    fn rejects_jets() {
        assert_eq!(format_polynomial(&GradedExpr::jet(FieldKind::P, 1, 0)), None);
    }
}
