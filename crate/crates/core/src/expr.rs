//! Recursive-descent parser for polynomial expressions in θ and named
//! variables, used by field specs and by polynomial fixtures.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Fe, NumberField};
use crate::poly::Poly;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    nf: Option<&'static NumberField>,
    names: &'a [String],
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<char> {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                '/' => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(err("division only by non-zero constants"));
                    }
                    let inv = d.constant_term().inv().ok_or_else(|| err("division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let e = self.integer()?;
                    let e: u32 = e.try_into().map_err(|_| err("exponent too large"))?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.peek();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(format!("expected integer at {start}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            None => Err(err("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(err("missing ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::constant(Fe::from_rational(BigRational::from_integer(n))))
            }
            Some(c) if c.is_alphabetic() || c == 'θ' => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == 'θ') {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                if let Some(i) = self.names.iter().position(|n| *n == ident) {
                    return Ok(Poly::var(i));
                }
                match ident.as_str() {
                    "θ" | "t" | "theta" => {
                        let nf = self.nf.ok_or_else(|| err("θ used without a field"))?;
                        Ok(Poly::constant(nf.theta()))
                    }
                    _ => Err(err(format!("unknown identifier {ident:?}"))),
                }
            }
            Some(c) => Err(err(format!("unexpected character {c:?}"))),
        }
    }
}

pub fn parse_poly(s: &str, nf: Option<&'static NumberField>, names: &[String]) -> Result<Poly> {
    let mut p = Parser { chars: s.chars().collect(), pos: 0, nf, names };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at {}", p.pos)));
    }
    Ok(e)
}

pub fn parse_constant(s: &str, nf: Option<&'static NumberField>) -> Result<Fe> {
    let p = parse_poly(s, nf, &[])?;
    Ok(p.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_field_expressions() {
        let nf = NumberField::intern(&[-2, 0, 1], None).unwrap();
        let a = parse_constant("(1 + θ)^2 / 2", Some(nf)).unwrap();
        // (1 + 2θ + 2)/2
        assert_eq!(a, Fe::from_ratio(3, 2).add(&nf.theta()));
        assert!(parse_constant("θ", None).is_err());
        assert!(parse_constant("1 +", None).is_err());
    }

    #[test]
    fn parses_polynomials() {
        let names = vec!["a".to_string(), "b".to_string()];
        let p = parse_poly("a*b - 2*b^2/3", None, &names).unwrap();
        assert_eq!(p.to_string_with(&names), "a*b - 2/3*b^2");
    }
}
