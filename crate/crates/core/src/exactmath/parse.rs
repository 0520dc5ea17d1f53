//! Expression grammar shared by every file format.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor | factor)*      juxtaposition multiplies
//! factor  := ('+' | '-') factor | primary ('^' integer)?
//! primary := integer | identifier | '(' expr ')'
//! ```
//!
//! The field generator (`t` by default, `i` as well over `Q(i)`) denotes the
//! scalar `t`; other identifiers must be declared symbols.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::FieldSpec;
use super::poly::{PolyExpr, Symbol};
use super::ratexpr::RatExpr;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(text[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { offset: i, message: format!("unexpected character {:?}", c) });
        }
    }
    Ok(out)
}

struct Parser<'a, F: Fn(&str) -> bool> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: &'a Arc<FieldSpec>,
    known: F,
}

impl<F: Fn(&str) -> bool> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatExpr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.factor()?;
                acc = acc.checked_div(&d).map_err(|_| Error::Syntax { offset: at, message: "division by zero".into() })?;
            } else if matches!(self.peek(), Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RatExpr> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.primary()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<RatExpr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RatExpr::constant(Scalar::rational(BigRational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let f = self.field;
                if !f.is_rational() && (name == f.generator() || (name == "i" && f.is_gaussian())) {
                    Ok(RatExpr::constant(Scalar::generator(f)))
                } else if (self.known)(&name) {
                    Ok(RatExpr::from_poly(PolyExpr::var(Symbol::new(&name))))
                } else {
                    Err(Error::UnknownSymbol(name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected {:?}", t)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse with a predicate deciding which identifiers are symbols.
pub fn parse_with(text: &str, field: &Arc<FieldSpec>, known: impl Fn(&str) -> bool) -> Result<RatExpr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), field, known };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse an expression over the given symbol table.
pub fn parse_expr(text: &str, symbols: &[Symbol], field: &Arc<FieldSpec>) -> Result<RatExpr> {
    parse_with(text, field, |name| symbols.iter().any(|s| s.name() == name))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(names: &[&str]) -> Vec<Symbol> {
        names.iter().map(|s| Symbol::new(s)).collect()
    }

    fn gauss() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::gaussian())
    }

    #[test]
    fn fraction_with_constant_denominator() {
        let e = parse_expr("-(a1^2+a1*a3)/2", &syms(&["a1", "a3"]), &gauss()).unwrap();
        let a1 = RatExpr::var("a1");
        let a3 = RatExpr::var("a3");
        let expected = (&a1 * &a1 + &a1 * &a3).scale(&Scalar::ratio(-1, 2));
        assert_eq!(e, expected);
        assert!(e.den().is_one());
    }

    #[test]
    fn literals_and_generator() {
        let f = gauss();
        assert_eq!(parse_expr("1/2", &[], &f).unwrap(), RatExpr::constant(Scalar::ratio(1, 2)));
        assert_eq!(parse_expr("t^2", &[], &f).unwrap(), RatExpr::int(-1));
        assert_eq!(parse_expr("i", &[], &f).unwrap(), parse_expr("t", &[], &f).unwrap());
    }

    #[test]
    fn implicit_multiplication() {
        let s = syms(&["a1", "a2"]);
        let f = gauss();
        assert_eq!(parse_expr("2 a1 a2", &s, &f).unwrap(), parse_expr("2*a1*a2", &s, &f).unwrap());
        assert_eq!(parse_expr("-a1^2/a2", &s, &f).unwrap(), parse_expr("-(a1*a1)/(a2)", &s, &f).unwrap());
    }

    #[test]
    fn errors() {
        let f = gauss();
        assert_eq!(parse_expr("a9", &[], &f), Err(Error::UnknownSymbol("a9".into())));
        assert!(matches!(parse_expr("1 + ", &[], &f), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse_expr("(1", &[], &f), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr("1 $", &[], &f), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr("x^y", &syms(&["x", "y"]), &f), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("1/0", &[], &f), Err(Error::Syntax { .. })));
    }

    #[test]
    fn render_round_trip() {
        let s = syms(&["a1", "a2", "k"]);
        let f = gauss();
        for text in ["(a1 - t*a2)/(k^2 + 1)", "-1/2*a1^2*k + (2 + t)", "a1/(a2 - a1) - k/3"] {
            let e = parse_expr(text, &s, &f).unwrap();
            let back = parse_expr(&e.to_string(), &s, &f).unwrap();
            assert_eq!(e, back, "{} -> {}", text, e);
        }
    }
}
