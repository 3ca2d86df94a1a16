use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::SymbolicError;
use crate::poly::Polynomial;
use crate::Q;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, SymbolicError> {
    let bytes = s.as_bytes();
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
            let n: BigInt = s[start..i].parse().unwrap();
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(SymbolicError::Parse {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
    allowed: Option<&'a [String]>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: &str) -> Result<T, SymbolicError> {
        Err(SymbolicError::Parse {
            pos: self.pos(),
            msg: msg.to_string(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    // A leading minus sign is accepted at the start of an expression.
    fn expr(&mut self) -> Result<Polynomial, SymbolicError> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
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

    fn term(&mut self) -> Result<Polynomial, SymbolicError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, SymbolicError> {
        let base = self.base()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.at += 1;
                    let k: u32 = n.try_into().map_err(|_| SymbolicError::Parse {
                        pos: self.pos(),
                        msg: "exponent too large".into(),
                    })?;
                    Ok(base.pow(k))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Polynomial, SymbolicError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.at += 1;
                            Ok(Polynomial::constant(Q::new(n, d)))
                        }
                        _ => self.err("expected a positive integer denominator"),
                    }
                } else {
                    Ok(Polynomial::constant(Q::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                if let Some(allowed) = self.allowed {
                    if !allowed.contains(&name) {
                        return Err(SymbolicError::UnknownVariable(name));
                    }
                }
                self.at += 1;
                Ok(Polynomial::var(&name))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            _ => self.err("expected a number, identifier or `(`"),
        }
    }
}

fn run(s: &str, allowed: Option<&[String]>) -> Result<Polynomial, SymbolicError> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks,
        at: 0,
        len: s.len(),
        allowed,
    };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses an expression; variables are declared in order of first appearance.
pub fn parse(s: &str) -> Result<Polynomial, SymbolicError> {
    let toks = tokenize(s)?;
    let mut order: Vec<String> = Vec::new();
    for (_, t) in &toks {
        if let Tok::Ident(n) = t {
            if !order.contains(n) {
                order.push(n.clone());
            }
        }
    }
    Ok(run(s, None)?.aligned(&order))
}

/// Parses an expression over a fixed variable list; other identifiers are rejected.
pub fn parse_in(s: &str, vars: &[String]) -> Result<Polynomial, SymbolicError> {
    Ok(run(s, Some(vars))?.aligned(vars))
}

/// Parses an exact rational literal, optionally signed.
pub fn parse_rational(s: &str) -> Result<Q, SymbolicError> {
    let p = run(s, Some(&[]))?;
    p.as_constant().ok_or(SymbolicError::Parse {
        pos: 0,
        msg: "expected a rational".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qr};

    #[test]
    fn grammar_basics() {
        let p = parse("2*(a + b)^2 - 3/4*c").unwrap();
        assert_eq!(p.vars(), ["a", "b", "c"]);
        assert_eq!(
            p,
            parse("2*a^2 + 4*a*b + 2*b^2 - 3/4*c").unwrap()
        );
    }

    #[test]
    fn rejects_implicit_multiplication_and_division() {
        assert!(parse("2a").is_err());
        assert!(parse("a b").is_err());
        assert!(parse("a/2").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("a^-1").is_err());
        assert!(parse("(a").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn fixed_variable_list() {
        let vars = vec!["a".to_string(), "b".to_string()];
        assert_eq!(parse_in("b", &vars).unwrap().vars(), ["a", "b"]);
        assert_eq!(
            parse_in("c", &vars),
            Err(SymbolicError::UnknownVariable("c".into()))
        );
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), qr(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert!(parse_rational("a").is_err());
    }

    #[test]
    fn identifiers_with_digits_and_underscores() {
        let p = parse("a_1*a2 + E_x").unwrap();
        assert_eq!(p.vars(), ["a_1", "a2", "E_x"]);
    }
}
