//! Expression syntax shared by element I/O, places and the CLI config.
//!
//! Grammar: integers, the field generator `g`, the variable `t`, `+ - * / ^`
//! and parentheses. Juxtaposition multiplies (`2t^2`, `gt`). Exponents are
//! integers and may be negative.

use super::error::AlgebraError;
use super::field::FieldDescriptor;
use super::ratfunc::RationalFunction;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(char),
    Op(char),
}

fn err(pos: usize, msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                s.push(chars[i].1);
                i += 1;
            }
            out.push((pos, Tok::Num(s)));
        } else if c == 'g' || c == 't' {
            out.push((pos, Tok::Ident(c)));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(pos, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a FieldDescriptor,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<RationalFunction, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| err(pos, "division by zero"))?;
            } else if self.starts_primary() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction, AlgebraError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction, AlgebraError> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        let pos = self.pos();
        self.at += 1;
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.toks.get(self.at) {
            Some((_, Tok::Num(s))) => {
                let v: i64 = s.parse().map_err(|_| err(self.pos(), "exponent too large"))?;
                self.at += 1;
                v
            }
            _ => return Err(err(self.pos(), "expected integer exponent")),
        };
        if paren && !self.eat(')') {
            return Err(err(self.pos(), "expected ')'"));
        }
        let e = if neg { -e } else { e };
        base.pow(e).map_err(|_| err(pos, "negative power of zero"))
    }

    fn primary(&mut self) -> Result<RationalFunction, AlgebraError> {
        let pos = self.pos();
        let f = self.field;
        match self.toks.get(self.at).cloned() {
            Some((_, Tok::Num(s))) => {
                self.at += 1;
                let p = f.p() as u64;
                let r = s.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
                Ok(RationalFunction::constant(f, r as u32))
            }
            Some((_, Tok::Ident('t'))) => {
                self.at += 1;
                Ok(RationalFunction::t(f))
            }
            Some((_, Tok::Ident(_))) => {
                self.at += 1;
                if f.is_prime_field() {
                    return Err(err(pos, "a prime field has no generator 'g'"));
                }
                Ok(RationalFunction::constant(f, f.generator()))
            }
            Some((_, Tok::Op('('))) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.pos(), "expected ')'"));
                }
                Ok(inner)
            }
            Some((_, Tok::Op(c))) => Err(err(pos, format!("unexpected '{c}'"))),
            None => Err(err(pos, "unexpected end of input")),
        }
    }
}

/// Parses an expression into a rational function over `field`.
pub fn parse_expr(field: &FieldDescriptor, text: &str) -> Result<RationalFunction, AlgebraError> {
    let toks = lex(text)?;
    let mut p = Parser { field, toks, at: 0, end: text.len() };
    let r = p.expr()?;
    if p.at != p.toks.len() {
        return Err(err(p.pos(), "trailing input"));
    }
    Ok(r)
}
