//! Parser for the textual form syntax used in instance files and JSON.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' integer]
//! atom   := rational | name | 'exp(' rational ')' | 'log(' integer ')' | '(' expr ')'
//! ```
//!
//! Odd generators multiply in the order written, so `dz2*dz1` parses to
//! `-dz1*dz2`.

use std::sync::Arc;

use super::form::Form;
use super::rational::{parse_rational, Q};
use super::universe::{Generator, Universe};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    u: &'a Arc<Universe>,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl<'a> Parser<'a> {
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(format!(
                "expected `{}` at offset {}",
                c as char, self.pos
            )))
        }
    }

    fn rational(&mut self) -> Result<Q> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        parse_rational(text).ok_or_else(|| err(format!("bad rational `{text}`")))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse()
            .map_err(|_| err(format!("bad integer `{text}`")))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8(self.src[start..self.pos].to_vec()).unwrap()
    }

    fn expr(&mut self) -> Result<Form> {
        let mut acc = Form::zero(self.u);
        let mut negate = self.eat(b'-');
        loop {
            let t = self.term()?;
            if negate {
                acc -= &t;
            } else {
                acc += &t;
            }
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Form> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Form> {
        let c = self.peek().ok_or_else(|| err("unexpected end of input"))?;
        let (atom, even_gen) = if c.is_ascii_digit() {
            (Form::constant(self.u, self.rational()?), None)
        } else if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            (e, None)
        } else if c.is_ascii_alphabetic() {
            let name = self.ident();
            match name.as_str() {
                "exp" => {
                    self.expect(b'(')?;
                    let a = self.rational()?;
                    self.expect(b')')?;
                    (Form::exp_symbol(self.u, a), None)
                }
                "log" => {
                    self.expect(b'(')?;
                    let p = self.rational()?;
                    self.expect(b')')?;
                    if p <= Q::from_integer(0.into()) {
                        return Err(err("log of a non-positive number"));
                    }
                    (Form::log_rational(self.u, &p), None)
                }
                _ => match self.u.find(&name) {
                    Some(Generator::Odd(i)) => (Form::odd(self.u, i), None),
                    Some(Generator::Even(i)) => (Form::even_power(self.u, i, 1), Some(i)),
                    None => return Err(err(format!("unknown generator `{name}`"))),
                },
            }
        } else {
            return Err(err(format!(
                "unexpected `{}` at offset {}",
                c as char, self.pos
            )));
        };
        if self.eat(b'^') {
            let k = self.integer()?;
            if let Some(i) = even_gen {
                let k = i16::try_from(k).map_err(|_| err("exponent out of range"))?;
                return Ok(Form::even_power(self.u, i, k));
            }
            if k < 0 {
                return Err(err("negative exponent on a non-generator factor"));
            }
            return Ok(atom.pow(k as u32));
        }
        Ok(atom)
    }
}

/// Parses a form written in the textual syntax.
pub fn parse_form(u: &Arc<Universe>, text: &str) -> Result<Form> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        u,
    };
    if p.peek().is_none() {
        return Ok(Form::zero(u));
    }
    let f = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at offset {}", p.pos)));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qr;

    #[test]
    fn parses_signs_and_wedges() {
        let u = Universe::base(2);
        let f = parse_form(&u, "3/2*z1*dz2 - dz2*dz1").unwrap();
        let expect = &(&Form::var(&u, "z1") * &Form::var(&u, "dz2")).scale(&qr(3, 2))
            + &(&Form::var(&u, "dz1") * &Form::var(&u, "dz2"));
        assert_eq!(f, expect);
    }

    #[test]
    fn render_roundtrip() {
        let u = Universe::builder()
            .base(2)
            .laurent("u")
            .imaginary_unit()
            .build()
            .unwrap();
        let f = parse_form(&u, "-u^-2*exp(-1/3)*log(12)*dz1 + 7*i*z2^3 + 1/5").unwrap();
        assert_eq!(parse_form(&u, &f.render()).unwrap(), f);
    }

    #[test]
    fn rejects_unknown_names() {
        let u = Universe::base(1);
        assert!(parse_form(&u, "w1").is_err());
        assert!(parse_form(&u, "z1 +").is_err());
    }
}
