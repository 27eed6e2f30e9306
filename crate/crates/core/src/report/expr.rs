//! Arithmetic expressions for config values: numbers, `pi`, named
//! parameters, `+ - * /`, parentheses and `sqrt(..)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{HusError, Result};

/// Evaluate `src` with the given variable bindings.
pub fn eval(src: &str, vars: &BTreeMap<String, f64>) -> Result<f64> {
    let mut p = Parser { src, pos: 0, vars };
    let v = p.sum()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a BTreeMap<String, f64>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> HusError {
        HusError::Config(format!(
            "{msg} at column {} of {:?}",
            self.pos + 1,
            self.src
        ))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<f64> {
        let mut v = self.product()?;
        loop {
            if self.eat('+') {
                v += self.product()?;
            } else if self.eat('-') {
                v -= self.product()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn product(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v *= self.unary()?;
            } else if self.eat('/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<f64> {
        self.skip_ws();
        if self.eat('(') {
            let v = self.sum()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(v);
        }
        let rest = &self.src[self.pos..];
        let c = rest
            .chars()
            .next()
            .ok_or_else(|| self.error("unexpected end"))?;
        if c.is_ascii_digit() || c == '.' {
            let len = number_len(rest);
            let v = rest[..len]
                .parse::<f64>()
                .map_err(|_| self.error("malformed number"))?;
            self.pos += len;
            return Ok(v);
        }
        if c.is_alphabetic() || c == '_' {
            let len = rest
                .char_indices()
                .find(|(_, c)| !(c.is_alphanumeric() || *c == '_'))
                .map_or(rest.len(), |(i, _)| i);
            let name = &rest[..len];
            self.pos += len;
            if name == "sqrt" {
                if !self.eat('(') {
                    return Err(self.error("expected '(' after sqrt"));
                }
                let v = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                return Ok(v.sqrt());
            }
            if name == "pi" {
                return Ok(PI);
            }
            return self
                .vars
                .get(name)
                .copied()
                .ok_or_else(|| self.error(&format!("unknown name '{name}'")));
        }
        Err(self.error("unexpected character"))
    }
}

fn number_len(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
        i += 1;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}
