//! Parser for the expression syntax:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | '(' expr ')' | 'adj' '(' expr ')'
//!         | 'p' '(' id ')' | 's' '(' id ')' | 's' '*' '(' id ')'
//!         | number
//! number := digits ['/' digits] ['i'] | 'i'
//! ```
//!
//! Whitespace-insensitive. `1` is the unit, complex-rational literals look
//! like `3/2+1/3i`. Generator arguments are raw identifiers read up to the
//! matching `)`, so composite names such as `g(e+f)` stay intact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::hypergraph::{EdgeId, VertexId};
use crate::scalar::Scalar;
use crate::star::StarExpression;

use super::SyntaxError;

pub fn parse_expression(input: &str) -> Result<StarExpression, SyntaxError> {
    let mut p = ExprParser {
        chars: input.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.error("end of expression"));
    }
    Ok(expr)
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl ExprParser {
    fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError {
            line: self.line,
            col: self.col,
            expected: expected.to_owned(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn expr(&mut self) -> Result<StarExpression, SyntaxError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<StarExpression, SyntaxError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<StarExpression, SyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(self.factor()?.scale(&(-Scalar::one())))
            }
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_alphabetic() || c == '_' => {
                let word = self.word();
                match word.as_str() {
                    "i" => Ok(StarExpression::one().scale(&Scalar::i())),
                    "adj" => {
                        self.expect('(')?;
                        let inner = self.expr()?;
                        self.expect(')')?;
                        Ok(inner.adjoint())
                    }
                    "p" => {
                        self.expect('(')?;
                        let id = self.raw_argument()?;
                        Ok(StarExpression::proj(&VertexId::new(id)))
                    }
                    "s" => {
                        let starred = self.eat('*');
                        self.expect('(')?;
                        let id = self.raw_argument()?;
                        let e = EdgeId::new(id);
                        Ok(if starred {
                            StarExpression::iso_star(&e)
                        } else {
                            StarExpression::iso(&e)
                        })
                    }
                    _ => Err(self.error(&format!("'p', 's', 'adj', or 'i', found '{word}'"))),
                }
            }
            _ => Err(self.error("a factor: generator, literal, or '('")),
        }
    }

    fn word(&mut self) -> String {
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        word
    }

    /// Everything up to the matching `)`, parens balanced, trimmed.
    fn raw_argument(&mut self) -> Result<String, SyntaxError> {
        let mut depth = 0usize;
        let mut arg = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error("')'")),
                Some('(') => {
                    depth += 1;
                    arg.push('(');
                    self.bump();
                }
                Some(')') => {
                    if depth == 0 {
                        self.bump();
                        let trimmed = arg.trim();
                        if trimmed.is_empty() {
                            return Err(self.error("identifier"));
                        }
                        return Ok(trimmed.to_owned());
                    }
                    depth -= 1;
                    arg.push(')');
                    self.bump();
                }
                Some(c) => {
                    arg.push(c);
                    self.bump();
                }
            }
        }
    }

    fn digits(&mut self) -> Result<BigInt, SyntaxError> {
        let mut text = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            text.push(self.bump().expect("digit"));
        }
        if text.is_empty() {
            return Err(self.error("digits"));
        }
        Ok(text.parse().expect("decimal digits"))
    }

    fn number(&mut self) -> Result<StarExpression, SyntaxError> {
        let numer = self.digits()?;
        let denom = if self.peek() == Some('/') {
            self.bump();
            let d = self.digits()?;
            if d.is_zero() {
                return Err(self.error("nonzero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        let value = BigRational::new(numer, denom);
        let scalar = if self.peek() == Some('i') {
            self.bump();
            Scalar::new(BigRational::zero(), value)
        } else {
            Scalar::new(value, BigRational::zero())
        };
        Ok(StarExpression::one().scale(&scalar))
    }
}
