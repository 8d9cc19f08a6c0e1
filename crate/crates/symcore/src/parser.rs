//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' integer)?
//! base   := number | identifier | '(' expr ')'
//! ```
//!
//! Numbers may carry a decimal point (`1.25` is read as `5/4`). Positions in
//! errors are character offsets into the input.

use num_bigint::BigInt;
use num_traits::Num;

use crate::context::VariableContext;
use crate::error::{Result, SymError};
use crate::expr::Expr;
use crate::poly::Coeff;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number { value: Coeff, integral: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() || d == '.' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let int_part: String = chars[start..i].iter().collect();
                let mut frac = String::new();
                let mut integral = true;
                if i < chars.len() && chars[i] == '.' {
                    integral = false;
                    i += 1;
                    let fs = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    frac = chars[fs..i].iter().collect();
                }
                if int_part.is_empty() && frac.is_empty() {
                    return Err(SymError::SyntaxError {
                        position: start,
                        message: "malformed number".into(),
                    });
                }
                let digits = format!("{int_part}{frac}");
                let n = BigInt::from_str_radix(&digits, 10).map_err(|_| SymError::SyntaxError {
                    position: start,
                    message: "malformed number".into(),
                })?;
                let d = num_traits::pow(BigInt::from(10), frac.len());
                out.push((
                    Tok::Number {
                        value: Coeff::new(n, d),
                        integral,
                    },
                    start,
                ));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            other => {
                return Err(SymError::SyntaxError {
                    position: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a VariableContext,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn position(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::sum(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::difference(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::product(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::quotient(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.factor()?;
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::product(Expr::integer(-1), other),
            });
        }
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp_pos = self.position();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            (
                Tok::Number {
                    value,
                    integral: true,
                },
                _,
            ) => {
                let e: i64 = value
                    .to_integer()
                    .try_into()
                    .map_err(|_| SymError::SyntaxError {
                        position: exp_pos,
                        message: "exponent too large".into(),
                    })?;
                Ok(Expr::power(base, if negative { -e } else { e }))
            }
            (Tok::Number { .. }, _) | (Tok::Ident(_), _) | (Tok::LParen, _) => {
                Err(SymError::NonIntegerExponent { position: exp_pos })
            }
            (_, p) => Err(SymError::SyntaxError {
                position: p,
                message: "expected an integer exponent".into(),
            }),
        }
    }

    fn base(&mut self) -> Result<Expr> {
        match self.bump() {
            (Tok::Number { value, .. }, _) => Ok(Expr::Const(value)),
            (Tok::Ident(name), p) => match self.ctx.lookup(&name) {
                Some(id) => Ok(Expr::Var(id)),
                None => Err(SymError::UnknownIdentifier { name, position: p }),
            },
            (Tok::LParen, _) => {
                let e = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(e),
                    (_, p) => Err(SymError::SyntaxError {
                        position: p,
                        message: "expected `)`".into(),
                    }),
                }
            }
            (Tok::End, p) => Err(SymError::SyntaxError {
                position: p,
                message: "unexpected end of input".into(),
            }),
            (_, p) => Err(SymError::SyntaxError {
                position: p,
                message: "expected a number, identifier or `(`".into(),
            }),
        }
    }
}

/// Parses `text` against the variables declared in `ctx`.
pub fn parse_expression(text: &str, ctx: &VariableContext) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, ctx };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(SymError::SyntaxError {
            position: p.position(),
            message: "unexpected trailing input".into(),
        }),
    }
}
