//! Tokenizer and precedence parser for the infix expression language shared
//! by field elements (`(t^2 + 1)/(2*t)`) and catalog functions
//! (`sqrt(1 - x^2)`, `x^(3/2)`).
//!
//! The parser only builds an untyped [`Ast`]; each consumer lowers it into its
//! own representation and rejects constructs it does not support.

use std::fmt;

use crate::rational::{parse_rational, Rational};

/// Maximum nesting depth accepted by the parser.
pub const MAX_DEPTH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Number(Rational),
    Ident(String),
    Call(String, Vec<Ast>),
    Neg(Box<Ast>),
    Binary(BinOp, Box<Ast>, Box<Ast>),
}

/// Error with a 1-based column into the parsed text.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: expected {}, found {found}", expected.join(" or "))]
pub struct SyntaxError {
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(r) => write!(f, "number `{r}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            let value = parse_rational(&lit).ok_or_else(|| SyntaxError {
                column: col,
                expected: vec!["number".into()],
                found: format!("`{lit}`"),
            })?;
            out.push((Tok::Num(value), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else if c == '−' {
            out.push((Tok::Sym('-'), col));
            i += 1;
        } else {
            return Err(SyntaxError {
                column: col,
                expected: vec!["expression".into()],
                found: format!("`{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        SyntaxError {
            column: self.column(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn enter(&mut self) -> Result<(), SyntaxError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(SyntaxError {
                column: self.column(),
                expected: vec![format!("nesting depth at most {MAX_DEPTH}")],
                found: "deeper expression".into(),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Ast, SyntaxError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast, SyntaxError> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                self.enter()?;
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(match inner {
                    Ast::Number(r) => Ast::Number(-r),
                    other => Ast::Neg(Box::new(other)),
                })
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast, SyntaxError> {
        let base = self.atom()?;
        if let Tok::Sym('^') = self.peek() {
            self.bump();
            self.enter()?;
            let exponent = self.unary()?;
            self.depth -= 1;
            return Ok(Ast::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, SyntaxError> {
        match self.peek().clone() {
            Tok::Num(r) => {
                self.bump();
                Ok(Ast::Number(r))
            }
            Tok::Ident(name) => {
                self.bump();
                if let Tok::Sym('(') = self.peek() {
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while let Tok::Sym(',') = self.peek() {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    Ok(Ast::Call(name, args))
                } else {
                    Ok(Ast::Ident(name))
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => Err(self.error(&["number", "identifier", "`(`", "`-`"])),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            let mut expected = vec![format!("`{c}`")];
            if c == ')' {
                expected.extend(["operator".to_string(), "`,`".to_string()]);
            }
            Err(SyntaxError {
                column: self.column(),
                expected,
                found: self.peek().to_string(),
            })
        }
    }
}

/// Parses a complete expression.
pub fn parse(text: &str) -> Result<Ast, SyntaxError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn precedence() {
        let ast = parse("1 + 2*x^2").unwrap();
        let expected = Ast::Binary(
            BinOp::Add,
            Box::new(Ast::Number(int(1))),
            Box::new(Ast::Binary(
                BinOp::Mul,
                Box::new(Ast::Number(int(2))),
                Box::new(Ast::Binary(
                    BinOp::Pow,
                    Box::new(Ast::Ident("x".into())),
                    Box::new(Ast::Number(int(2))),
                )),
            )),
        );
        assert_eq!(ast, expected);
    }

    #[test]
    fn negative_literal_folds() {
        assert_eq!(parse("-1/2").unwrap(), Ast::Binary(BinOp::Div, Box::new(Ast::Number(int(-1))), Box::new(Ast::Number(int(2)))));
        assert_eq!(parse("x^-2").unwrap(), Ast::Binary(BinOp::Pow, Box::new(Ast::Ident("x".into())), Box::new(Ast::Number(int(-2)))));
        assert_eq!(parse("0.25").unwrap(), Ast::Number(frac(1, 4)));
    }

    #[test]
    fn calls_and_errors() {
        assert!(matches!(parse("sin(x)").unwrap(), Ast::Call(ref n, ref a) if n == "sin" && a.len() == 1));
        let err = parse("(x + 1").unwrap_err();
        assert_eq!(err.column, 7);
        let err = parse("x + * 2").unwrap_err();
        assert_eq!(err.column, 5);
        assert!(parse("x $ 2").is_err());
    }

    #[test]
    fn depth_limit() {
        let deep = format!("{}x{}", "(".repeat(70), ")".repeat(70));
        assert!(parse(&deep).is_err());
        let ok = format!("{}x{}", "(".repeat(30), ")".repeat(30));
        assert!(parse(&ok).is_ok());
    }
}
