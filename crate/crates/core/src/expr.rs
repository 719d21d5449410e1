//! A small arithmetic expression language for weight rules in one integer
//! variable `n`.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" unary)?          right-associative
//! atom   := number | "n" | name | func "(" expr ")" | "(" expr ")"
//! func   := abs | sqrt | sign | exp | ln
//! ```
//!
//! Named constants (for example `alpha`) are bound when parsing. `sign(0)` is 0.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("unexpected {found} at offset {at} in {src:?}")]
    Unexpected { found: String, at: usize, src: String },
    #[error("unknown name {name:?} in {src:?}")]
    UnknownName { name: String, src: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Abs,
    Sqrt,
    Sign,
    Exp,
    Ln,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    fn eval(&self, n: f64) -> f64 {
        match self {
            Node::Num(x) => *x,
            Node::Var => n,
            Node::Neg(a) => -a.eval(n),
            Node::Add(a, b) => a.eval(n) + b.eval(n),
            Node::Sub(a, b) => a.eval(n) - b.eval(n),
            Node::Mul(a, b) => a.eval(n) * b.eval(n),
            Node::Div(a, b) => a.eval(n) / b.eval(n),
            Node::Pow(a, b) => pow(a.eval(n), b.eval(n)),
            Node::Call(f, a) => {
                let x = a.eval(n);
                match f {
                    Func::Abs => x.abs(),
                    Func::Sqrt => x.sqrt(),
                    Func::Sign => {
                        if x > 0.0 {
                            1.0
                        } else if x < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                    }
                    Func::Exp => x.exp(),
                    Func::Ln => x.ln(),
                }
            }
        }
    }
}

/// Integer exponents use repeated squaring so that `3^2` is exactly 9.
fn pow(base: f64, exp: f64) -> f64 {
    if exp.fract() == 0.0 && exp.abs() <= i32::MAX as f64 {
        base.powi(exp as i32)
    } else {
        base.powf(exp)
    }
}

/// A parsed rule `n ↦ value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    src: String,
    root: Node,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self, ExprError> {
        Self::parse_with(src, &[])
    }

    /// Parses with named constants in scope.
    pub fn parse_with(src: &str, constants: &[(&str, f64)]) -> Result<Self, ExprError> {
        let tokens = tokenize(src)?;
        let mut p = Parser {
            src,
            tokens,
            pos: 0,
            constants,
        };
        let root = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(p.unexpected(t));
        }
        Ok(Self {
            src: src.to_string(),
            root,
        })
    }

    pub fn constant(value: f64) -> Self {
        Self {
            src: format!("{value}"),
            root: Node::Num(value),
        }
    }

    pub fn eval(&self, n: i64) -> f64 {
        self.root.eval(n as f64)
    }

    pub fn source(&self) -> &str {
        &self.src
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    tok: Tok,
    at: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let value = text.parse().map_err(|_| ExprError::Unexpected {
                found: format!("number {text:?}"),
                at: start,
                src: src.to_string(),
            })?;
            out.push(Token {
                tok: Tok::Num(value),
                at: start,
            });
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                at: start,
            });
        } else if "+-*/^()".contains(ch) {
            out.push(Token {
                tok: Tok::Op(ch),
                at: i,
            });
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(ExprError::Unexpected {
                found: format!("character {ch:?}"),
                at: i,
                src: src.to_string(),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    constants: &'a [(&'a str, f64)],
}

impl Parser<'_> {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).cloned()
    }

    fn eat(&mut self, op: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Op(c), .. }) if c == op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, t: Token) -> ExprError {
        let found = match t.tok {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("name {s:?}"),
            Tok::Op(c) => format!("{c:?}"),
        };
        ExprError::Unexpected {
            found,
            at: t.at,
            src: self.src.to_string(),
        }
    }

    fn end(&self) -> ExprError {
        ExprError::Unexpected {
            found: "end of input".into(),
            at: self.src.len(),
            src: self.src.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat('-') {
            Ok(Node::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            Ok(Node::Pow(Box::new(base), Box::new(self.unary()?)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        let t = self.peek().ok_or_else(|| self.end())?;
        self.pos += 1;
        match t.tok {
            Tok::Num(x) => Ok(Node::Num(x)),
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.peek().map_or_else(|| self.end(), |t| self.unexpected(t)));
                }
                Ok(inner)
            }
            Tok::Ident(name) => {
                let func = match name.as_str() {
                    "abs" => Some(Func::Abs),
                    "sqrt" => Some(Func::Sqrt),
                    "sign" => Some(Func::Sign),
                    "exp" => Some(Func::Exp),
                    "ln" => Some(Func::Ln),
                    _ => None,
                };
                if let Some(func) = func {
                    if !self.eat('(') {
                        return Err(self.peek().map_or_else(|| self.end(), |t| self.unexpected(t)));
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.peek().map_or_else(|| self.end(), |t| self.unexpected(t)));
                    }
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                if name == "n" {
                    return Ok(Node::Var);
                }
                self.constants
                    .iter()
                    .find(|(k, _)| *k == name)
                    .map(|&(_, v)| Node::Num(v))
                    .ok_or(ExprError::UnknownName {
                        name,
                        src: self.src.to_string(),
                    })
            }
            Tok::Op(_) => Err(self.unexpected(t)),
        }
    }
}
