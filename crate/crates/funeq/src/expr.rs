//! Parser and evaluator for initial-function expressions.
//!
//! Grammar: numeric literals (decimal, optional exponent), the variable
//! `x`, constants `pi` and `e`, unary minus, binary `+ - * / ^` with `^`
//! right-associative, and the functions `sin cos tan exp ln abs sqrt
//! floor frac`. Unary minus binds looser than `^`, so `-x^2` parses as
//! `-(x^2)`.

use std::fmt;

use thiserror::Error as ThisError;

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum ParseError {
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Abs,
    Sqrt,
    Floor,
    Frac,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Floor => "floor",
            Func::Frac => "frac",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "floor" => Func::Floor,
            "frac" => Func::Frac,
            _ => return None,
        })
    }
}

/// Abstract syntax tree of an initial-function expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Pi,
    E,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Parse an expression; errors carry exact byte positions.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens, at: 0 };
        let expr = parser.expr()?;
        match parser.peek() {
            TokenKind::Eof => Ok(expr),
            _ => Err(parser.unexpected("end of input")),
        }
    }

    /// Evaluate at `x`. Non-finite intermediate or final results are
    /// surfaced as domain errors.
    pub fn eval(&self, x: f64) -> Result<f64, Error> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Pi => std::f64::consts::PI,
            Expr::E => std::f64::consts::E,
            Expr::Neg(inner) => -inner.eval(x)?,
            Expr::Bin(op, lhs, rhs) => {
                let a = lhs.eval(x)?;
                let b = rhs.eval(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Domain(format!("division by zero at x={x}")));
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(func, arg) => {
                let a = arg.eval(x)?;
                match func {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => a.tan(),
                    Func::Exp => a.exp(),
                    Func::Ln => {
                        if a <= 0.0 {
                            return Err(Error::Domain(format!("ln of non-positive value {a}")));
                        }
                        a.ln()
                    }
                    Func::Abs => a.abs(),
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(Error::Domain(format!("sqrt of negative value {a}")));
                        }
                        a.sqrt()
                    }
                    Func::Floor => a.floor(),
                    Func::Frac => frac(a),
                }
            }
        };
        if !v.is_finite() {
            return Err(Error::Domain(format!("non-finite result at x={x}")));
        }
        Ok(v)
    }
}

/// Fraction part `x - floor(x)`, always in `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    // x just below an integer can round the difference up to exactly 1
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

// Precedence levels for printing: higher binds tighter.
fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

impl fmt::Display for Expr {
    /// The canonical form echoed in reports; `parse(print(e)) == e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, need: bool) -> fmt::Result {
            if need {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(v) => {
                if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) {
                    write!(f, "({v})")
                } else {
                    write!(f, "{v}")
                }
            }
            Expr::Var => write!(f, "x"),
            Expr::Pi => write!(f, "pi"),
            Expr::E => write!(f, "e"),
            Expr::Neg(inner) => {
                write!(f, "-")?;
                paren(f, inner, precedence(inner) < 3)
            }
            Expr::Bin(op, lhs, rhs) => {
                let prec = precedence(self);
                // the four arithmetic operators parse left-associative, so a
                // right child of equal precedence needs parentheses to keep
                // its structure; `^` is the reverse
                let (sym, rhs_needs) = match op {
                    BinOp::Add => ("+", precedence(rhs) <= prec),
                    BinOp::Sub => ("-", precedence(rhs) <= prec),
                    BinOp::Mul => ("*", precedence(rhs) <= prec),
                    BinOp::Div => ("/", precedence(rhs) <= prec),
                    BinOp::Pow => ("^", precedence(rhs) < prec),
                };
                let lhs_needs = match op {
                    BinOp::Pow => precedence(lhs) <= prec,
                    _ => precedence(lhs) < prec,
                };
                paren(f, lhs, lhs_needs)?;
                write!(f, "{sym}")?;
                paren(f, rhs, rhs_needs)
            }
            Expr::Call(func, arg) => write!(f, "{}({})", func.name(), arg),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let kind = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => TokenKind::Plus,
            b'-' => TokenKind::Minus,
            b'*' => TokenKind::Star,
            b'/' => TokenKind::Slash,
            b'^' => TokenKind::Caret,
            b'(' => TokenKind::LParen,
            b')' => TokenKind::RParen,
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
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
                let value: f64 = text[start..i].parse().map_err(|_| ParseError::Syntax {
                    position: start,
                    expected: "a numeric literal".to_string(),
                })?;
                tokens.push(Token { kind: TokenKind::Num(value), pos: start });
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(text[start..i].to_string()),
                    pos: start,
                });
                continue;
            }
            _ => {
                return Err(ParseError::Syntax {
                    position: i,
                    expected: "a number, identifier, operator or parenthesis".to_string(),
                })
            }
        };
        tokens.push(Token { kind, pos: i });
        i += 1;
    }
    tokens.push(Token { kind: TokenKind::Eof, pos: text.len() });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.at].kind
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            position: self.tokens[self.at].pos,
            expected: expected.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                TokenKind::Star => BinOp::Mul,
                TokenKind::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // factor handles unary minus so that `-x^2` becomes `-(x^2)`
    fn factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), TokenKind::Minus) {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), TokenKind::Caret) {
            self.bump();
            let exponent = self.factor()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            TokenKind::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek(), TokenKind::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            TokenKind::Ident(name) => {
                let pos = self.tokens[self.at].pos;
                self.bump();
                match name.as_str() {
                    "x" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Pi),
                    "e" => Ok(Expr::E),
                    _ => {
                        let Some(func) = Func::from_name(&name) else {
                            return Err(ParseError::UnknownIdentifier { name, position: pos });
                        };
                        if !matches!(self.peek(), TokenKind::LParen) {
                            return Err(self.unexpected("`(` after a function name"));
                        }
                        self.bump();
                        let arg = self.expr()?;
                        if !matches!(self.peek(), TokenKind::RParen) {
                            return Err(self.unexpected("`)`"));
                        }
                        self.bump();
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                }
            }
            _ => Err(self.unexpected("a number, `x`, a constant, a function, `(` or `-`")),
        }
    }
}
