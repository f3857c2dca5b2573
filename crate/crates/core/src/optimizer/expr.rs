//! Arithmetic expressions over decision variables and the reserved time
//! symbol `t`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := primary ("^" ["-"] primary)*      exponent must be a literal
//! primary := number | ident | ("exp" | "log") "(" expr ")" | "(" expr ")"
//! ```
//!
//! Operators of equal precedence associate to the left, so `2^3^2` is
//! `(2^3)^2`. Error positions are 1-based character offsets.

use std::fmt;

use serde::Serialize;

/// Name of the read-only time variable.
pub const TIME_SYMBOL: &str = "t";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Function {
    Exp,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Expr {
    Number(f64),
    /// Decision variable, by position in the declaration list.
    Variable {
        name: String,
        index: usize,
    },
    Time,
    Neg(Box<Expr>),
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    /// The exponent is always a literal.
    Pow {
        base: Box<Expr>,
        exponent: f64,
    },
    Call {
        function: Function,
        arg: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("expression is empty")]
    Empty,
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("undeclared identifier '{name}' at position {position}")]
    Undeclared { name: String, position: usize },
    #[error("unknown function '{name}' at position {position}")]
    UnknownFunction { name: String, position: usize },
    #[error("exponent at position {position} must be a number literal")]
    NonLiteralExponent { position: usize },
    #[error("'{0}' is reserved and cannot be declared as a variable")]
    ReservedName(String),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("log of nonpositive value {0}")]
    LogDomain(f64),
    #[error("non-finite result")]
    NonFinite,
    #[error("assignment has {found} values but variable index {index} was referenced")]
    MissingVariable { index: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Number(n) => write!(f, "number {n}"),
            Token::Ident(s) => write!(f, "identifier '{s}'"),
            Token::Plus => f.write_str("'+'"),
            Token::Minus => f.write_str("'-'"),
            Token::Star => f.write_str("'*'"),
            Token::Slash => f.write_str("'/'"),
            Token::Caret => f.write_str("'^'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
        }
    }
}

fn tokenize(source: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let position = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '/' => Some(Token::Slash),
            '^' => Some(Token::Caret),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            tokens.push((tok, position));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value = text
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError::Syntax {
                    position,
                    message: format!("malformed number '{text}'"),
                })?;
            tokens.push((Token::Number(value), position));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push((Token::Ident(chars[start..i].iter().collect()), position));
        } else {
            return Err(ParseError::Syntax {
                position,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
    declared: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(_, p)| p)
    }

    fn next(&mut self) -> Option<(Token, usize)> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        tok
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let message = match self.peek() {
            Some(tok) => format!("expected {expected}, found {tok}"),
            None => format!("expected {expected}, found end of input"),
        };
        ParseError::Syntax {
            position: self.position(),
            message,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Token::Plus) => BinaryOp::Add,
                Some(Token::Minus) => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Token::Star) => BinaryOp::Mul,
                Some(Token::Slash) => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let position = self.position();
            let negative = if self.peek() == Some(&Token::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            let exponent = match self.primary()? {
                Expr::Number(n) => n,
                _ => return Err(ParseError::NonLiteralExponent { position }),
            };
            base = Expr::Pow {
                base: Box::new(base),
                exponent: if negative { -exponent } else { exponent },
            };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Token::Number(_)) => {
                let Some((Token::Number(n), _)) = self.next() else {
                    unreachable!()
                };
                Ok(Expr::Number(n))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.unexpected("')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident(_)) => {
                let Some((Token::Ident(name), position)) = self.next() else {
                    unreachable!()
                };
                if self.peek() == Some(&Token::LParen) {
                    let function = match name.as_str() {
                        "exp" => Function::Exp,
                        "log" => Function::Log,
                        _ => return Err(ParseError::UnknownFunction { name, position }),
                    };
                    self.pos += 1;
                    let arg = self.expr()?;
                    if self.peek() != Some(&Token::RParen) {
                        return Err(self.unexpected("')'"));
                    }
                    self.pos += 1;
                    return Ok(Expr::Call {
                        function,
                        arg: Box::new(arg),
                    });
                }
                if name == TIME_SYMBOL {
                    return Ok(Expr::Time);
                }
                match self.declared.iter().position(|d| *d == name) {
                    Some(index) => Ok(Expr::Variable { name, index }),
                    None => Err(ParseError::Undeclared { name, position }),
                }
            }
            _ => Err(self.unexpected("a number, identifier or '('")),
        }
    }
}

/// Parses `source`, resolving identifiers against `declared` (plus `t`).
pub fn parse_expression(source: &str, declared: &[&str]) -> Result<Expr, ParseError> {
    if let Some(name) = declared.iter().find(|d| **d == TIME_SYMBOL) {
        return Err(ParseError::ReservedName((*name).to_string()));
    }
    let tokens = tokenize(source)?;
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: source.chars().count() + 1,
        declared,
    };
    let expr = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(expr)
}

fn finite(v: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

impl Expr {
    /// Evaluates with `values[i]` bound to the `i`-th declared variable.
    pub fn evaluate(&self, values: &[f64], t: f64) -> Result<f64, EvalError> {
        match self {
            Expr::Number(n) => Ok(*n),
            Expr::Variable { index, .. } => values.get(*index).copied().ok_or(EvalError::MissingVariable {
                index: *index,
                found: values.len(),
            }),
            Expr::Time => Ok(t),
            Expr::Neg(inner) => Ok(-inner.evaluate(values, t)?),
            Expr::Binary { op, lhs, rhs } => {
                let a = lhs.evaluate(values, t)?;
                let b = rhs.evaluate(values, t)?;
                match op {
                    BinaryOp::Add => finite(a + b),
                    BinaryOp::Sub => finite(a - b),
                    BinaryOp::Mul => finite(a * b),
                    BinaryOp::Div => {
                        if b == 0.0 {
                            Err(EvalError::DivisionByZero)
                        } else {
                            finite(a / b)
                        }
                    }
                }
            }
            Expr::Pow { base, exponent } => {
                let b = base.evaluate(values, t)?;
                if b == 0.0 && *exponent < 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                finite(b.powf(*exponent))
            }
            Expr::Call { function, arg } => {
                let x = arg.evaluate(values, t)?;
                match function {
                    Function::Exp => finite(x.exp()),
                    Function::Log => {
                        if x <= 0.0 {
                            Err(EvalError::LogDomain(x))
                        } else {
                            Ok(x.ln())
                        }
                    }
                }
            }
        }
    }

    /// Central-difference gradient with respect to every declared variable,
    /// step `1e-6·max(1, |x_i|)` per coordinate.
    pub fn gradient(&self, values: &[f64], t: f64) -> Result<Vec<f64>, EvalError> {
        let mut probe = values.to_vec();
        let mut grad = Vec::with_capacity(values.len());
        for i in 0..values.len() {
            let h = 1e-6 * values[i].abs().max(1.0);
            probe[i] = values[i] + h;
            let up = self.evaluate(&probe, t)?;
            probe[i] = values[i] - h;
            let down = self.evaluate(&probe, t)?;
            probe[i] = values[i];
            grad.push((up - down) / (2.0 * h));
        }
        Ok(grad)
    }
}

/// Functional rendering, e.g. `add(mul(2,x),3)`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(n) => write!(f, "{n}"),
            Expr::Variable { name, .. } => f.write_str(name),
            Expr::Time => f.write_str(TIME_SYMBOL),
            Expr::Neg(inner) => write!(f, "neg({inner})"),
            Expr::Binary { op, lhs, rhs } => {
                let name = match op {
                    BinaryOp::Add => "add",
                    BinaryOp::Sub => "sub",
                    BinaryOp::Mul => "mul",
                    BinaryOp::Div => "div",
                };
                write!(f, "{name}({lhs},{rhs})")
            }
            Expr::Pow { base, exponent } => write!(f, "pow({base},{exponent})"),
            Expr::Call { function, arg } => match function {
                Function::Exp => write!(f, "exp({arg})"),
                Function::Log => write!(f, "log({arg})"),
            },
        }
    }
}
