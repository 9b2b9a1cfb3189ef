//! Arithmetic expressions in one variable `k`, for user-supplied clock
//! rate profiles: `+ - * / ^`, parentheses, unary minus, and the functions
//! sqrt, cosh, sinh, tanh, exp, ln, abs, sin, cos. Parsed by recursive
//! descent into a small AST that evaluates without further allocation.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Function {
    Sqrt,
    Cosh,
    Sinh,
    Tanh,
    Exp,
    Ln,
    Abs,
    Sin,
    Cos,
}

impl Function {
    fn from_name(name: &str) -> Option<Function> {
        Some(match name {
            "sqrt" => Function::Sqrt,
            "cosh" => Function::Cosh,
            "sinh" => Function::Sinh,
            "tanh" => Function::Tanh,
            "exp" => Function::Exp,
            "ln" => Function::Ln,
            "abs" => Function::Abs,
            "sin" => Function::Sin,
            "cos" => Function::Cos,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Function::Sqrt => x.sqrt(),
            Function::Cosh => x.cosh(),
            Function::Sinh => x.sinh(),
            Function::Tanh => x.tanh(),
            Function::Exp => x.exp(),
            Function::Ln => x.ln(),
            Function::Abs => x.abs(),
            Function::Sin => x.sin(),
            Function::Cos => x.cos(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Expr {
    Number(f64),
    Variable,
    Negate(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Subtract(Box<Expr>, Box<Expr>),
    Multiply(Box<Expr>, Box<Expr>),
    Divide(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, Box<Expr>),
    Call(Function, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, k: f64) -> f64 {
        match self {
            Expr::Number(x) => *x,
            Expr::Variable => k,
            Expr::Negate(e) => -e.eval(k),
            Expr::Add(a, b) => a.eval(k) + b.eval(k),
            Expr::Subtract(a, b) => a.eval(k) - b.eval(k),
            Expr::Multiply(a, b) => a.eval(k) * b.eval(k),
            Expr::Divide(a, b) => a.eval(k) / b.eval(k),
            Expr::Power(a, b) => a.eval(k).powf(b.eval(k)),
            Expr::Call(f, e) => f.apply(e.eval(k)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Identifier(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

struct Lexer<'a> {
    source: &'a [u8],
    position: usize,
}

impl<'a> Lexer<'a> {
    fn new(source: &'a str) -> Self {
        Lexer {
            source: source.as_bytes(),
            position: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError {
            position: self.position,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Token)>, ExprError> {
        let mut out = Vec::new();
        while self.position < self.source.len() {
            let start = self.position;
            let c = self.source[self.position];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.position += 1;
                }
                b'+' => {
                    self.position += 1;
                    out.push((start, Token::Plus));
                }
                b'-' => {
                    self.position += 1;
                    out.push((start, Token::Minus));
                }
                b'*' => {
                    self.position += 1;
                    out.push((start, Token::Star));
                }
                b'/' => {
                    self.position += 1;
                    out.push((start, Token::Slash));
                }
                b'^' => {
                    self.position += 1;
                    out.push((start, Token::Caret));
                }
                b'(' => {
                    self.position += 1;
                    out.push((start, Token::Open));
                }
                b')' => {
                    self.position += 1;
                    out.push((start, Token::Close));
                }
                b'0'..=b'9' | b'.' => {
                    out.push((start, self.number()?));
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    while self.position < self.source.len()
                        && (self.source[self.position].is_ascii_alphanumeric()
                            || self.source[self.position] == b'_')
                    {
                        self.position += 1;
                    }
                    let name = std::str::from_utf8(&self.source[start..self.position])
                        .expect("scanned ascii")
                        .to_string();
                    out.push((start, Token::Identifier(name)));
                }
                other => {
                    return Err(self.error(format!("unexpected character '{}'", other as char)));
                }
            }
        }
        Ok(out)
    }

    fn number(&mut self) -> Result<Token, ExprError> {
        let start = self.position;
        while self.position < self.source.len()
            && (self.source[self.position].is_ascii_digit() || self.source[self.position] == b'.')
        {
            self.position += 1;
        }
        // exponent part, accepting 2e-3 and 2E+5
        if self.position < self.source.len()
            && (self.source[self.position] == b'e' || self.source[self.position] == b'E')
        {
            let mut probe = self.position + 1;
            if probe < self.source.len()
                && (self.source[probe] == b'+' || self.source[probe] == b'-')
            {
                probe += 1;
            }
            if probe < self.source.len() && self.source[probe].is_ascii_digit() {
                self.position = probe;
                while self.position < self.source.len()
                    && self.source[self.position].is_ascii_digit()
                {
                    self.position += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.source[start..self.position]).expect("scanned ascii");
        text.parse::<f64>()
            .map(Token::Number)
            .map_err(|_| ExprError {
                position: start,
                message: format!("invalid number '{text}'"),
            })
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    index: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens
            .get(self.index)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.index).map(|(_, t)| t.clone());
        self.index += 1;
        token
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError {
            position: self.position(),
            message: message.into(),
        }
    }

    fn expression(&mut self) -> Result<Expr, ExprError> {
        let mut left = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.advance();
                    left = Expr::Add(Box::new(left), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.advance();
                    left = Expr::Subtract(Box::new(left), Box::new(self.term()?));
                }
                _ => return Ok(left),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut left = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.advance();
                    left = Expr::Multiply(Box::new(left), Box::new(self.factor()?));
                }
                Some(Token::Slash) => {
                    self.advance();
                    left = Expr::Divide(Box::new(left), Box::new(self.factor()?));
                }
                _ => return Ok(left),
            }
        }
    }

    /// Exponentiation binds tighter than unary minus on the left
    /// (`-k^2` is `-(k^2)`) and associates to the right.
    fn factor(&mut self) -> Result<Expr, ExprError> {
        if let Some(Token::Minus) = self.peek() {
            self.advance();
            return Ok(Expr::Negate(Box::new(self.factor()?)));
        }
        let base = self.primary()?;
        if let Some(Token::Caret) = self.peek() {
            self.advance();
            let exponent = self.factor()?;
            return Ok(Expr::Power(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let position = self.position();
        match self.advance() {
            Some(Token::Number(x)) => Ok(Expr::Number(x)),
            Some(Token::Identifier(name)) => {
                if name == "k" {
                    return Ok(Expr::Variable);
                }
                let function = Function::from_name(&name).ok_or(ExprError {
                    position,
                    message: format!("unknown name '{name}' (the variable is 'k')"),
                })?;
                match self.advance() {
                    Some(Token::Open) => {}
                    _ => {
                        return Err(self.error(format!("expected '(' after '{name}'")));
                    }
                }
                let argument = self.expression()?;
                match self.advance() {
                    Some(Token::Close) => Ok(Expr::Call(function, Box::new(argument))),
                    _ => Err(self.error("expected ')'")),
                }
            }
            Some(Token::Open) => {
                let inner = self.expression()?;
                match self.advance() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(self.error("expected ')'")),
                }
            }
            Some(token) => Err(ExprError {
                position,
                message: format!("unexpected token {token:?}"),
            }),
            None => Err(ExprError {
                position,
                message: "unexpected end of expression".to_string(),
            }),
        }
    }
}

pub fn parse(source: &str) -> Result<Expr, ExprError> {
    let tokens = Lexer::new(source).tokens()?;
    if tokens.is_empty() {
        return Err(ExprError {
            position: 0,
            message: "empty expression".to_string(),
        });
    }
    let mut parser = Parser {
        tokens,
        index: 0,
        end: source.len(),
    };
    let expr = parser.expression()?;
    if parser.peek().is_some() {
        return Err(parser.error("trailing input after expression"));
    }
    Ok(expr)
}
