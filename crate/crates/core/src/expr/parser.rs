use std::fmt;

use thiserror::Error;

use super::lexer::{tokenize, Token, TokenKind};
use super::{BinOp, Func, Node, Var};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    /// Byte offset into the source text.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedToken {
        found: String,
        expected: Vec<&'static str>,
    },
    UnexpectedChar(char),
    InvalidNumber(String),
    UnknownIdentifier(String),
    /// A name used with call syntax that is not a known function.
    UnknownFunction(String),
    Arity {
        name: &'static str,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {}, found {found}", expected.join(" or "))
            }
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number literal `{s}`"),
            ParseErrorKind::UnknownIdentifier(s) => write!(
                f,
                "unknown identifier `{s}` (variables: r, u, v, gu, gv; constants: pi, e)"
            ),
            ParseErrorKind::UnknownFunction(s) => write!(f, "`{s}` is not a function"),
            ParseErrorKind::Arity {
                name,
                expected,
                found,
            } => write!(f, "`{name}` takes {expected} argument(s), got {found}"),
        }
    }
}

const OPERAND: &[&str] = &["number", "identifier", "`(`"];
const OPERAND_OR_MINUS: &[&str] = &["number", "identifier", "`(`", "`-`"];

pub(super) fn parse(src: &str) -> Result<Node, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let node = p.expr()?;
    match p.peek().kind {
        TokenKind::End => Ok(node),
        _ => Err(p.unexpected(&["operator", "end of input"])),
    }
}

/// Structural checks for trees not produced by the parser.
pub(super) fn validate(node: &Node) -> Result<(), ParseError> {
    match node {
        Node::Num(x) if !x.is_finite() || *x < 0.0 => Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::InvalidNumber(x.to_string()),
        }),
        Node::Num(_) | Node::Var(_) => Ok(()),
        Node::Neg(x) => validate(x),
        Node::Binary(_, l, r) => {
            validate(l)?;
            validate(r)
        }
        Node::Call(f, args) => {
            if args.len() != f.arity() {
                return Err(ParseError {
                    offset: 0,
                    kind: ParseErrorKind::Arity {
                        name: f.name(),
                        expected: f.arity(),
                        found: args.len(),
                    },
                });
            }
            args.iter().try_for_each(validate)
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let t = self.peek();
        ParseError {
            offset: t.offset,
            kind: ParseErrorKind::UnexpectedToken {
                found: t.kind.describe(),
                expected: expected.to_vec(),
            },
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &[&'static str]) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Star => BinOp::Mul,
                TokenKind::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek().kind == TokenKind::Minus {
            self.bump();
            return Ok(Node::neg(self.unary()?));
        }
        self.power(OPERAND_OR_MINUS)
    }

    fn power(&mut self, expected: &[&'static str]) -> Result<Node, ParseError> {
        let base = self.primary(expected)?;
        if self.peek().kind == TokenKind::Caret {
            self.bump();
            let exponent = self.power(OPERAND)?;
            return Ok(Node::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self, expected: &[&'static str]) -> Result<Node, ParseError> {
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::Num(x) => {
                self.bump();
                Ok(Node::Num(x))
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, &["operator", "`)`"])?;
                Ok(inner)
            }
            TokenKind::Ident(ref name) => {
                self.bump();
                if self.peek().kind == TokenKind::LParen {
                    let func = Func::from_name(name).ok_or_else(|| ParseError {
                        offset: tok.offset,
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                    })?;
                    self.bump();
                    let args = self.arguments()?;
                    if args.len() != func.arity() {
                        return Err(ParseError {
                            offset: tok.offset,
                            kind: ParseErrorKind::Arity {
                                name: func.name(),
                                expected: func.arity(),
                                found: args.len(),
                            },
                        });
                    }
                    return Ok(Node::Call(func, args));
                }
                if let Some(v) = Var::from_name(name) {
                    return Ok(Node::Var(v));
                }
                match name.as_str() {
                    "pi" => Ok(Node::Num(std::f64::consts::PI)),
                    "e" => Ok(Node::Num(std::f64::consts::E)),
                    _ if Func::from_name(name).is_some() => {
                        // function name without a call
                        Err(self.unexpected(&["`(`"]))
                    }
                    _ => Err(ParseError {
                        offset: tok.offset,
                        kind: ParseErrorKind::UnknownIdentifier(name.clone()),
                    }),
                }
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    /// Comma-separated arguments after an opening parenthesis, consuming the
    /// closing one.
    fn arguments(&mut self) -> Result<Vec<Node>, ParseError> {
        let mut args = Vec::new();
        if self.peek().kind == TokenKind::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            match self.peek().kind {
                TokenKind::Comma => {
                    self.bump();
                }
                TokenKind::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.unexpected(&["operator", "`,`", "`)`"])),
            }
        }
    }
}
