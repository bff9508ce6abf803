//! A small arithmetic language for the nonlinearities `f(r, u, v, gu, gv)`.
//!
//! Expressions are parsed once into a tree ([`Node`]) and compiled into a
//! postfix program that [`Expr::eval`] runs without recursion or allocation.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := primary ("^" power)?          right-associative
//! primary := number | variable | constant | func "(" expr ("," expr)* ")" | "(" expr ")"
//! ```
//!
//! Variables are `r`, `u`, `v`, `gu`, `gv`; constants `pi`, `e`. The right
//! operand of `^` cannot start with a unary minus: write `u^(-2)`.

mod eval;
mod lexer;
mod parser;

use std::fmt;

pub use eval::EvalError;
pub use parser::{ParseError, ParseErrorKind};

/// The five arguments of a nonlinearity, in evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    R,
    U,
    V,
    Gu,
    Gv,
}

impl Var {
    pub const ALL: [Var; 5] = [Var::R, Var::U, Var::V, Var::Gu, Var::Gv];

    pub fn name(self) -> &'static str {
        match self {
            Var::R => "r",
            Var::U => "u",
            Var::V => "v",
            Var::Gu => "gu",
            Var::Gv => "gv",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn from_name(name: &str) -> Option<Self> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Abs,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Min,
    Max,
    Pow,
}

impl Func {
    pub const ALL: [Func; 12] = [
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Min,
        Func::Max,
        Func::Pow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Min => "min",
            Func::Max => "max",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max | Func::Pow => 2,
            _ => 1,
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Syntax tree. Constants `pi` and `e` are stored as literals.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

impl Node {
    pub fn num(x: f64) -> Self {
        Node::Num(x)
    }

    pub fn var(v: Var) -> Self {
        Node::Var(v)
    }

    pub fn neg(x: Node) -> Self {
        Node::Neg(Box::new(x))
    }

    pub fn binary(op: BinOp, lhs: Node, rhs: Node) -> Self {
        Node::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(f: Func, args: Vec<Node>) -> Self {
        Node::Call(f, args)
    }
}

/// Fully parenthesised rendering that parses back to the same tree.
impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(x) => write!(f, "{x}"),
            Node::Var(v) => f.write_str(v.name()),
            Node::Neg(x) => write!(f, "(-{x})"),
            Node::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Node::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A parsed and compiled nonlinearity.
#[derive(Debug, Clone)]
pub struct Expr {
    root: Node,
    program: eval::Program,
}

impl Expr {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let root = parser::parse(source)?;
        Ok(Self::compile(root))
    }

    /// Wraps a hand-built tree. Fails if a call has the wrong number of
    /// arguments or a literal is not finite and non-negative.
    pub fn from_node(root: Node) -> Result<Self, ParseError> {
        parser::validate(&root)?;
        Ok(Self::compile(root))
    }

    fn compile(root: Node) -> Self {
        let program = eval::Program::compile(&root);
        Self { root, program }
    }

    pub fn node(&self) -> &Node {
        &self.root
    }

    pub fn eval(&self, r: f64, u: f64, v: f64, gu: f64, gv: f64) -> Result<f64, EvalError> {
        self.program.run(&[r, u, v, gu, gv])
    }

    /// Evaluates at `(r, u, v, gu, gv)` packed as an array.
    pub fn eval_point(&self, point: &[f64; 5]) -> Result<f64, EvalError> {
        self.program.run(point)
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}
