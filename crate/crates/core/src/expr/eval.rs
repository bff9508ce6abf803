use thiserror::Error;

use super::{BinOp, Func, Node};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{func} is undefined at {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("non-finite result")]
    NonFinite,
}

/// Integer exponents up to this magnitude are applied by repeated
/// multiplication.
const MAX_REPEATED_EXPONENT: f64 = 16.0;

const INLINE_STACK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Push(f64),
    Load(usize),
    Neg,
    Bin(BinOp),
    Call1(Func),
    Call2(Func),
}

/// Postfix form of a [`Node`] tree.
#[derive(Debug, Clone)]
pub(super) struct Program {
    ops: Vec<Op>,
    depth: usize,
}

impl Program {
    pub(super) fn compile(root: &Node) -> Self {
        let mut ops = Vec::new();
        let depth = emit(root, &mut ops);
        Self { ops, depth }
    }

    pub(super) fn run(&self, vars: &[f64; 5]) -> Result<f64, EvalError> {
        let mut inline = [0.0f64; INLINE_STACK];
        let mut heap;
        let stack: &mut [f64] = if self.depth <= INLINE_STACK {
            &mut inline
        } else {
            heap = vec![0.0; self.depth];
            &mut heap
        };
        let mut top = 0usize;
        for op in &self.ops {
            match *op {
                Op::Push(x) => {
                    stack[top] = x;
                    top += 1;
                }
                Op::Load(i) => {
                    stack[top] = vars[i];
                    top += 1;
                }
                Op::Neg => stack[top - 1] = -stack[top - 1],
                Op::Bin(b) => {
                    top -= 1;
                    let rhs = stack[top];
                    let lhs = stack[top - 1];
                    stack[top - 1] = binary(b, lhs, rhs)?;
                }
                Op::Call1(f) => stack[top - 1] = call1(f, stack[top - 1])?,
                Op::Call2(f) => {
                    top -= 1;
                    let b = stack[top];
                    let a = stack[top - 1];
                    stack[top - 1] = call2(f, a, b)?;
                }
            }
        }
        debug_assert_eq!(top, 1);
        let out = stack[0];
        if out.is_finite() {
            Ok(out)
        } else {
            Err(EvalError::NonFinite)
        }
    }
}

/// Appends the postfix code for `node`; returns the stack depth it needs.
fn emit(node: &Node, ops: &mut Vec<Op>) -> usize {
    match node {
        Node::Num(x) => {
            ops.push(Op::Push(*x));
            1
        }
        Node::Var(v) => {
            ops.push(Op::Load(v.index()));
            1
        }
        Node::Neg(x) => {
            let d = emit(x, ops);
            ops.push(Op::Neg);
            d
        }
        Node::Binary(op, l, r) => {
            let dl = emit(l, ops);
            let dr = emit(r, ops);
            ops.push(Op::Bin(*op));
            dl.max(dr + 1)
        }
        Node::Call(f, args) => {
            let mut depth = 0;
            for (k, a) in args.iter().enumerate() {
                depth = depth.max(emit(a, ops) + k);
            }
            ops.push(if args.len() == 1 {
                Op::Call1(*f)
            } else {
                Op::Call2(*f)
            });
            depth
        }
    }
}

pub(crate) fn binary(op: BinOp, a: f64, b: f64) -> Result<f64, EvalError> {
    Ok(match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => {
            if b == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            a / b
        }
        BinOp::Pow => real_pow(a, b)?,
    })
}

pub(crate) fn call1(f: Func, x: f64) -> Result<f64, EvalError> {
    Ok(match f {
        Func::Exp => x.exp(),
        Func::Log => {
            if x <= 0.0 {
                return Err(EvalError::Domain {
                    func: "log",
                    arg: x,
                });
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err(EvalError::Domain {
                    func: "sqrt",
                    arg: x,
                });
            }
            x.sqrt()
        }
        Func::Abs => x.abs(),
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
        Func::Min | Func::Max | Func::Pow => {
            unreachable!("binary function called with one argument")
        }
    })
}

pub(crate) fn call2(f: Func, a: f64, b: f64) -> Result<f64, EvalError> {
    Ok(match f {
        Func::Min => a.min(b),
        Func::Max => a.max(b),
        Func::Pow => real_pow(a, b)?,
        _ => unreachable!("unary function called with two arguments"),
    })
}

/// Real power: repeated multiplication for small integer exponents, otherwise
/// `exp(b ln a)` with the sign restored for integer exponents of negative
/// bases.
pub(crate) fn real_pow(a: f64, b: f64) -> Result<f64, EvalError> {
    let integral = b.fract() == 0.0;
    if integral && b.abs() <= MAX_REPEATED_EXPONENT {
        let n = b.abs() as u32;
        let mut acc = 1.0;
        for _ in 0..n {
            acc *= a;
        }
        if b < 0.0 {
            if acc == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            acc = 1.0 / acc;
        }
        return Ok(acc);
    }
    if a > 0.0 {
        Ok((b * a.ln()).exp())
    } else if a == 0.0 {
        if b > 0.0 {
            Ok(0.0)
        } else {
            Err(EvalError::DivisionByZero)
        }
    } else if integral {
        let magnitude = (b * (-a).ln()).exp();
        let odd = (b / 2.0).fract() != 0.0;
        Ok(if odd { -magnitude } else { magnitude })
    } else {
        Err(EvalError::Domain {
            func: "pow",
            arg: a,
        })
    }
}
