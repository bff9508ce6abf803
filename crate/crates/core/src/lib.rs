//! Non-negative radial solutions of gradient-dependent Neumann elliptic
//! systems on an annulus `R0 < |x| < R1`:
//!
//! ```text
//! -Δu = f1(|x|, u, v, |∇u|, |∇v|),   -Δv = f2(|x|, u, v, |∇u|, |∇v|),   ∂u/∂r = ∂v/∂r = 0.
//! ```
//!
//! The crate reduces the system to a shifted two-point problem on `[0, 1]`
//! ([`geometry`]), inverts the shifted operator with an explicit Green's
//! kernel ([`kernel`]), samples the growth conditions that localise
//! solutions inside a cone ([`hypothesis`]) and computes the solutions
//! themselves ([`solver`]). Nonlinearities are written in a small expression
//! language ([`expr`]).

pub mod error;
pub mod expr;
pub mod geometry;
pub mod hypothesis;
pub mod kernel;
pub mod quadrature;
mod sampling;
pub mod solver;
pub mod system;

pub use error::{Error, Result};
pub use expr::Expr;
pub use geometry::AnnulusGeometry;
pub use kernel::{KernelConstants, ShiftedKernel};
pub use system::{Component, NonlinearSystem};
