//! Minimal symbolic-expression kernel: construction, parsing,
//! differentiation, complex-valued evaluation, basic simplification and
//! LaTeX rendering.
//!
//! All values are immutable after construction and every operation is pure,
//! so the kernel is safe to use concurrently from any number of workers.

pub mod expr;
pub mod infix;
pub mod latex;
pub mod parse;
pub mod rational;
pub mod sampling;
pub mod simplify;

pub use expr::{Bindings, EvalError, Expr, FuncKind};
pub use infix::render_infix;
pub use latex::render_latex;
pub use parse::{parse, parse_expr_list, Dialect, ParseError};
pub use rational::Rational;
pub use simplify::simplify_basic;

/// Exact symbolic derivative, canonicalized.
pub fn differentiate(e: &Expr, var: &str) -> Expr {
    simplify_basic(&e.differentiate_raw(var))
}
