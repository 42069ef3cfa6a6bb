//! Generation, verification and grading of asymptotic-methods problems.
//!
//! The pipeline synthesizes problems in seven types (polynomial
//! nondimensionalization in symbolic and numeric form, dominant-balance
//! root finding, root correction terms, nonlinear third-order ODEs with
//! blow-up solutions, polynomial-denominator integrals and Laplace
//! integrals), derives approximate analytical solutions, verifies every
//! solution against numerical ground truths under a 10% relative-error
//! gate, renders LaTeX problem/solution records with boxed final answers,
//! and deterministically grades candidate answers with per-type rubrics.
//!
//! See the crate examples for one runnable walkthrough per capability, and
//! the `asympgen` binary for the end-to-end command-line pipeline.

pub mod numoracle;
pub mod polyasym;
pub mod symexpr;

pub use symexpr::{Bindings, Dialect, Expr, FuncKind, Rational};
