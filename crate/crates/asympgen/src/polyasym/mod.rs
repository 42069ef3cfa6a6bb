//! Nondimensionalization of three-term polynomials, dominant-balance root
//! approximation with self-consistency checks, and O(1) correction terms.

mod balance;
mod correction;
mod nondim;
mod unity;

pub use balance::{balance_roots, check_consistency, BalanceAnalysis, RootsSolution};
pub use correction::{correction_improves, correction_term, Correction};
pub use nondim::{nondim_numeric, nondim_symbolic, NondimResult};
pub use unity::unit_root;

use crate::symexpr::Expr;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A three-term polynomial `a1 x^n1 + a2 x^n2 + a3` with nonzero integer
/// coefficients and `0 < n2 < n1 <= 10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTermPoly {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub n1: u32,
    pub n2: u32,
}

impl ThreeTermPoly {
    pub fn check(&self) -> Result<(), PolyError> {
        if self.a1 == 0 || self.a2 == 0 || self.a3 == 0 {
            return Err(PolyError::DegenerateInput);
        }
        if !(0 < self.n2 && self.n2 < self.n1 && self.n1 <= 10) {
            return Err(PolyError::BadDegrees {
                n1: self.n1,
                n2: self.n2,
            });
        }
        Ok(())
    }

    pub fn as_expr(&self, var: &str) -> Expr {
        crate::symexpr::simplify_basic(&Expr::Sum(vec![
            Expr::Prod(vec![
                Expr::Int(self.a1),
                Expr::powi(Expr::var(var), self.n1 as i64),
            ]),
            Expr::Prod(vec![
                Expr::Int(self.a2),
                Expr::powi(Expr::var(var), self.n2 as i64),
            ]),
            Expr::Int(self.a3),
        ]))
    }

    pub fn signs(&self) -> [i64; 3] {
        [self.a1.signum(), self.a2.signum(), self.a3.signum()]
    }
}

/// A nondimensionalized root-finding polynomial
/// `eps x^n1 + s2 x^n2 + s3` with unit-magnitude trailing coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsPoly {
    pub n1: u32,
    pub n2: u32,
    pub s2: i8,
    pub s3: i8,
}

impl EpsPoly {
    pub fn check(&self) -> Result<(), PolyError> {
        if !(0 < self.n2 && self.n2 < self.n1 && self.n1 <= 10) {
            return Err(PolyError::BadDegrees {
                n1: self.n1,
                n2: self.n2,
            });
        }
        if self.s2.abs() != 1 || self.s3.abs() != 1 {
            return Err(PolyError::DegenerateInput);
        }
        Ok(())
    }

    pub fn as_expr(&self, var: &str) -> Expr {
        crate::symexpr::simplify_basic(&Expr::sum(self.term_exprs(var).to_vec()))
    }

    /// The three addends A, B, C as expressions in `var` and epsilon.
    pub fn term_exprs(&self, var: &str) -> [Expr; 3] {
        [
            Expr::Prod(vec![
                Expr::epsilon(),
                Expr::powi(Expr::var(var), self.n1 as i64),
            ]),
            Expr::Prod(vec![
                Expr::Int(self.s2 as i64),
                Expr::powi(Expr::var(var), self.n2 as i64),
            ]),
            Expr::Int(self.s3 as i64),
        ]
    }

    /// Term magnitudes |A|, |B|, |C| at a numeric point.
    pub fn term_magnitudes(&self, x: Complex64, eps: f64) -> [f64; 3] {
        [
            eps * x.norm().powi(self.n1 as i32),
            x.norm().powi(self.n2 as i32),
            1.0,
        ]
    }

    pub fn eval_at(&self, x: Complex64, eps: f64) -> Complex64 {
        Complex64::new(eps, 0.0) * x.powu(self.n1)
            + Complex64::new(self.s2 as f64, 0.0) * x.powu(self.n2)
            + Complex64::new(self.s3 as f64, 0.0)
    }

    /// Ascending coefficient vector at a numeric epsilon, for the
    /// companion-matrix oracle.
    pub fn coeff_vec(&self, eps: f64) -> Vec<f64> {
        let mut c = vec![0.0; self.n1 as usize + 1];
        c[0] = self.s3 as f64;
        c[self.n2 as usize] = self.s2 as f64;
        c[self.n1 as usize] = eps;
        c
    }
}

/// One of the three addends of `A + B + C = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
pub enum Term {
    A,
    B,
    C,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::A => write!(f, "A"),
            Term::B => write!(f, "B"),
            Term::C => write!(f, "C"),
        }
    }
}

/// A two-term dominant balance; the third term is neglected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
pub struct Balance {
    pub kept: (Term, Term),
    pub neglected: Term,
}

impl Balance {
    pub const AB: Balance = Balance {
        kept: (Term::A, Term::B),
        neglected: Term::C,
    };
    pub const BC: Balance = Balance {
        kept: (Term::B, Term::C),
        neglected: Term::A,
    };
    pub const AC: Balance = Balance {
        kept: (Term::A, Term::C),
        neglected: Term::B,
    };

    pub fn all() -> [Balance; 3] {
        [Balance::AB, Balance::BC, Balance::AC]
    }

    pub fn label(&self) -> String {
        format!("{}+{}", self.kept.0, self.kept.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
pub enum Regime {
    SmallEps,
    LargeEps,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::SmallEps => "small_eps",
            Regime::LargeEps => "large_eps",
        }
    }

    pub fn probe(&self, probes: &crate::numoracle::ProbeConfig) -> f64 {
        match self {
            Regime::SmallEps => probes.small_eps,
            Regime::LargeEps => probes.large_eps,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::SmallEps => write!(f, "small"),
            Regime::LargeEps => write!(f, "large"),
        }
    }
}

/// Approximate roots for one epsilon regime, with balance provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeRoots {
    pub regime: Regime,
    pub roots: Vec<Expr>,
    pub balances: Vec<Balance>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("degenerate input: zero coefficient or sign")]
    DegenerateInput,
    #[error("degrees out of range: n1 = {n1}, n2 = {n2}")]
    BadDegrees { n1: u32, n2: u32 },
    #[error("accepted balances cover {found} roots in the {regime} regime, expected {expected}")]
    InconsistentCover {
        regime: Regime,
        found: usize,
        expected: usize,
    },
    #[error("duplicate roots across balances in the {0} regime")]
    DuplicateRoots(Regime),
    #[error("correction is singular: P'(root) vanishes")]
    SingularCorrection,
    #[error("evaluation failed: {0}")]
    Eval(#[from] crate::symexpr::EvalError),
}
