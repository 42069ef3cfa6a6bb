//! Nonlinear third-order ODEs `y''' = f1 (y'')^a + f2 (y')^b + f3 y^c + f4`
//! with small-x Taylor solutions and large-x power-law blow-up solutions
//! from dominant balance.

mod coeffn;
mod generate;
mod powerlaw;
mod taylor;

pub use coeffn::{CoefFn, PolyCos};
pub use generate::{generate_ode, GenerateOutcome, SolvedOde};
pub use powerlaw::{
    dominant_pair_select, power_law_solve, solve_blowup, BlowupSolution, RhsTerm,
};
pub use taylor::{small_x_taylor, TaylorSolution};

use crate::numoracle::{OdeError, OdeTrace, ProbeConfig};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One generated ODE: coefficient functions for the three power terms and
/// the forcing, the exponents on (y'', y', y), and integer initial
/// conditions at x = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeSpec {
    pub f: [CoefFn; 4],
    /// exponents (a, b, c) on y'', y', y
    pub exps: [u32; 3],
    /// (y(0), y'(0), y''(0))
    pub ics: [i64; 3],
}

impl OdeSpec {
    pub fn rhs_terms(&self, x: f64, y: &[f64; 3]) -> [f64; 4] {
        [
            self.f[0].eval(x) * y[2].powi(self.exps[0] as i32),
            self.f[1].eval(x) * y[1].powi(self.exps[1] as i32),
            self.f[2].eval(x) * y[0].powi(self.exps[2] as i32),
            self.f[3].eval(x),
        ]
    }

    pub fn rhs(&self, x: f64, y: &[f64; 3]) -> f64 {
        let t = self.rhs_terms(x, y);
        t[0] + t[1] + t[2] + t[3]
    }

    /// Integrate the spec with the configured tolerances.
    pub fn integrate(&self, x_max: f64, probes: &ProbeConfig) -> Result<OdeTrace, OdeError> {
        crate::numoracle::integrate_system(
            |x, y| [y[1], y[2], self.rhs(x, y)],
            0.0,
            [self.ics[0] as f64, self.ics[1] as f64, self.ics[2] as f64],
            x_max,
            probes.blow_threshold,
            probes.ode_rtol,
            probes.ode_atol,
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeAsymError {
    #[error("no admissible ODE found after {0} attempts")]
    GenerationExhausted(usize),
    #[error("a coefficient function is singular at the origin")]
    SingularAtOrigin,
    #[error("numeric solution does not diverge on the integration window")]
    NoDivergence,
    #[error("no single right-hand-side term dominates the divergence")]
    AmbiguousDominance,
    #[error("the forcing term f4(x) dominates at blow-up")]
    FunctionTermDominant,
    #[error("the balance admits no nonzero (alpha, p) pair")]
    NoNonzeroSolution,
    #[error("power-law exponent has an even denominator; no real branch left of x*")]
    EvenDenominatorExponent,
    #[error("integration failed: {0}")]
    Integration(#[from] OdeError),
}
