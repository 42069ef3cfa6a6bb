//! Large-x blow-up solutions: select the dominant right-hand-side term
//! along the numeric trace, then solve the two-equation system for the
//! power law `y = alpha (x - x*)^p`.
//!
//! Substituting the power law into `y''' = F (y^(k))^m` and matching
//! powers and coefficients of `(x - x*)` gives
//!
//! ```text
//! p - 3 = m (p - k)                      (powers)
//! alpha p(p-1)(p-2) = F (alpha fall_k(p))^m   (coefficients)
//! ```
//!
//! with `fall_k(p) = p (p-1) ... (p-k+1)`. Solutions with `alpha = 0` or
//! `p = 0` are rejected, as are exponents with an even denominator (no
//! real branch on the approach side of x*).

use super::{OdeAsymError, OdeSpec};
use crate::numoracle::{real_pow, OdeTrace};
use crate::symexpr::{simplify_basic, Bindings, Expr, Rational};
use serde::{Deserialize, Serialize};

/// Right-hand-side term identity; `y''' = <term> + ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RhsTerm {
    /// `f1(x) (y'')^a`
    SecondDeriv,
    /// `f2(x) (y')^b`
    FirstDeriv,
    /// `f3(x) y^c`
    Solution,
    /// `f4(x)`
    Forcing,
}

impl RhsTerm {
    pub fn index(&self) -> usize {
        match self {
            RhsTerm::SecondDeriv => 0,
            RhsTerm::FirstDeriv => 1,
            RhsTerm::Solution => 2,
            RhsTerm::Forcing => 3,
        }
    }

    /// Derivative order of the base (`y^(k)`), undefined for the forcing.
    pub fn deriv_order(&self) -> Option<u32> {
        match self {
            RhsTerm::SecondDeriv => Some(2),
            RhsTerm::FirstDeriv => Some(1),
            RhsTerm::Solution => Some(0),
            RhsTerm::Forcing => None,
        }
    }

    pub fn latex_base(&self) -> &'static str {
        match self {
            RhsTerm::SecondDeriv => r"\frac{d^{2}}{d x^{2}} y",
            RhsTerm::FirstDeriv => r"\frac{d}{d x} y",
            RhsTerm::Solution => "y",
            RhsTerm::Forcing => "1",
        }
    }
}

const TERMS: [RhsTerm; 4] = [
    RhsTerm::SecondDeriv,
    RhsTerm::FirstDeriv,
    RhsTerm::Solution,
    RhsTerm::Forcing,
];

/// Required dominance factor over every other term, averaged over the
/// trace tail.
const DOMINANCE_FACTOR: f64 = 10.0;

/// Pick the RHS term with the largest magnitude over the last 5% of the
/// trace before the divergence point.
pub fn dominant_pair_select(spec: &OdeSpec, trace: &OdeTrace) -> Result<RhsTerm, OdeAsymError> {
    if trace.blowup_x.is_none() {
        return Err(OdeAsymError::NoDivergence);
    }
    let x_end = trace.last_x();
    let x_lo = x_end - 0.05 * (x_end - trace.xs[0]);
    let mut start = trace.xs.partition_point(|&x| x < x_lo);
    start = start.min(trace.xs.len().saturating_sub(3));
    let mut sums = [0.0f64; 4];
    let mut count = 0usize;
    for i in start..trace.xs.len() {
        let t = spec.rhs_terms(trace.xs[i], &trace.ys[i]);
        for (s, v) in sums.iter_mut().zip(t.iter()) {
            *s += v.abs();
        }
        count += 1;
    }
    if count == 0 {
        return Err(OdeAsymError::NoDivergence);
    }
    let means: Vec<f64> = sums.iter().map(|s| s / count as f64).collect();
    let (best, &best_mean) = means
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("four terms");
    let runner_up = means
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best)
        .map(|(_, &v)| v)
        .fold(0.0f64, f64::max);
    if !(best_mean.is_finite() && best_mean > DOMINANCE_FACTOR * runner_up) {
        return Err(OdeAsymError::AmbiguousDominance);
    }
    Ok(TERMS[best])
}

/// A power-law blow-up solution `y = alpha (x - x*)^p (+ offset)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupSolution {
    pub x_star: f64,
    pub alpha: f64,
    /// Exact form of alpha when the dominant coefficient is rational.
    pub alpha_expr: Expr,
    pub p: Rational,
    /// Additive constant, present exactly when `p > 0`.
    pub offset: Option<f64>,
    pub dominant: RhsTerm,
}

fn round_to(v: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (v * s).round() / s
}

fn round_sig(v: f64, digits: i32) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let mag = v.abs().log10().floor() as i32;
    round_to(v, digits - 1 - mag)
}

impl BlowupSolution {
    /// Displayed x* (two decimals, as reported in solution texts).
    pub fn x_star_display(&self) -> f64 {
        round_to(self.x_star, 2)
    }

    fn alpha_display(&self) -> f64 {
        match self.alpha_expr.eval(&Bindings::new()) {
            Ok(v) => v.re,
            Err(_) => round_sig(self.alpha, 4),
        }
    }

    /// The displayed solution expression, with x* at two decimals and a
    /// float alpha rounded to four significant digits.
    pub fn as_expr(&self, var: &str) -> Expr {
        let base = Expr::pow(
            Expr::Sum(vec![Expr::var(var), Expr::Float(-self.x_star_display())]),
            self.p,
        );
        let mut terms = vec![Expr::Prod(vec![self.alpha_expr.clone(), base])];
        if let Some(c) = self.offset {
            terms.push(Expr::Float(round_to(c, 2)));
        }
        simplify_basic(&Expr::sum(terms))
    }

    /// Real-branch evaluation of the displayed solution left of x*.
    pub fn eval_real(&self, x: f64) -> f64 {
        let mut v = self.alpha_display() * real_pow(x - self.x_star_display(), self.p);
        if let Some(c) = self.offset {
            v += round_to(c, 2);
        }
        v
    }
}

fn falling(p: Rational, k: u32) -> Rational {
    let mut acc = Rational::ONE;
    for j in 0..k {
        acc = acc * (p - Rational::int(j as i64));
    }
    acc
}

/// Solve `y''' = coef (y^(k))^m` for `(alpha, p)` given the divergence
/// point. `coef_exact` carries the coefficient when it is an exact
/// rational, so alpha can be displayed in radical form.
pub fn power_law_solve(
    deriv_order: u32,
    exponent: u32,
    coef: f64,
    coef_exact: Option<Rational>,
    x_star: f64,
) -> Result<BlowupSolution, OdeAsymError> {
    assert!(exponent >= 2, "dominant balance needs a nonlinear term");
    let (k, m) = (deriv_order, exponent);
    // powers' equation: p - 3 = m (p - k)
    let p = Rational::new(m as i64 * k as i64 - 3, m as i64 - 1);
    if p.is_zero() {
        return Err(OdeAsymError::NoNonzeroSolution);
    }
    if p.den() % 2 == 0 {
        return Err(OdeAsymError::EvenDenominatorExponent);
    }
    let lhs = falling(p, 3);
    let fall_k = falling(p, k);
    if lhs.is_zero() || fall_k.is_zero() {
        return Err(OdeAsymError::NoNonzeroSolution);
    }
    // alpha^(m-1) = p(p-1)(p-2) / (coef * fall_k^m)
    let fall_pow = fall_k
        .checked_pow(m as i64)
        .ok_or(OdeAsymError::NoNonzeroSolution)?;
    let rho = lhs.to_f64() / (coef * fall_pow.to_f64());
    if !rho.is_finite() || rho == 0.0 {
        return Err(OdeAsymError::NoNonzeroSolution);
    }
    let root_index = (m - 1) as i64;
    let alpha = match root_index {
        1 => rho,
        _ if root_index % 2 == 1 => real_pow(rho, Rational::new(1, root_index)),
        _ => {
            if rho < 0.0 {
                return Err(OdeAsymError::NoNonzeroSolution);
            }
            rho.powf(1.0 / root_index as f64)
        }
    };
    if !alpha.is_finite() || alpha == 0.0 {
        return Err(OdeAsymError::NoNonzeroSolution);
    }

    let alpha_expr = match coef_exact {
        Some(f) if !f.is_zero() => {
            let rho_exact = lhs / (f * fall_pow);
            exact_real_root(rho_exact, root_index)
                .unwrap_or(Expr::Float(round_sig(alpha, 4)))
        }
        _ => Expr::Float(round_sig(alpha, 4)),
    };

    let dominant = match k {
        2 => RhsTerm::SecondDeriv,
        1 => RhsTerm::FirstDeriv,
        _ => RhsTerm::Solution,
    };
    Ok(BlowupSolution {
        x_star,
        alpha,
        alpha_expr,
        p,
        offset: None,
        dominant,
    })
}

/// Exact real n-th root of a rational, for odd n or positive arguments.
fn exact_real_root(rho: Rational, n: i64) -> Option<Expr> {
    if n == 1 {
        return Some(Expr::from_rational(rho));
    }
    if rho.is_negative() && n % 2 == 0 {
        return None;
    }
    let mag = simplify_basic(&Expr::pow(
        Expr::from_rational(rho.abs()),
        Rational::new(1, n),
    ));
    Some(if rho.is_negative() {
        simplify_basic(&Expr::neg(mag))
    } else {
        mag
    })
}

/// Full blow-up analysis of an integrated spec: dominant term, refined
/// x*, power law, and the additive offset for bounded power laws.
pub fn solve_blowup(spec: &OdeSpec, trace: &OdeTrace) -> Result<BlowupSolution, OdeAsymError> {
    let term = dominant_pair_select(spec, trace)?;
    if term == RhsTerm::Forcing {
        return Err(OdeAsymError::FunctionTermDominant);
    }
    let k = term.deriv_order().expect("not forcing");
    let m = spec.exps[term.index()];
    let raw_x_star = trace.blowup_x.ok_or(OdeAsymError::NoDivergence)?;

    let f = &spec.f[term.index()];
    let coef = f.eval(raw_x_star);
    if !coef.is_finite() || coef.abs() < 1e-8 {
        return Err(OdeAsymError::NoNonzeroSolution);
    }
    let coef_exact = f.is_constant().map(|c| {
        let (n, d) = (f.num.is_constant().unwrap(), f.den.is_constant().unwrap());
        let _ = c;
        Rational::new(n, d)
    });

    let mut sol = power_law_solve(k, m, coef, coef_exact, raw_x_star)?;
    sol.x_star = refine_x_star(trace, sol.p).unwrap_or(raw_x_star);
    if sol.p.is_positive() {
        sol.offset = Some(fit_offset(trace, &sol));
    }
    Ok(sol)
}

/// Sharpen x* using the tail identity `y''/y''' -> (x - x*)/(p - 2)`,
/// which holds for every admissible exponent (p < 2 makes both sides
/// divergent, so lower-order integration constants drop out).
fn refine_x_star(trace: &OdeTrace, p: Rational) -> Option<f64> {
    let n = trace.xs.len();
    if n < 2 {
        return None;
    }
    let x = trace.xs[n - 1];
    let ypp = trace.ys[n - 1][2];
    let yppp = trace.d3[n - 1];
    if !yppp.is_finite() || yppp.abs() < 1e3 {
        return None;
    }
    let d = (p.to_f64() - 2.0) * ypp / yppp;
    let x_star = x - d;
    // the pole must sit just beyond the end of the trace
    if x_star.is_finite() && x_star >= x && x_star < x + 1.0 {
        Some(x_star)
    } else {
        None
    }
}

/// Offset for bounded power laws: the numeric solution minus the power
/// law at the last reliable trace point.
fn fit_offset(trace: &OdeTrace, sol: &BlowupSolution) -> f64 {
    let idx = trace.xs.len().saturating_sub(2);
    let x = trace.xs[idx];
    let y = trace.ys[idx][0];
    y - sol.alpha * real_pow(x - sol.x_star, sol.p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::render_latex;

    #[test]
    fn first_derivative_squared_gives_minus_six_over_distance() {
        let sol = power_law_solve(1, 2, 1.0, Some(Rational::ONE), 11.45).unwrap();
        assert_eq!(sol.p, Rational::int(-1));
        assert!((sol.alpha + 6.0).abs() < 1e-12);
        assert_eq!(sol.alpha_expr, Expr::Int(-6));
        assert_eq!(
            render_latex(&sol.as_expr("x")),
            r"- 6 \left(x - 11.45\right)^{-1}"
        );
    }

    #[test]
    fn first_derivative_fourth_power_gives_cbrt_30() {
        let sol = power_law_solve(1, 4, 1.0, Some(Rational::ONE), 2.68).unwrap();
        assert_eq!(sol.p, Rational::new(1, 3));
        assert!((sol.alpha - 30f64.cbrt()).abs() < 1e-12);
        assert_eq!(
            sol.alpha_expr,
            simplify_basic(&Expr::root(Expr::Int(30), 3))
        );
    }

    #[test]
    fn second_derivative_squared_is_rejected() {
        // p - 3 = 2(p - 2) forces p = 1, which kills p(p-1)(p-2)
        assert_eq!(
            power_law_solve(2, 2, 1.0, Some(Rational::ONE), 1.0),
            Err(OdeAsymError::NoNonzeroSolution)
        );
    }

    #[test]
    fn even_denominator_exponents_are_rejected() {
        // y^3 dominant: p = 3/(1-3) = -3/2
        assert_eq!(
            power_law_solve(0, 3, 1.0, Some(Rational::ONE), 1.0),
            Err(OdeAsymError::EvenDenominatorExponent)
        );
    }

    #[test]
    fn both_equations_hold_exactly_for_accepted_solutions() {
        for (k, m) in [(0u32, 2u32), (1, 2), (0, 4), (1, 4), (2, 4)] {
            let coef = 2.5f64;
            let sol = match power_law_solve(k, m, coef, None, 5.0) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let p = sol.p.to_f64();
            // powers' equation
            assert!((p - 3.0 - m as f64 * (p - k as f64)).abs() < 1e-12);
            // coefficients' equation
            let lhs = sol.alpha * p * (p - 1.0) * (p - 2.0);
            let fall = match k {
                0 => 1.0,
                1 => p,
                _ => p * (p - 1.0),
            };
            let rhs = coef * (sol.alpha * fall).powi(m as i32);
            assert!(
                (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                "k={k} m={m}: {lhs} vs {rhs}"
            );
        }
    }
}
