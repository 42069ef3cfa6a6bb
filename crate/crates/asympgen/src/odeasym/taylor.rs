//! Small-x solutions: a Taylor series around x = 0 using the initial
//! conditions, with y'''(0) read off the ODE itself.

use super::{OdeAsymError, OdeSpec};
use crate::symexpr::{simplify_basic, Expr, Rational};

/// `c0 + c1 x + c2 x^2 + c3 x^3`, exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorSolution {
    pub c: [Rational; 4],
}

impl TaylorSolution {
    pub fn as_expr(&self, var: &str) -> Expr {
        let term = |k: usize| -> Expr {
            let coef = Expr::from_rational(self.c[k]);
            match k {
                0 => coef,
                1 => Expr::Prod(vec![coef, Expr::var(var)]),
                _ => Expr::Prod(vec![coef, Expr::powi(Expr::var(var), k as i64)]),
            }
        };
        simplify_basic(&Expr::Sum((0..4).map(term).collect()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c[0].to_f64()
            + self.c[1].to_f64() * x
            + self.c[2].to_f64() * x * x
            + self.c[3].to_f64() * x * x * x
    }
}

fn int_pow(base: i64, exp: u32) -> Option<i64> {
    base.checked_pow(exp)
}

/// Taylor coefficients: `(y0, y1, y2/2, y'''(0)/6)` with
/// `y'''(0) = f1(0) y2^a + f2(0) y1^b + f3(0) y0^c + f4(0)` exactly.
pub fn small_x_taylor(spec: &OdeSpec) -> Result<TaylorSolution, OdeAsymError> {
    let f_at_zero: Vec<Rational> = spec
        .f
        .iter()
        .map(|f| f.at_zero().ok_or(OdeAsymError::SingularAtOrigin))
        .collect::<Result<_, _>>()?;
    let [y0, y1, y2] = spec.ics;
    let powed = |base: i64, exp: u32| -> Result<Rational, OdeAsymError> {
        int_pow(base, exp)
            .map(Rational::int)
            .ok_or(OdeAsymError::NoNonzeroSolution)
    };
    let d3 = f_at_zero[0] * powed(y2, spec.exps[0])?
        + f_at_zero[1] * powed(y1, spec.exps[1])?
        + f_at_zero[2] * powed(y0, spec.exps[2])?
        + f_at_zero[3];
    Ok(TaylorSolution {
        c: [
            Rational::int(y0),
            Rational::int(y1),
            Rational::int(y2) / Rational::int(2),
            d3 / Rational::int(6),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odeasym::{CoefFn, PolyCos};
    use crate::symexpr::render_latex;

    /// The reference third-order ODE used across the test suite:
    /// y''' = -y''/(5x^3-2x^2-x+2) + (y')^2 - y/(24x^4+6x^2+3)
    ///        - 1/(12x^2 - cos x + 11), ics (1, 0, 0).
    pub(crate) fn reference_ode() -> OdeSpec {
        OdeSpec {
            f: [
                CoefFn::rational(PolyCos::constant(-1), PolyCos::poly(vec![2, -1, -2, 5])),
                CoefFn::constant(1),
                CoefFn::rational(PolyCos::constant(-1), PolyCos::poly(vec![3, 0, 6, 0, 24])),
                CoefFn::rational(
                    PolyCos::constant(-1),
                    PolyCos {
                        coeffs: vec![11, 0, 12],
                        cos_coeff: -1,
                    },
                ),
            ],
            exps: [1, 2, 1],
            ics: [1, 0, 0],
        }
    }

    #[test]
    fn reference_taylor_is_one_minus_13_over_180_x_cubed() {
        let t = small_x_taylor(&reference_ode()).unwrap();
        assert_eq!(
            t.c,
            [
                Rational::int(1),
                Rational::ZERO,
                Rational::ZERO,
                Rational::new(-13, 180)
            ]
        );
        assert_eq!(render_latex(&t.as_expr("x")), r"- \frac{13 x^{3}}{180} + 1");
    }

    #[test]
    fn zero_initial_conditions_with_zero_forcing_stay_zero() {
        let mut spec = reference_ode();
        spec.ics = [0, 0, 0];
        spec.f[3] = CoefFn::constant(0);
        spec.exps = [2, 2, 1];
        let t = small_x_taylor(&spec).unwrap();
        assert!(t.c.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn pole_at_origin_is_an_error() {
        let mut spec = reference_ode();
        spec.f[1] = CoefFn::rational(PolyCos::constant(1), PolyCos::poly(vec![0, 1]));
        assert_eq!(small_x_taylor(&spec), Err(OdeAsymError::SingularAtOrigin));
    }
}
