//! Coefficient functions: ratios of integer-coefficient polynomials, where
//! one side may carry a single additive cos(x) term.

use crate::symexpr::{simplify_basic, Expr, Rational};
use serde::{Deserialize, Serialize};

/// `sum_k coeffs[k] x^k + cos_coeff * cos(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyCos {
    pub coeffs: Vec<i64>,
    pub cos_coeff: i64,
}

impl PolyCos {
    pub fn constant(c: i64) -> Self {
        PolyCos {
            coeffs: vec![c],
            cos_coeff: 0,
        }
    }

    pub fn poly(coeffs: Vec<i64>) -> Self {
        PolyCos {
            coeffs,
            cos_coeff: 0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c as f64;
        }
        acc + self.cos_coeff as f64 * x.cos()
    }

    /// Exact value at x = 0 (cos 0 = 1).
    pub fn at_zero(&self) -> Rational {
        Rational::int(self.coeffs.first().copied().unwrap_or(0) + self.cos_coeff)
    }

    pub fn is_constant(&self) -> Option<i64> {
        if self.cos_coeff == 0 && self.coeffs.iter().skip(1).all(|&c| c == 0) {
            Some(self.coeffs.first().copied().unwrap_or(0))
        } else {
            None
        }
    }

    pub fn to_expr(&self, var: &str) -> Expr {
        let mut terms: Vec<Expr> = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match k {
                0 => Expr::Int(c),
                1 => Expr::Prod(vec![Expr::Int(c), Expr::var(var)]),
                _ => Expr::Prod(vec![Expr::Int(c), Expr::powi(Expr::var(var), k as i64)]),
            });
        }
        if self.cos_coeff != 0 {
            terms.push(Expr::Prod(vec![
                Expr::Int(self.cos_coeff),
                Expr::cos(Expr::var(var)),
            ]));
        }
        simplify_basic(&Expr::sum(terms))
    }
}

/// A rational coefficient function `num / den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefFn {
    pub num: PolyCos,
    pub den: PolyCos,
}

impl CoefFn {
    pub fn constant(c: i64) -> Self {
        CoefFn {
            num: PolyCos::constant(c),
            den: PolyCos::constant(1),
        }
    }

    pub fn rational(num: PolyCos, den: PolyCos) -> Self {
        CoefFn { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_constant() == Some(0)
    }

    pub fn is_constant(&self) -> Option<f64> {
        match (self.num.is_constant(), self.den.is_constant()) {
            (Some(n), Some(d)) if d != 0 => Some(n as f64 / d as f64),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    /// Exact value at x = 0; `None` when the denominator vanishes there.
    pub fn at_zero(&self) -> Option<Rational> {
        let d = self.den.at_zero();
        if d.is_zero() {
            None
        } else {
            Some(self.num.at_zero() / d)
        }
    }

    pub fn to_expr(&self, var: &str) -> Expr {
        let n = self.num.to_expr(var);
        match self.den.is_constant() {
            Some(1) => n,
            _ => simplify_basic(&Expr::div(n, self.den.to_expr(var))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::render_latex;

    #[test]
    fn eval_and_zero_value() {
        // -1 / (12 x^2 - cos x + 11)
        let f = CoefFn::rational(
            PolyCos::constant(-1),
            PolyCos {
                coeffs: vec![11, 0, 12],
                cos_coeff: -1,
            },
        );
        assert_eq!(f.at_zero(), Some(Rational::new(-1, 10)));
        let x = 2.0f64;
        let expect = -1.0 / (12.0 * 4.0 - x.cos() + 11.0);
        assert!((f.eval(x) - expect).abs() < 1e-15);
    }

    #[test]
    fn renders_like_a_rational_function() {
        let f = CoefFn::rational(
            PolyCos::constant(-1),
            PolyCos::poly(vec![2, -1, -2, 5]),
        );
        assert_eq!(
            render_latex(&f.to_expr("x")),
            r"- \frac{1}{5 x^{3} - 2 x^{2} - x + 2}"
        );
    }

    #[test]
    fn constant_detection() {
        assert_eq!(CoefFn::constant(3).is_constant(), Some(3.0));
        assert!(CoefFn::rational(PolyCos::poly(vec![0, 1]), PolyCos::constant(1))
            .is_constant()
            .is_none());
    }
}
