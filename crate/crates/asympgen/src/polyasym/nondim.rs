//! Nondimensionalization: collapse the three coefficients into a single
//! parameter by substituting `x = y (a3/a2)^(1/n2)` and dividing by the
//! coefficient left on the constant term.

use super::{PolyError, ThreeTermPoly};
use crate::symexpr::{simplify_basic, Bindings, Expr, Rational};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct NondimResult {
    /// Right-hand side of the substitution `x = y * scale`.
    pub substitution: Expr,
    /// The nondimensionalized polynomial in `y` and the parameter epsilon.
    pub nondim_poly: Expr,
    /// Closed form of epsilon (in `a1..a3` for the symbolic problem, an
    /// exact radical for the numeric one).
    pub epsilon: Expr,
    /// Numeric epsilon rounded to two decimals; `None` for symbolic input.
    pub epsilon_value: Option<f64>,
    /// Signs on the `y^n1` and `y^n2` terms of the result (`+1` for the
    /// symbolic problem, `s1 s3` and `s2 s3` for numeric input).
    pub signs: (i8, i8),
}

fn scale_expr(a3: Expr, a2: Expr, n2: u32) -> Expr {
    Expr::pow(
        Expr::Prod(vec![a3, Expr::recip(a2)]),
        Rational::new(1, n2 as i64),
    )
}

fn epsilon_expr(a1: Expr, a2: Expr, a3: Expr, n1: u32, n2: u32) -> Expr {
    // eps = (a1/a3) * (a3/a2)^(n1/n2)
    simplify_basic(&Expr::Prod(vec![
        a1,
        Expr::recip(a3.clone()),
        Expr::pow(
            Expr::Prod(vec![a3, Expr::recip(a2)]),
            Rational::new(n1 as i64, n2 as i64),
        ),
    ]))
}

fn nondim_poly_expr(signs: (i8, i8), n1: u32, n2: u32) -> Expr {
    simplify_basic(&Expr::Sum(vec![
        Expr::Prod(vec![
            Expr::Int(signs.0 as i64),
            Expr::epsilon(),
            Expr::powi(Expr::var("y"), n1 as i64),
        ]),
        Expr::Prod(vec![
            Expr::Int(signs.1 as i64),
            Expr::powi(Expr::var("y"), n2 as i64),
        ]),
        Expr::Int(1),
    ]))
}

/// Symbolic nondimensionalization of `a1 x^n1 + a2 x^n2 + a3` with the
/// coefficients kept as positive parameters.
pub fn nondim_symbolic(n1: u32, n2: u32) -> Result<NondimResult, PolyError> {
    if !(0 < n2 && n2 < n1 && n1 <= 10) {
        return Err(PolyError::BadDegrees { n1, n2 });
    }
    let a = |k: u32| Expr::param(&format!("a{k}"));
    let substitution = simplify_basic(&Expr::Prod(vec![
        Expr::var("y"),
        scale_expr(a(3), a(2), n2),
    ]));
    Ok(NondimResult {
        substitution,
        nondim_poly: nondim_poly_expr((1, 1), n1, n2),
        epsilon: epsilon_expr(a(1), a(2), a(3), n1, n2),
        epsilon_value: None,
        signs: (1, 1),
    })
}

/// Numeric nondimensionalization: signs are accounted separately and the
/// substitution uses the coefficient magnitudes.
pub fn nondim_numeric(p: &ThreeTermPoly) -> Result<NondimResult, PolyError> {
    p.check()?;
    let [s1, s2, s3] = p.signs();
    let (m1, m2, m3) = (p.a1.abs(), p.a2.abs(), p.a3.abs());
    let substitution = simplify_basic(&Expr::Prod(vec![
        Expr::var("y"),
        scale_expr(Expr::Int(m3), Expr::Int(m2), p.n2),
    ]));
    let epsilon = epsilon_expr(Expr::Int(m1), Expr::Int(m2), Expr::Int(m3), p.n1, p.n2);
    let value = epsilon
        .eval(&Bindings::new())
        .expect("positive radical evaluates")
        .re;
    let signs = ((s1 * s3) as i8, (s2 * s3) as i8);
    Ok(NondimResult {
        substitution,
        nondim_poly: nondim_poly_expr(signs, p.n1, p.n2),
        epsilon,
        epsilon_value: Some((value * 100.0).round() / 100.0),
        signs,
    })
}

impl NondimResult {
    /// Numeric cross-check of the substitution: evaluate the original
    /// polynomial at `x = y * scale`, divide by the signed constant, and
    /// compare with the nondimensionalized form at the same `y`.
    pub fn substitution_residual(&self, p: &ThreeTermPoly, y: f64) -> f64 {
        let scale = self
            .substitution
            .substitute("y", &Expr::Int(1))
            .eval(&Bindings::new())
            .expect("scale evaluates")
            .re;
        let x = y * scale;
        let orig = p.a1 as f64 * x.powi(p.n1 as i32)
            + p.a2 as f64 * x.powi(p.n2 as i32)
            + p.a3 as f64;
        let lhs = orig / (p.a3 as f64);
        let mut b = Bindings::new();
        b.insert("y".into(), Complex64::new(y, 0.0));
        b.insert(
            "epsilon".into(),
            Complex64::new(
                self.epsilon.eval(&Bindings::new()).expect("eps").re,
                0.0,
            ),
        );
        let rhs = self.nondim_poly.eval(&b).expect("poly evaluates").re;
        (lhs - rhs).abs() / lhs.abs().max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse, render_latex, Dialect};

    #[test]
    fn symbolic_ten_nine_matches_worked_example() {
        let r = nondim_symbolic(10, 9).unwrap();
        let expect = parse(
            r"\frac{a_{1} \left(\frac{a_{3}}{a_{2}}\right)^{\frac{10}{9}}}{a_{3}}",
            Dialect::LatexLite,
        )
        .unwrap();
        assert_eq!(r.epsilon, expect);
        assert_eq!(
            r.substitution,
            parse(r"y \sqrt[9]{\frac{a_{3}}{a_{2}}}", Dialect::LatexLite).unwrap()
        );
        assert_eq!(
            r.nondim_poly,
            parse(r"\epsilon y^{10} + y^{9} + 1", Dialect::LatexLite).unwrap()
        );
    }

    #[test]
    fn symbolic_seven_two_substitution_is_square_root() {
        let r = nondim_symbolic(7, 2).unwrap();
        assert_eq!(
            r.substitution,
            parse(r"y \sqrt{\frac{a_{3}}{a_{2}}}", Dialect::LatexLite).unwrap()
        );
        assert_eq!(
            r.epsilon,
            parse(
                r"\frac{a_{1} \left(\frac{a_{3}}{a_{2}}\right)^{\frac{7}{2}}}{a_{3}}",
                Dialect::LatexLite
            )
            .unwrap()
        );
    }

    #[test]
    fn equal_coefficients_collapse_to_unit_epsilon() {
        for (n1, n2) in [(10, 9), (7, 2), (5, 3)] {
            let p = ThreeTermPoly {
                a1: 4,
                a2: 4,
                a3: 4,
                n1,
                n2,
            };
            let r = nondim_numeric(&p).unwrap();
            assert_eq!(r.epsilon, Expr::Int(1));
            assert_eq!(r.epsilon_value, Some(1.0));
        }
    }

    #[test]
    fn a2_numeric_example_gives_25_sqrt10_over_1024() {
        let p = ThreeTermPoly {
            a1: 2,
            a2: 8,
            a3: 5,
            n1: 7,
            n2: 2,
        };
        let r = nondim_numeric(&p).unwrap();
        assert_eq!(render_latex(&r.epsilon), r"\frac{25 \sqrt{10}}{1024}");
        assert_eq!(r.epsilon_value, Some(0.08));
        assert_eq!(r.signs, (1, 1));
        assert!(r.substitution_residual(&p, 1.7) < 1e-12);
    }

    #[test]
    fn degenerate_and_out_of_range_inputs_error() {
        let p = ThreeTermPoly {
            a1: 0,
            a2: 1,
            a3: 1,
            n1: 3,
            n2: 1,
        };
        assert_eq!(nondim_numeric(&p), Err(PolyError::DegenerateInput));
        assert!(matches!(
            nondim_symbolic(2, 2),
            Err(PolyError::BadDegrees { .. })
        ));
        assert!(matches!(
            nondim_symbolic(11, 2),
            Err(PolyError::BadDegrees { .. })
        ));
    }

    #[test]
    fn mixed_signs_map_to_s1s3_s2s3() {
        // 9 x^8 - 4 x^3 + 10: signs (+1, -1, +1) -> (s1 s3, s2 s3) = (1, -1)
        let p = ThreeTermPoly {
            a1: 9,
            a2: -4,
            a3: 10,
            n1: 8,
            n2: 3,
        };
        let r = nondim_numeric(&p).unwrap();
        assert_eq!(r.signs, (1, -1));
        // eps = (9/10) * (10/4)^(8/3)
        let expect = simplify_basic(
            &parse(r"\frac{9}{10} (10/4)^{8/3}", Dialect::LatexLite).unwrap(),
        );
        assert_eq!(r.epsilon, expect);
    }
}
