//! LaTeX emission.
//!
//! Output re-parses through the latex-lite dialect to a structurally equal
//! expression, and term order is the canonical order, so rendering is
//! deterministic. Fractions follow the solution-text conventions: rational
//! coefficients and negative powers of atomic bases become `\frac`, while
//! negative powers of sums that carry float constants (blow-up factors like
//! `(x - 11.45)^{-1}`) stay inline.

use super::expr::{Expr, FuncKind};
use super::rational::Rational;

pub fn render_latex(e: &Expr) -> String {
    let (neg, body) = render_signed(e);
    if neg {
        format!("- {body}")
    } else {
        body
    }
}

/// Render with the leading sign split off.
fn render_signed(e: &Expr) -> (bool, String) {
    match e {
        Expr::Int(n) if *n < 0 => (true, format_int(-n)),
        Expr::Rat(r) if r.is_negative() => (true, format_rat(&r.abs())),
        Expr::Float(v) if *v < 0.0 => (true, format_float(-v)),
        Expr::Prod(fs) => {
            if let Some((negated, rest)) = strip_negative_coefficient(fs) {
                (true, render_product(&rest_with(negated, rest)))
            } else {
                (false, render_product(fs))
            }
        }
        Expr::Pow(..) => (false, render_product(std::slice::from_ref(e))),
        other => (false, render_expr(other)),
    }
}

fn strip_negative_coefficient(fs: &[Expr]) -> Option<(Expr, &[Expr])> {
    match fs.first() {
        Some(Expr::Int(n)) if *n < 0 => Some((Expr::Int(-n), &fs[1..])),
        Some(Expr::Rat(r)) if r.is_negative() => Some((Expr::from_rational(-*r), &fs[1..])),
        Some(Expr::Float(v)) if *v < 0.0 => Some((Expr::Float(-v), &fs[1..])),
        _ => None,
    }
}

fn rest_with(head: Expr, rest: &[Expr]) -> Vec<Expr> {
    if head.is_one() {
        rest.to_vec()
    } else {
        let mut v = Vec::with_capacity(rest.len() + 1);
        v.push(head);
        v.extend(rest.iter().cloned());
        v
    }
}

fn render_expr(e: &Expr) -> String {
    match e {
        Expr::Int(n) => format_int(*n),
        Expr::Rat(r) => {
            if r.is_negative() {
                format!("- {}", format_rat(&r.abs()))
            } else {
                format_rat(r)
            }
        }
        Expr::Float(v) => {
            if *v < 0.0 {
                format!("- {}", format_float(-v))
            } else {
                format_float(*v)
            }
        }
        Expr::ImagUnit => "i".to_string(),
        Expr::Param(name) => format_symbol(name),
        Expr::Var(name) => name.clone(),
        Expr::Func(kind, arg) => render_func(*kind, arg),
        Expr::Pow(..) | Expr::Prod(_) => {
            let (neg, body) = render_signed(e);
            if neg {
                format!("- {body}")
            } else {
                body
            }
        }
        Expr::Sum(ts) => render_sum(ts),
    }
}

fn render_sum(ts: &[Expr]) -> String {
    let mut out = String::new();
    for (i, t) in ts.iter().enumerate() {
        let (neg, body) = render_signed(t);
        if i == 0 {
            if neg {
                out.push_str("- ");
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

/// True when a negative power of this base should render inline as
/// `(base)^{-n}` rather than as a fraction.
fn inline_negative_power(base: &Expr) -> bool {
    matches!(base, Expr::Sum(_)) && base.contains_float()
}

fn render_product(fs: &[Expr]) -> String {
    let mut num_items: Vec<(Expr, Rational)> = Vec::new();
    let mut den_items: Vec<(Expr, Rational)> = Vec::new();
    let mut num_coef: Option<String> = None;
    let mut den_coef: Option<String> = None;

    for f in fs {
        match f {
            Expr::Int(n) => num_coef = Some(format_int(*n)),
            Expr::Float(v) => num_coef = Some(format_float(*v)),
            Expr::Rat(r) => {
                num_coef = Some(format_int(r.num()));
                den_coef = Some(format_int(r.den()));
            }
            Expr::Pow(base, exp) if exp.is_negative() && !inline_negative_power(base) => {
                den_items.push(((**base).clone(), -*exp));
            }
            Expr::Pow(base, exp) => num_items.push(((**base).clone(), *exp)),
            other => num_items.push((other.clone(), Rational::ONE)),
        }
    }

    let render_side = |coef: &Option<String>, items: &[(Expr, Rational)]| -> String {
        // a lone sum needs no fences inside \frac braces
        let bare_sum = coef.is_none()
            && items.len() == 1
            && items[0].1.is_one()
            && matches!(items[0].0, Expr::Sum(_));
        if bare_sum {
            return render_expr(&items[0].0);
        }
        let mut out = String::new();
        match (coef, items.is_empty()) {
            (Some(c), false) if c == "1" => {}
            (Some(c), _) => out.push_str(c),
            (None, _) => {}
        }
        for (base, exp) in items {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&render_factor(base, exp));
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    };

    let numerator = render_side(&num_coef, &num_items);
    if den_items.is_empty() && den_coef.is_none() {
        numerator
    } else {
        let denominator = render_side(&den_coef, &den_items);
        format!("\\frac{{{numerator}}}{{{denominator}}}")
    }
}

fn render_factor(base: &Expr, exp: &Rational) -> String {
    if exp.is_one() {
        return match base {
            Expr::Sum(_) => format!("\\left({}\\right)", render_expr(base)),
            _ => render_expr(base),
        };
    }
    if exp.num() == 1 && exp.den() == 2 {
        return format!("\\sqrt{{{}}}", render_expr(base));
    }
    if exp.num() == 1 {
        return format!("\\sqrt[{}]{{{}}}", exp.den(), render_expr(base));
    }
    let base_str = match base {
        Expr::Int(n) if *n >= 0 => format_int(*n),
        Expr::Param(name) => format_symbol(name),
        Expr::Var(name) => name.clone(),
        Expr::ImagUnit => "i".to_string(),
        other => format!("\\left({}\\right)", render_expr(other)),
    };
    format!("{}^{{{}}}", base_str, format_exponent(exp))
}

fn format_exponent(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.num())
    } else if r.is_negative() {
        format!("- \\frac{{{}}}{{{}}}", -r.num(), r.den())
    } else {
        format!("\\frac{{{}}}{{{}}}", r.num(), r.den())
    }
}

fn render_func(kind: FuncKind, arg: &Expr) -> String {
    match kind {
        FuncKind::Exp => {
            if matches!(arg, Expr::Int(1)) {
                "e".to_string()
            } else {
                format!("e^{{{}}}", render_latex(arg))
            }
        }
        FuncKind::Sin => format!("\\sin{{\\left({} \\right)}}", render_latex(arg)),
        FuncKind::Cos => format!("\\cos{{\\left({} \\right)}}", render_latex(arg)),
        FuncKind::Atan => format!("\\tan^{{-1}}{{\\left({} \\right)}}", render_latex(arg)),
    }
}

fn format_int(n: i64) -> String {
    n.to_string()
}

fn format_rat(r: &Rational) -> String {
    if r.is_integer() {
        format_int(r.num())
    } else {
        format!("\\frac{{{}}}{{{}}}", r.num(), r.den())
    }
}

fn format_float(v: f64) -> String {
    format!("{v}")
}

fn format_symbol(name: &str) -> String {
    match name {
        "epsilon" => "\\epsilon".to_string(),
        "pi" => "\\pi".to_string(),
        _ => {
            let head: String = name.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
            let tail: String = name.chars().skip(head.len()).collect();
            if tail.is_empty() {
                head
            } else {
                format!("{head}_{{{tail}}}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse::{parse, Dialect};
    use crate::symexpr::simplify::simplify_basic;

    fn roundtrip(e: &Expr) {
        let canon = simplify_basic(e);
        let text = render_latex(&canon);
        let back = parse(&text, Dialect::LatexLite)
            .unwrap_or_else(|err| panic!("failed to reparse `{text}`: {err}"));
        assert_eq!(back, canon, "round trip changed `{text}`");
    }

    #[test]
    fn epsilon_radical_fraction() {
        // 25 sqrt(10) / 1024
        let e = simplify_basic(&Expr::Prod(vec![
            Expr::rat(25, 1024),
            Expr::sqrt(Expr::Int(10)),
        ]));
        assert_eq!(render_latex(&e), r"\frac{25 \sqrt{10}}{1024}");
        roundtrip(&e);
    }

    #[test]
    fn bare_epsilon() {
        assert_eq!(render_latex(&Expr::epsilon()), r"\epsilon");
    }

    #[test]
    fn blowup_factor_inline_power() {
        let e = simplify_basic(&Expr::Prod(vec![
            Expr::Int(-6),
            Expr::powi(Expr::Sum(vec![Expr::var("x"), Expr::Float(-11.45)]), -1),
        ]));
        assert_eq!(render_latex(&e), r"- 6 \left(x - 11.45\right)^{-1}");
        roundtrip(&e);
    }

    #[test]
    fn plain_negative_power_is_a_fraction() {
        let e = simplify_basic(&Expr::neg(Expr::div(
            Expr::epsilon(),
            Expr::Sum(vec![
                Expr::Prod(vec![Expr::Int(3), Expr::epsilon()]),
                Expr::Int(-1),
            ]),
        )));
        assert_eq!(render_latex(&e), r"- \frac{\epsilon}{3 \epsilon - 1}");
        roundtrip(&e);
    }

    #[test]
    fn sixth_root_of_negative_reciprocal() {
        let e = simplify_basic(&Expr::pow(
            Expr::neg(Expr::recip(Expr::epsilon())),
            Rational::new(1, 6),
        ));
        assert_eq!(render_latex(&e), r"\sqrt[6]{- \frac{1}{\epsilon}}");
        roundtrip(&e);
    }

    #[test]
    fn symbolic_nondim_epsilon_shape() {
        // a1 (a3/a2)^(10/9) / a3
        let e = simplify_basic(&Expr::Prod(vec![
            Expr::param("a1"),
            Expr::pow(
                Expr::div(Expr::param("a3"), Expr::param("a2")),
                Rational::new(10, 9),
            ),
            Expr::recip(Expr::param("a3")),
        ]));
        assert_eq!(
            render_latex(&e),
            r"\frac{a_{1} \left(\frac{a_{3}}{a_{2}}\right)^{\frac{10}{9}}}{a_{3}}"
        );
        roundtrip(&e);
    }

    #[test]
    fn functions_and_exponentials() {
        let t = Expr::var("t");
        let e = simplify_basic(&Expr::Sum(vec![
            Expr::Prod(vec![Expr::Float(1.4), Expr::powi(t.clone(), 3)]),
            Expr::Prod(vec![Expr::Float(-2.6), Expr::cos(t.clone())]),
            Expr::Prod(vec![Expr::Float(1.3), Expr::atan(t.clone())]),
            Expr::Float(0.4),
        ]));
        assert_eq!(
            render_latex(&e),
            r"1.4 t^{3} - 2.6 \cos{\left(t \right)} + 1.3 \tan^{-1}{\left(t \right)} + 0.4"
        );
        roundtrip(&e);

        let lap = simplify_basic(&Expr::neg(Expr::div(
            Expr::Prod(vec![
                Expr::Float(0.517),
                Expr::exp(Expr::Prod(vec![Expr::Float(1.411), Expr::var("x")])),
            ]),
            Expr::var("x"),
        )));
        assert_eq!(render_latex(&lap), r"- \frac{0.517 e^{1.411 x}}{x}");
        roundtrip(&lap);
    }

    #[test]
    fn powers_of_functions_parenthesize() {
        let e = simplify_basic(&Expr::powi(Expr::sin(Expr::var("t")), 2));
        roundtrip(&e);
    }
}
