//! Plain-text infix emission; the canonical serialization form for
//! expressions stored in dataset records. Output re-parses through the
//! infix dialect to a structurally equal expression.

use super::expr::{Expr, FuncKind};
use super::rational::Rational;

pub fn render_infix(e: &Expr) -> String {
    match e {
        Expr::Int(n) => n.to_string(),
        Expr::Rat(r) => format!("{}/{}", r.num(), r.den()),
        Expr::Float(v) => format!("{v}"),
        Expr::ImagUnit => "i".to_string(),
        Expr::Param(name) => name.clone(),
        Expr::Var(name) => name.clone(),
        Expr::Func(kind, arg) => format!("{}({})", func_name(*kind), render_infix(arg)),
        Expr::Pow(base, exp) => format!("{}^{}", atom(base), exponent(exp)),
        Expr::Prod(_) => {
            let (neg, body) = signed(e);
            if neg {
                format!("-{body}")
            } else {
                body
            }
        }
        Expr::Sum(ts) => {
            let mut out = String::new();
            for (i, t) in ts.iter().enumerate() {
                let (neg, body) = signed(t);
                if i == 0 {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                out.push_str(&body);
            }
            out
        }
    }
}

fn func_name(kind: FuncKind) -> &'static str {
    match kind {
        FuncKind::Sin => "sin",
        FuncKind::Cos => "cos",
        FuncKind::Atan => "atan",
        FuncKind::Exp => "exp",
    }
}

fn signed(e: &Expr) -> (bool, String) {
    match e {
        Expr::Int(n) if *n < 0 => (true, (-n).to_string()),
        Expr::Rat(r) if r.is_negative() => (true, render_infix(&Expr::from_rational(r.abs()))),
        Expr::Float(v) if *v < 0.0 => (true, format!("{}", -v)),
        Expr::Prod(fs) => match fs.first() {
            Some(Expr::Int(n)) if *n < 0 => {
                let mut v = vec![Expr::Int(-n)];
                v.extend(fs[1..].iter().cloned());
                (true, render_prod_parts(&v))
            }
            Some(Expr::Rat(r)) if r.is_negative() => {
                let mut v = vec![Expr::from_rational(-*r)];
                v.extend(fs[1..].iter().cloned());
                (true, render_prod_parts(&v))
            }
            Some(Expr::Float(x)) if *x < 0.0 => {
                let mut v = vec![Expr::Float(-x)];
                v.extend(fs[1..].iter().cloned());
                (true, render_prod_parts(&v))
            }
            _ => (false, render_prod_parts(fs)),
        },
        other => (false, render_infix(other)),
    }
}

fn render_prod_parts(fs: &[Expr]) -> String {
    if fs.len() == 1 && fs[0].is_one() {
        return "1".to_string();
    }
    let parts: Vec<String> = fs
        .iter()
        .filter(|f| !f.is_one() || fs.len() == 1)
        .map(factor)
        .collect();
    parts.join("*")
}

fn factor(e: &Expr) -> String {
    match e {
        Expr::Sum(_) => format!("({})", render_infix(e)),
        Expr::Rat(_) => format!("({})", render_infix(e)),
        Expr::Int(n) if *n < 0 => format!("({n})"),
        Expr::Float(v) if *v < 0.0 => format!("({v})"),
        _ => render_infix(e),
    }
}

fn atom(e: &Expr) -> String {
    match e {
        Expr::Int(n) if *n >= 0 => n.to_string(),
        Expr::Param(name) | Expr::Var(name) => name.clone(),
        Expr::ImagUnit => "i".to_string(),
        Expr::Func(..) => render_infix(e),
        other => format!("({})", render_infix(other)),
    }
}

fn exponent(r: &Rational) -> String {
    if r.is_integer() && !r.is_negative() {
        format!("{}", r.num())
    } else if r.is_integer() {
        format!("({})", r.num())
    } else {
        format!("({}/{})", r.num(), r.den())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse::{parse, Dialect};
    use crate::symexpr::simplify::simplify_basic;

    fn roundtrip(e: &Expr) {
        let canon = simplify_basic(e);
        let text = render_infix(&canon);
        let back = parse(&text, Dialect::Infix)
            .unwrap_or_else(|err| panic!("failed to reparse `{text}`: {err}"));
        assert_eq!(back, canon, "round trip changed `{text}`");
    }

    #[test]
    fn polynomial() {
        let x = Expr::var("x");
        let e = simplify_basic(&Expr::Sum(vec![
            Expr::Prod(vec![Expr::Int(2), Expr::powi(x.clone(), 7)]),
            Expr::Prod(vec![Expr::Int(8), Expr::powi(x.clone(), 2)]),
            Expr::Int(5),
        ]));
        assert_eq!(render_infix(&e), "2*x^7 + 8*x^2 + 5");
        roundtrip(&e);
    }

    #[test]
    fn radicals_and_fractions() {
        let e = simplify_basic(&Expr::Prod(vec![
            Expr::rat(25, 1024),
            Expr::sqrt(Expr::Int(10)),
        ]));
        assert_eq!(render_infix(&e), "(25/1024)*10^(1/2)");
        roundtrip(&e);
    }

    #[test]
    fn negative_reciprocal_root() {
        let e = simplify_basic(&Expr::pow(
            Expr::neg(Expr::recip(Expr::epsilon())),
            Rational::new(1, 6),
        ));
        assert_eq!(render_infix(&e), "(-epsilon^(-1))^(1/6)");
        roundtrip(&e);
    }

    #[test]
    fn functions() {
        let e = simplify_basic(&Expr::Prod(vec![
            Expr::Float(-2.6),
            Expr::cos(Expr::var("t")),
        ]));
        roundtrip(&e);
        let e = simplify_basic(&Expr::exp(Expr::Prod(vec![
            Expr::Float(1.411),
            Expr::var("x"),
        ])));
        assert_eq!(render_infix(&e), "exp(1.411*x)");
        roundtrip(&e);
    }
}
