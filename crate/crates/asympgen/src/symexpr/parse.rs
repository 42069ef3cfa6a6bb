//! Parsers for the two text dialects.
//!
//! `Infix` is a plain calculator grammar (`+ - * / ^`, `sqrt`, `sin`, `cos`,
//! `atan`, `exp`, `epsilon`, `i`, implicit multiplication). `LatexLite`
//! additionally understands the LaTeX subset the solution texts and model
//! answers use: `\frac`, `\sqrt[n]{}`, `\epsilon`, `\pi`, `\boxed`,
//! `\left`/`\right` fences, `\cdot`, `\sin`-style function heads and
//! `\tan^{-1}`. Both dialects return canonical expressions, so
//! parse-render-parse is a fixed point.

use super::expr::{Expr, FuncKind};
use super::rational::Rational;
use super::simplify::simplify_basic;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Infix,
    LatexLite,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown symbol `{name}` at byte {offset}")]
    UnknownSymbol { name: String, offset: usize },
}

fn syntax<T>(offset: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        offset,
        msg: msg.into(),
    })
}

/// Parse one expression; trailing input is an error.
pub fn parse(src: &str, dialect: Dialect) -> Result<Expr, ParseError> {
    let toks = lex(src, dialect)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.parse_expr()?;
    p.expect_end()?;
    Ok(simplify_basic(&e))
}

/// Parse a comma-separated answer list, with or without `[` `]` brackets.
/// A single expression parses as a one-element list.
pub fn parse_expr_list(src: &str, dialect: Dialect) -> Result<Vec<Expr>, ParseError> {
    let toks = lex(src, dialect)?;
    let mut p = Parser { toks, pos: 0 };
    let bracketed = p.eat(&Tok::LBrack);
    let mut out = vec![p.parse_expr()?];
    while p.eat(&Tok::Comma) {
        if bracketed && p.peek() == Some(&Tok::RBrack) {
            break; // trailing comma
        }
        out.push(p.parse_expr()?);
    }
    if bracketed && !p.eat(&Tok::RBrack) {
        return syntax(p.offset(), "expected `]`");
    }
    p.expect_end()?;
    Ok(out.iter().map(simplify_basic).collect())
}

// ---- tokens ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Dec(String),
    Epsilon,
    Pi,
    ImagUnit,
    EulerE,
    Var(String),
    Param(String),
    Fun(FuncKind),
    Sqrt,
    Frac,
    Boxed,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Comma,
}

fn resolve_name(name: &str, offset: usize) -> Result<Tok, ParseError> {
    Ok(match name {
        "epsilon" | "varepsilon" => Tok::Epsilon,
        "pi" => Tok::Pi,
        "i" => Tok::ImagUnit,
        "e" => Tok::EulerE,
        "sin" => Tok::Fun(FuncKind::Sin),
        "cos" => Tok::Fun(FuncKind::Cos),
        "atan" | "arctan" => Tok::Fun(FuncKind::Atan),
        "exp" => Tok::Fun(FuncKind::Exp),
        "sqrt" => Tok::Sqrt,
        "x" | "y" | "t" => Tok::Var(name.to_string()),
        _ => {
            let mut chars = name.chars();
            let head = chars.next().unwrap();
            if head.is_ascii_alphabetic() && chars.clone().all(|c| c.is_ascii_digit()) {
                Tok::Param(name.to_string())
            } else {
                return Err(ParseError::UnknownSymbol {
                    name: name.to_string(),
                    offset,
                });
            }
        }
    })
}

fn lex(src: &str, dialect: Dialect) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' | '~' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push((Tok::Minus, i));
                i += c.len_utf8();
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '{' => {
                out.push((Tok::LBrace, i));
                i += 1;
            }
            '}' => {
                out.push((Tok::RBrace, i));
                i += 1;
            }
            '[' => {
                out.push((Tok::LBrack, i));
                i += 1;
            }
            ']' => {
                out.push((Tok::RBrack, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                let mut seen_dot = false;
                while i < bytes.len() {
                    match bytes[i] as char {
                        '0'..='9' => i += 1,
                        '.' if !seen_dot => {
                            seen_dot = true;
                            i += 1;
                        }
                        _ => break,
                    }
                }
                // scientific notation only when glued to the digits
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                        seen_dot = true; // force decimal handling
                    }
                }
                let text = &src[start..i];
                if text == "." {
                    return syntax(start, "stray `.`");
                }
                if seen_dot {
                    out.push((Tok::Dec(text.to_string()), start));
                } else {
                    match text.parse::<i64>() {
                        Ok(n) => out.push((Tok::Int(n), start)),
                        Err(_) => out.push((Tok::Dec(text.to_string()), start)),
                    }
                }
            }
            '\\' if dialect == Dialect::LatexLite => {
                let start = i;
                i += 1;
                if i < bytes.len() && !(bytes[i] as char).is_ascii_alphabetic() {
                    // escaped spacing like `\,` `\;` `\!` `\ `
                    i += 1;
                    continue;
                }
                let ws = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                    i += 1;
                }
                let cmd = &src[ws..i];
                match cmd {
                    "left" | "right" | "quad" | "qquad" | "limits" | "displaystyle" => {}
                    "cdot" | "times" => out.push((Tok::Star, start)),
                    "frac" | "dfrac" | "tfrac" => out.push((Tok::Frac, start)),
                    "sqrt" => out.push((Tok::Sqrt, start)),
                    "boxed" => out.push((Tok::Boxed, start)),
                    "tan" => {
                        // only `\tan^{-1}` is in the grammar
                        let rest = &src[i..];
                        let stripped = rest.trim_start();
                        let adv = rest.len() - stripped.len();
                        if let Some(r2) = stripped.strip_prefix("^{-1}") {
                            i += adv + (stripped.len() - r2.len());
                            out.push((Tok::Fun(FuncKind::Atan), start));
                        } else {
                            return Err(ParseError::UnknownSymbol {
                                name: "tan".to_string(),
                                offset: start,
                            });
                        }
                    }
                    other => out.push((resolve_name(other, start)?, start)),
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                match dialect {
                    Dialect::Infix => {
                        while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                            i += 1;
                        }
                        out.push((resolve_name(&src[start..i], start)?, start));
                    }
                    Dialect::LatexLite => {
                        // single letters, with subscripts merged: a_{1} -> a1
                        while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                            i += 1;
                        }
                        let word = &src[start..i];
                        if word.len() > 1 {
                            out.push((resolve_name(word, start)?, start));
                        } else {
                            let mut name = word.to_string();
                            if i < bytes.len() && bytes[i] == b'_' {
                                i += 1;
                                if i < bytes.len() && bytes[i] == b'{' {
                                    i += 1;
                                    let sub = i;
                                    while i < bytes.len() && bytes[i] != b'}' {
                                        i += 1;
                                    }
                                    name.push_str(&src[sub..i]);
                                    if i < bytes.len() {
                                        i += 1;
                                    }
                                } else if i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                                    name.push(bytes[i] as char);
                                    i += 1;
                                }
                            }
                            out.push((resolve_name(&name, start)?, start));
                        }
                    }
                }
            }
            other => return syntax(i, format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

// ---- parser ----

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, o)| *o)
            .unwrap_or(0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            syntax(self.offset(), "unexpected trailing input")
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.parse_term()?];
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.parse_term()?);
            } else if self.eat(&Tok::Minus) {
                terms.push(Expr::neg(self.parse_term()?));
            } else {
                break;
            }
        }
        Ok(Expr::sum(terms))
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Tok::Int(_)
                    | Tok::Dec(_)
                    | Tok::Epsilon
                    | Tok::Pi
                    | Tok::ImagUnit
                    | Tok::EulerE
                    | Tok::Var(_)
                    | Tok::Param(_)
                    | Tok::Fun(_)
                    | Tok::Sqrt
                    | Tok::Frac
                    | Tok::Boxed
                    | Tok::LParen
                    | Tok::LBrace
            )
        )
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.parse_unary()?];
        loop {
            if self.eat(&Tok::Star) {
                factors.push(self.parse_unary()?);
            } else if self.eat(&Tok::Slash) {
                factors.push(Expr::recip(self.parse_unary()?));
            } else if self.starts_primary() {
                factors.push(self.parse_unary()?);
            } else {
                break;
            }
        }
        Ok(Expr::prod(factors))
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::neg(self.parse_unary()?));
        }
        if self.eat(&Tok::Plus) {
            return self.parse_unary();
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_primary()?;
        while self.eat(&Tok::Caret) {
            let exp = self.parse_exponent()?;
            e = Expr::pow(e, exp);
        }
        Ok(e)
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        let off = self.offset();
        match self.next() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Dec(text)) => match text.parse::<f64>() {
                Ok(v) => Ok(Expr::Float(v)),
                Err(_) => syntax(off, "malformed number"),
            },
            Some(Tok::Epsilon) => Ok(Expr::epsilon()),
            Some(Tok::Pi) => Ok(Expr::param("pi")),
            Some(Tok::ImagUnit) => Ok(Expr::ImagUnit),
            Some(Tok::EulerE) => {
                if self.eat(&Tok::Caret) {
                    let arg = self.parse_exp_argument()?;
                    Ok(Expr::exp(arg))
                } else {
                    Ok(Expr::exp(Expr::Int(1)))
                }
            }
            Some(Tok::Var(name)) => Ok(Expr::Var(name)),
            Some(Tok::Param(name)) => Ok(Expr::Param(name)),
            Some(Tok::Fun(kind)) => {
                let arg = self.parse_group("function argument")?;
                Ok(Expr::func(kind, arg))
            }
            Some(Tok::Sqrt) => {
                let mut n = 2i64;
                if self.eat(&Tok::LBrack) {
                    let noff = self.offset();
                    match self.next() {
                        Some(Tok::Int(k)) if k >= 2 => n = k,
                        Some(Tok::Dec(t)) => match Rational::from_decimal_str(&t) {
                            Some(r) if r.is_integer() && r.num() >= 2 => n = r.num(),
                            _ => return syntax(noff, "root index must be an integer"),
                        },
                        _ => return syntax(noff, "root index must be an integer"),
                    }
                    if !self.eat(&Tok::RBrack) {
                        return syntax(self.offset(), "expected `]` after root index");
                    }
                }
                let arg = self.parse_group("radicand")?;
                Ok(Expr::pow(arg, Rational::new(1, n)))
            }
            Some(Tok::Frac) => {
                let num = self.parse_group("fraction numerator")?;
                let den = self.parse_group("fraction denominator")?;
                Ok(Expr::div(num, den))
            }
            Some(Tok::Boxed) => self.parse_group("boxed content"),
            Some(Tok::LParen) => {
                let e = self.parse_expr()?;
                if !self.eat(&Tok::RParen) {
                    return syntax(self.offset(), "expected `)`");
                }
                Ok(e)
            }
            Some(Tok::LBrace) => {
                let e = self.parse_expr()?;
                if !self.eat(&Tok::RBrace) {
                    return syntax(self.offset(), "expected `}`");
                }
                Ok(e)
            }
            Some(other) => syntax(off, format!("unexpected token {other:?}")),
            None => syntax(off, "unexpected end of input"),
        }
    }

    /// `( expr )`, `{ expr }`, or a bare primary for forms like `\sin t`.
    fn parse_group(&mut self, what: &str) -> Result<Expr, ParseError> {
        if self.eat(&Tok::LParen) {
            let e = self.parse_expr()?;
            if !self.eat(&Tok::RParen) {
                return syntax(self.offset(), format!("expected `)` closing {what}"));
            }
            Ok(e)
        } else if self.eat(&Tok::LBrace) {
            let e = self.parse_expr()?;
            if !self.eat(&Tok::RBrace) {
                return syntax(self.offset(), format!("expected `}}` closing {what}"));
            }
            Ok(e)
        } else if self.starts_primary() {
            self.parse_postfix()
        } else {
            syntax(self.offset(), format!("expected {what}"))
        }
    }

    /// Argument of `e^...`: a braced full expression or a single postfix
    /// unit, e.g. `e^{1.411 x}` or `e^2`.
    fn parse_exp_argument(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::LBrace) {
            let e = self.parse_expr()?;
            if !self.eat(&Tok::RBrace) {
                return syntax(self.offset(), "expected `}` closing exponent");
            }
            Ok(e)
        } else if self.eat(&Tok::LParen) {
            let e = self.parse_expr()?;
            if !self.eat(&Tok::RParen) {
                return syntax(self.offset(), "expected `)` closing exponent");
            }
            Ok(e)
        } else if self.eat(&Tok::Minus) {
            Ok(Expr::neg(self.parse_postfix()?))
        } else {
            self.parse_postfix()
        }
    }

    /// Pow exponents must reduce to rational constants.
    fn parse_exponent(&mut self) -> Result<Rational, ParseError> {
        let off = self.offset();
        if self.eat(&Tok::LBrace) {
            let r = self.parse_signed_rational()?;
            if !self.eat(&Tok::RBrace) {
                return syntax(self.offset(), "expected `}` closing exponent");
            }
            Ok(r)
        } else if self.eat(&Tok::LParen) {
            let r = self.parse_signed_rational()?;
            if !self.eat(&Tok::RParen) {
                return syntax(self.offset(), "expected `)` closing exponent");
            }
            Ok(r)
        } else {
            match self.parse_signed_rational() {
                Ok(r) => Ok(r),
                Err(_) => syntax(off, "exponent must be a rational constant"),
            }
        }
    }

    fn parse_signed_rational(&mut self) -> Result<Rational, ParseError> {
        let mut sign = Rational::ONE;
        loop {
            if self.eat(&Tok::Minus) {
                sign = -sign;
            } else if self.eat(&Tok::Plus) {
            } else {
                break;
            }
        }
        let off = self.offset();
        let head = match self.next() {
            Some(Tok::Int(n)) => Rational::int(n),
            Some(Tok::Dec(t)) => match Rational::from_decimal_str(&t) {
                Some(r) => r,
                None => return syntax(off, "malformed numeric exponent"),
            },
            Some(Tok::Frac) => {
                let num = self.parse_braced_rational()?;
                let den = self.parse_braced_rational()?;
                if den.is_zero() {
                    return syntax(off, "zero denominator in exponent");
                }
                return Ok(sign * num / den);
            }
            _ => return syntax(off, "exponent must be a rational constant"),
        };
        if self.eat(&Tok::Slash) {
            let doff = self.offset();
            let den = match self.next() {
                Some(Tok::Int(n)) => Rational::int(n),
                Some(Tok::Dec(t)) => match Rational::from_decimal_str(&t) {
                    Some(r) => r,
                    None => return syntax(doff, "malformed numeric exponent"),
                },
                _ => return syntax(doff, "exponent must be a rational constant"),
            };
            if den.is_zero() {
                return syntax(doff, "zero denominator in exponent");
            }
            Ok(sign * head / den)
        } else {
            Ok(sign * head)
        }
    }

    fn parse_braced_rational(&mut self) -> Result<Rational, ParseError> {
        if !self.eat(&Tok::LBrace) {
            return syntax(self.offset(), "expected `{`");
        }
        let r = self.parse_signed_rational()?;
        if !self.eat(&Tok::RBrace) {
            return syntax(self.offset(), "expected `}`");
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn latex(s: &str) -> Expr {
        parse(s, Dialect::LatexLite).unwrap()
    }

    fn infix(s: &str) -> Expr {
        parse(s, Dialect::Infix).unwrap()
    }

    #[test]
    fn one_over_epsilon() {
        assert_eq!(
            latex(r"\frac{1}{\epsilon}"),
            Expr::powi(Expr::epsilon(), -1)
        );
    }

    #[test]
    fn a2_polynomial() {
        let e = latex("2 x^{7} + 8 x^{2} + 5");
        let x = Expr::var("x");
        let expect = simplify_basic(&Expr::Sum(vec![
            Expr::Prod(vec![Expr::Int(2), Expr::powi(x.clone(), 7)]),
            Expr::Prod(vec![Expr::Int(8), Expr::powi(x.clone(), 2)]),
            Expr::Int(5),
        ]));
        assert_eq!(e, expect);
        assert_eq!(e, infix("2*x^7 + 8*x^2 + 5"));
    }

    #[test]
    fn complex_root_factor() {
        let e = latex(r"(1 + \sqrt{3} i)/2");
        let expect = simplify_basic(&Expr::Prod(vec![
            Expr::rat(1, 2),
            Expr::Sum(vec![
                Expr::Int(1),
                Expr::Prod(vec![Expr::sqrt(Expr::Int(3)), Expr::ImagUnit]),
            ]),
        ]));
        assert_eq!(e, expect);
    }

    #[test]
    fn nth_root_and_nested_fraction() {
        let e = latex(r"\sqrt[6]{- \frac{1}{\epsilon}}");
        let base = simplify_basic(&Expr::neg(Expr::powi(Expr::epsilon(), -1)));
        assert_eq!(e, Expr::pow(base, Rational::new(1, 6)));
    }

    #[test]
    fn euler_e_power_is_exp() {
        let e = latex("e^{1.411 x}");
        assert_eq!(
            e,
            Expr::exp(Expr::Prod(vec![Expr::Float(1.411), Expr::var("x")]))
        );
    }

    #[test]
    fn tan_inverse_head() {
        let e = latex(r"\tan^{-1}{\left(t \right)}");
        assert_eq!(e, Expr::atan(Expr::var("t")));
        assert_eq!(infix("atan(t)"), Expr::atan(Expr::var("t")));
    }

    #[test]
    fn subscripted_parameters() {
        let e = latex(r"a_{1} + a_2");
        assert_eq!(
            e,
            simplify_basic(&Expr::Sum(vec![Expr::param("a1"), Expr::param("a2")]))
        );
    }

    #[test]
    fn decimal_exponents_become_rationals() {
        let e = latex(r"\epsilon^{0.8333}");
        assert_eq!(e, Expr::pow(Expr::epsilon(), Rational::new(8333, 10000)));
        let e = infix("epsilon^(-5/6)");
        assert_eq!(e, Expr::pow(Expr::epsilon(), Rational::new(-5, 6)));
    }

    #[test]
    fn boxed_is_transparent() {
        assert_eq!(latex(r"\boxed{\epsilon}"), Expr::epsilon());
    }

    #[test]
    fn answer_lists() {
        let v = parse_expr_list(r"\left[ 1, -1, i, -i\right]", Dialect::LatexLite).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], Expr::Int(1));
        assert_eq!(v[2], Expr::ImagUnit);
        let v = parse_expr_list("1/epsilon", Dialect::Infix).unwrap();
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn syntax_error_has_offset() {
        match parse("2*+", Dialect::Infix) {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_symbols_are_rejected() {
        assert!(matches!(
            parse(r"\log{x}", Dialect::LatexLite),
            Err(ParseError::UnknownSymbol { .. })
        ));
        assert!(matches!(
            parse("foo + 1", Dialect::Infix),
            Err(ParseError::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn implicit_multiplication_variants() {
        assert_eq!(
            latex(r"2\epsilon x"),
            simplify_basic(&Expr::Prod(vec![
                Expr::Int(2),
                Expr::epsilon(),
                Expr::var("x")
            ]))
        );
        assert_eq!(
            latex(r"-6 (x - 11.45)^{-1}"),
            simplify_basic(&Expr::Prod(vec![
                Expr::Int(-6),
                Expr::powi(
                    Expr::Sum(vec![Expr::var("x"), Expr::Float(-11.45)]),
                    -1
                )
            ]))
        );
    }
}
