//! Immutable symbolic expression trees.
//!
//! The grammar is deliberately small: it is closed over exactly the node
//! kinds the problem generators emit, which keeps differentiation total and
//! canonicalization decidable. Values are immutable; every operation builds
//! new trees.

use super::rational::Rational;
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Function heads supported by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FuncKind {
    Sin,
    Cos,
    Atan,
    Exp,
}

impl FuncKind {
    pub fn name(&self) -> &'static str {
        match self {
            FuncKind::Sin => "sin",
            FuncKind::Cos => "cos",
            FuncKind::Atan => "atan",
            FuncKind::Exp => "exp",
        }
    }
}

/// A symbolic expression.
///
/// `Sum` and `Prod` are flattened n-ary nodes (no directly nested node of
/// the same tag in canonical form) and `Pow` exponents are always exact
/// rationals. `Param` names quantities that are positive reals by domain
/// convention (`epsilon`, `a1`..`a3`, `pi`); `Var` names the distinguished
/// unknown of a problem (`x`, `y`, `t`), which may take complex values.
#[derive(Debug, Clone)]
pub enum Expr {
    Int(i64),
    Rat(Rational),
    Float(f64),
    ImagUnit,
    Param(String),
    Var(String),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Pow(Box<Expr>, Rational),
    Func(FuncKind, Box<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_structural(other) == Ordering::Equal
    }
}

impl Eq for Expr {}

impl std::hash::Hash for Expr {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Expr::Int(n) => (0u8, n).hash(state),
            Expr::Rat(r) => (1u8, r).hash(state),
            Expr::Float(v) => (2u8, v.to_bits()).hash(state),
            Expr::ImagUnit => 3u8.hash(state),
            Expr::Param(s) => (4u8, s).hash(state),
            Expr::Var(s) => (5u8, s).hash(state),
            Expr::Func(k, a) => {
                (6u8, k).hash(state);
                a.hash(state);
            }
            Expr::Pow(b, e) => {
                7u8.hash(state);
                b.hash(state);
                e.hash(state);
            }
            Expr::Prod(fs) => {
                8u8.hash(state);
                fs.hash(state);
            }
            Expr::Sum(ts) => {
                9u8.hash(state);
                ts.hash(state);
            }
        }
    }
}

fn variant_rank(e: &Expr) -> u8 {
    match e {
        Expr::Int(_) => 0,
        Expr::Rat(_) => 1,
        Expr::Float(_) => 2,
        Expr::ImagUnit => 3,
        Expr::Param(_) => 4,
        Expr::Var(_) => 5,
        Expr::Func(..) => 6,
        Expr::Pow(..) => 7,
        Expr::Prod(_) => 8,
        Expr::Sum(_) => 9,
    }
}

impl Expr {
    /// Total structural order; the basis for canonical-form uniqueness.
    pub fn cmp_structural(&self, other: &Expr) -> Ordering {
        let r = variant_rank(self).cmp(&variant_rank(other));
        if r != Ordering::Equal {
            return r;
        }
        match (self, other) {
            (Expr::Int(a), Expr::Int(b)) => a.cmp(b),
            (Expr::Rat(a), Expr::Rat(b)) => a.cmp(b),
            (Expr::Float(a), Expr::Float(b)) => a.total_cmp(b),
            (Expr::ImagUnit, Expr::ImagUnit) => Ordering::Equal,
            (Expr::Param(a), Expr::Param(b)) | (Expr::Var(a), Expr::Var(b)) => a.cmp(b),
            (Expr::Func(ka, aa), Expr::Func(kb, ab)) => {
                ka.cmp(kb).then_with(|| aa.cmp_structural(ab))
            }
            (Expr::Pow(ba, ea), Expr::Pow(bb, eb)) => {
                ba.cmp_structural(bb).then_with(|| ea.cmp(eb))
            }
            (Expr::Prod(a), Expr::Prod(b)) | (Expr::Sum(a), Expr::Sum(b)) => {
                for (x, y) in a.iter().zip(b.iter()) {
                    let c = x.cmp_structural(y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                a.len().cmp(&b.len())
            }
            _ => unreachable!("variant ranks matched"),
        }
    }

    // ---- constructors ----

    pub fn int(n: i64) -> Expr {
        Expr::Int(n)
    }

    pub fn rat(num: i64, den: i64) -> Expr {
        let r = Rational::new(num, den);
        if r.is_integer() {
            Expr::Int(r.num())
        } else {
            Expr::Rat(r)
        }
    }

    pub fn from_rational(r: Rational) -> Expr {
        if r.is_integer() {
            Expr::Int(r.num())
        } else {
            Expr::Rat(r)
        }
    }

    pub fn float(v: f64) -> Expr {
        Expr::Float(v)
    }

    pub fn param(name: &str) -> Expr {
        Expr::Param(name.to_string())
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn epsilon() -> Expr {
        Expr::Param("epsilon".to_string())
    }

    pub fn sum(terms: Vec<Expr>) -> Expr {
        match terms.len() {
            0 => Expr::Int(0),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::Sum(terms),
        }
    }

    pub fn prod(factors: Vec<Expr>) -> Expr {
        match factors.len() {
            0 => Expr::Int(1),
            1 => factors.into_iter().next().unwrap(),
            _ => Expr::Prod(factors),
        }
    }

    pub fn pow(base: Expr, exp: Rational) -> Expr {
        Expr::Pow(Box::new(base), exp)
    }

    pub fn powi(base: Expr, exp: i64) -> Expr {
        Expr::Pow(Box::new(base), Rational::int(exp))
    }

    pub fn sqrt(e: Expr) -> Expr {
        Expr::Pow(Box::new(e), Rational::new(1, 2))
    }

    pub fn root(e: Expr, n: i64) -> Expr {
        Expr::Pow(Box::new(e), Rational::new(1, n))
    }

    pub fn func(kind: FuncKind, arg: Expr) -> Expr {
        Expr::Func(kind, Box::new(arg))
    }

    pub fn sin(e: Expr) -> Expr {
        Expr::func(FuncKind::Sin, e)
    }

    pub fn cos(e: Expr) -> Expr {
        Expr::func(FuncKind::Cos, e)
    }

    pub fn atan(e: Expr) -> Expr {
        Expr::func(FuncKind::Atan, e)
    }

    pub fn exp(e: Expr) -> Expr {
        Expr::func(FuncKind::Exp, e)
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Prod(vec![Expr::Int(-1), e])
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sum(vec![a, Expr::neg(b)])
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Prod(vec![a, Expr::powi(b, -1)])
    }

    pub fn recip(e: Expr) -> Expr {
        Expr::powi(e, -1)
    }

    // ---- predicates ----

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Int(0))
            || matches!(self, Expr::Rat(r) if r.is_zero())
            || matches!(self, Expr::Float(v) if *v == 0.0)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Int(1)) || matches!(self, Expr::Float(v) if *v == 1.0)
    }

    /// Numeric leaf (integer, rational or float constant).
    pub fn is_number(&self) -> bool {
        matches!(self, Expr::Int(_) | Expr::Rat(_) | Expr::Float(_))
    }

    /// True when the tree contains no `Var` and no `Param`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::Rat(_) | Expr::Float(_) | Expr::ImagUnit => true,
            Expr::Param(_) | Expr::Var(_) => false,
            Expr::Sum(es) | Expr::Prod(es) => es.iter().all(|e| e.is_constant()),
            Expr::Pow(b, _) => b.is_constant(),
            Expr::Func(_, a) => a.is_constant(),
        }
    }

    /// Conservative positivity check. `Param`s are positive reals by the
    /// domain convention, `Var`s may be complex and never count.
    pub fn is_positive(&self) -> bool {
        match self {
            Expr::Int(n) => *n > 0,
            Expr::Rat(r) => r.is_positive(),
            Expr::Float(v) => *v > 0.0,
            Expr::ImagUnit => false,
            Expr::Param(_) => true,
            Expr::Var(_) => false,
            Expr::Sum(ts) => ts.iter().all(|t| t.is_positive()),
            Expr::Prod(fs) => fs.iter().all(|f| f.is_positive()),
            Expr::Pow(b, _) => b.is_positive(),
            Expr::Func(..) => false,
        }
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Var(_) => true,
            Expr::Int(_) | Expr::Rat(_) | Expr::Float(_) | Expr::ImagUnit | Expr::Param(_) => false,
            Expr::Sum(es) | Expr::Prod(es) => es.iter().any(|e| e.contains_var()),
            Expr::Pow(b, _) => b.contains_var(),
            Expr::Func(_, a) => a.contains_var(),
        }
    }

    pub fn contains_float(&self) -> bool {
        match self {
            Expr::Float(_) => true,
            Expr::Int(_) | Expr::Rat(_) | Expr::ImagUnit | Expr::Param(_) | Expr::Var(_) => false,
            Expr::Sum(es) | Expr::Prod(es) => es.iter().any(|e| e.contains_float()),
            Expr::Pow(b, _) => b.contains_float(),
            Expr::Func(_, a) => a.contains_float(),
        }
    }

    /// Free symbol names (both `Param`s and `Var`s), deduplicated.
    pub fn free_symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Param(s) | Expr::Var(s) => {
                    if !out.iter().any(|x| x == s) {
                        out.push(s.clone());
                    }
                }
                Expr::Sum(es) | Expr::Prod(es) => es.iter().for_each(|e| walk(e, out)),
                Expr::Pow(b, _) => walk(b, out),
                Expr::Func(_, a) => walk(a, out),
                _ => {}
            }
        }
        walk(self, &mut out);
        out
    }

    /// Total degree in `Var` nodes; used for canonical term ordering.
    pub fn var_degree(&self) -> Rational {
        match self {
            Expr::Var(_) => Rational::ONE,
            Expr::Int(_) | Expr::Rat(_) | Expr::Float(_) | Expr::ImagUnit | Expr::Param(_) => {
                Rational::ZERO
            }
            Expr::Sum(ts) => ts
                .iter()
                .map(|t| t.var_degree())
                .max()
                .unwrap_or(Rational::ZERO),
            Expr::Prod(fs) => fs
                .iter()
                .fold(Rational::ZERO, |acc, f| acc + f.var_degree()),
            Expr::Pow(b, e) => b.var_degree() * *e,
            Expr::Func(..) => Rational::ZERO,
        }
    }

    /// Total degree in `Param` nodes; the secondary term-ordering key.
    pub fn param_degree(&self) -> Rational {
        match self {
            Expr::Param(_) => Rational::ONE,
            Expr::Int(_) | Expr::Rat(_) | Expr::Float(_) | Expr::ImagUnit | Expr::Var(_) => {
                Rational::ZERO
            }
            Expr::Sum(ts) => ts
                .iter()
                .map(|t| t.param_degree())
                .max()
                .unwrap_or(Rational::ZERO),
            Expr::Prod(fs) => fs
                .iter()
                .fold(Rational::ZERO, |acc, f| acc + f.param_degree()),
            Expr::Pow(b, e) => b.param_degree() * *e,
            Expr::Func(..) => Rational::ZERO,
        }
    }

    /// Substitute every occurrence of the named symbol (`Param` or `Var`)
    /// with `value`. The result is not canonicalized.
    pub fn substitute(&self, name: &str, value: &Expr) -> Expr {
        match self {
            Expr::Param(s) | Expr::Var(s) if s == name => value.clone(),
            Expr::Sum(ts) => Expr::Sum(ts.iter().map(|t| t.substitute(name, value)).collect()),
            Expr::Prod(fs) => Expr::Prod(fs.iter().map(|f| f.substitute(name, value)).collect()),
            Expr::Pow(b, e) => Expr::Pow(Box::new(b.substitute(name, value)), *e),
            Expr::Func(k, a) => Expr::Func(*k, Box::new(a.substitute(name, value))),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::infix::render_infix(self))
    }
}

/// Symbol bindings for numeric evaluation.
pub type Bindings = HashMap<String, Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("domain error: {0}")]
    DomainError(String),
}

impl Expr {
    /// Evaluate to a complex number with the principal branch for fractional
    /// powers. `pi` is bound automatically.
    pub fn eval(&self, bindings: &Bindings) -> Result<Complex64, EvalError> {
        let v = self.eval_inner(bindings)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(EvalError::DomainError("non-finite result".into()));
        }
        Ok(v)
    }

    fn eval_inner(&self, b: &Bindings) -> Result<Complex64, EvalError> {
        match self {
            Expr::Int(n) => Ok(Complex64::new(*n as f64, 0.0)),
            Expr::Rat(r) => Ok(Complex64::new(r.to_f64(), 0.0)),
            Expr::Float(v) => Ok(Complex64::new(*v, 0.0)),
            Expr::ImagUnit => Ok(Complex64::new(0.0, 1.0)),
            Expr::Param(s) | Expr::Var(s) => match b.get(s) {
                Some(v) => Ok(*v),
                None if s == "pi" => Ok(Complex64::new(std::f64::consts::PI, 0.0)),
                None => Err(EvalError::UnboundSymbol(s.clone())),
            },
            Expr::Sum(ts) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in ts {
                    acc += t.eval_inner(b)?;
                }
                Ok(acc)
            }
            Expr::Prod(fs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for f in fs {
                    acc *= f.eval_inner(b)?;
                }
                Ok(acc)
            }
            Expr::Pow(base, exp) => {
                let bv = base.eval_inner(b)?;
                eval_pow(bv, *exp)
            }
            Expr::Func(kind, arg) => {
                let a = arg.eval_inner(b)?;
                Ok(match kind {
                    FuncKind::Sin => a.sin(),
                    FuncKind::Cos => a.cos(),
                    FuncKind::Atan => a.atan(),
                    FuncKind::Exp => a.exp(),
                })
            }
        }
    }
}

fn eval_pow(base: Complex64, exp: Rational) -> Result<Complex64, EvalError> {
    if base.norm() == 0.0 {
        return if exp.is_positive() {
            Ok(Complex64::new(0.0, 0.0))
        } else if exp.is_zero() {
            Ok(Complex64::new(1.0, 0.0))
        } else {
            Err(EvalError::DomainError(
                "zero raised to a negative power".into(),
            ))
        };
    }
    if exp.is_integer() {
        let n = exp.num();
        if n.unsigned_abs() <= 64 {
            let p = base.powi(n.unsigned_abs() as i32);
            return Ok(if n < 0 { p.finv() } else { p });
        }
    }
    Ok(base.powc(Complex64::new(exp.to_f64(), 0.0)))
}

impl Expr {
    /// Exact symbolic derivative with respect to the named symbol. Total
    /// over the grammar; the result is not canonicalized (callers usually
    /// pass it through `simplify_basic`).
    pub fn differentiate_raw(&self, var: &str) -> Expr {
        match self {
            Expr::Int(_) | Expr::Rat(_) | Expr::Float(_) | Expr::ImagUnit => Expr::Int(0),
            Expr::Param(s) | Expr::Var(s) => {
                if s == var {
                    Expr::Int(1)
                } else {
                    Expr::Int(0)
                }
            }
            Expr::Sum(ts) => Expr::Sum(ts.iter().map(|t| t.differentiate_raw(var)).collect()),
            Expr::Prod(fs) => {
                let mut terms = Vec::new();
                for (i, fi) in fs.iter().enumerate() {
                    let mut factors = vec![fi.differentiate_raw(var)];
                    for (j, fj) in fs.iter().enumerate() {
                        if i != j {
                            factors.push(fj.clone());
                        }
                    }
                    terms.push(Expr::Prod(factors));
                }
                Expr::Sum(terms)
            }
            Expr::Pow(b, e) => {
                // d(b^e) = e * b^(e-1) * b'
                Expr::Prod(vec![
                    Expr::from_rational(*e),
                    Expr::Pow(b.clone(), *e - Rational::ONE),
                    b.differentiate_raw(var),
                ])
            }
            Expr::Func(kind, a) => {
                let da = a.differentiate_raw(var);
                let outer = match kind {
                    FuncKind::Sin => Expr::cos((**a).clone()),
                    FuncKind::Cos => Expr::neg(Expr::sin((**a).clone())),
                    FuncKind::Exp => Expr::exp((**a).clone()),
                    FuncKind::Atan => Expr::powi(
                        Expr::Sum(vec![Expr::Int(1), Expr::powi((**a).clone(), 2)]),
                        -1,
                    ),
                };
                Expr::Prod(vec![outer, da])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_binds_pi_automatically() {
        let e = Expr::cos(Expr::param("pi"));
        let v = e.eval(&Bindings::new()).unwrap();
        assert!((v.re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_sin_at_zero_is_zero() {
        let v = Expr::sin(Expr::Int(0)).eval(&Bindings::new()).unwrap();
        assert_eq!(v, c(0.0, 0.0));
    }

    #[test]
    fn eval_polynomial_coefficient_sum() {
        // 2 x^7 + 8 x^2 + 5 at x = 1 -> 15
        let x = Expr::var("x");
        let e = Expr::Sum(vec![
            Expr::Prod(vec![Expr::Int(2), Expr::powi(x.clone(), 7)]),
            Expr::Prod(vec![Expr::Int(8), Expr::powi(x.clone(), 2)]),
            Expr::Int(5),
        ]);
        let mut b = Bindings::new();
        b.insert("x".into(), c(1.0, 0.0));
        assert_eq!(e.eval(&b).unwrap(), c(15.0, 0.0));
    }

    #[test]
    fn eval_principal_branch_for_negative_base() {
        // (-1)^(1/2) = i
        let e = Expr::pow(Expr::Int(-1), Rational::new(1, 2));
        let v = e.eval(&Bindings::new()).unwrap();
        assert!((v - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_errors() {
        let e = Expr::powi(Expr::Int(0), -1);
        assert!(matches!(
            e.eval(&Bindings::new()),
            Err(EvalError::DomainError(_))
        ));
        let e = Expr::var("x");
        assert_eq!(
            e.eval(&Bindings::new()),
            Err(EvalError::UnboundSymbol("x".into()))
        );
    }

    #[test]
    fn box1_exponent_rate_at_endpoint() {
        // -(1.4 t^3 - 2.6 cos t + 1.3 atan t + 0.4) at t = 0.4 evaluates
        // to about 1.411
        let t = Expr::var("t");
        let f = Expr::Sum(vec![
            Expr::Prod(vec![Expr::float(1.4), Expr::powi(t.clone(), 3)]),
            Expr::Prod(vec![Expr::float(-2.6), Expr::cos(t.clone())]),
            Expr::Prod(vec![Expr::float(1.3), Expr::atan(t.clone())]),
            Expr::float(0.4),
        ]);
        let e = Expr::neg(f);
        let mut b = Bindings::new();
        b.insert("t".into(), c(0.4, 0.0));
        let v = e.eval(&b).unwrap();
        assert!((v.re - 1.411).abs() < 5e-4, "got {}", v.re);
    }

    #[test]
    fn var_degree_counts_vars_not_params() {
        let e = Expr::Prod(vec![
            Expr::epsilon(),
            Expr::powi(Expr::var("x"), 6),
        ]);
        assert_eq!(e.var_degree(), Rational::int(6));
        assert_eq!(e.param_degree(), Rational::ONE);
    }

    #[test]
    fn structural_order_is_total_and_consistent() {
        let a = Expr::Int(1);
        let b = Expr::param("epsilon");
        let c = Expr::var("x");
        assert_eq!(a.cmp_structural(&b), Ordering::Less);
        assert_eq!(b.cmp_structural(&c), Ordering::Less);
        assert_eq!(c.cmp_structural(&c), Ordering::Equal);
    }
}
