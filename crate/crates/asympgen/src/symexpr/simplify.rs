//! Canonicalization: constant folding, flattening, like-term collection and
//! power normalization.
//!
//! The canonical form is unique for expressions equal under commutativity of
//! `Sum`/`Prod`: children are fully simplified, numeric content is folded
//! into a single leading coefficient, same-base powers are merged, and
//! siblings are sorted by a fixed total order (descending variable degree,
//! then descending parameter degree, then structural).
//!
//! Branch safety rules for powers, with `z` arbitrary complex:
//! - `z^a * z^b -> z^(a+b)` always (principal branch identity);
//! - `(z^a)^n -> z^(a*n)` only for integer `n`, or when the inner base is a
//!   positive real;
//! - `(u*v)^n` distributes for integer `n`, or when every factor is a
//!   positive real. Mixed-sign radicals such as `(-1/eps)^(1/6)` are kept
//!   whole, matching how the root expressions are presented.

use super::expr::{Expr, FuncKind};
use super::rational::Rational;
use std::cmp::Ordering;

/// Canonicalize an expression. Idempotent and semantics-preserving (up to
/// floating round-off when float constants fold).
pub fn simplify_basic(e: &Expr) -> Expr {
    let mut cur = simp(e);
    for _ in 0..4 {
        let next = simp(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
    cur
}

/// Numeric coefficient accumulator: exact while all inputs are exact,
/// float-contaminated otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Coef {
    Rat(Rational),
    Float(f64),
}

impl Coef {
    fn one() -> Coef {
        Coef::Rat(Rational::ONE)
    }

    fn zero() -> Coef {
        Coef::Rat(Rational::ZERO)
    }

    fn from_expr(e: &Expr) -> Option<Coef> {
        match e {
            Expr::Int(n) => Some(Coef::Rat(Rational::int(*n))),
            Expr::Rat(r) => Some(Coef::Rat(*r)),
            Expr::Float(v) => Some(Coef::Float(*v)),
            _ => None,
        }
    }

    fn to_f64(self) -> f64 {
        match self {
            Coef::Rat(r) => r.to_f64(),
            Coef::Float(v) => v,
        }
    }

    fn mul(self, other: Coef) -> Coef {
        match (self, other) {
            (Coef::Rat(a), Coef::Rat(b)) => match checked_mul(a, b) {
                Some(r) => Coef::Rat(r),
                None => Coef::Float(a.to_f64() * b.to_f64()),
            },
            _ => Coef::Float(self.to_f64() * other.to_f64()),
        }
    }

    fn add(self, other: Coef) -> Coef {
        match (self, other) {
            (Coef::Rat(a), Coef::Rat(b)) => match checked_add(a, b) {
                Some(r) => Coef::Rat(r),
                None => Coef::Float(a.to_f64() + b.to_f64()),
            },
            _ => Coef::Float(self.to_f64() + other.to_f64()),
        }
    }

    fn neg(self) -> Coef {
        match self {
            Coef::Rat(r) => Coef::Rat(-r),
            Coef::Float(v) => Coef::Float(-v),
        }
    }

    fn is_zero(self) -> bool {
        match self {
            Coef::Rat(r) => r.is_zero(),
            Coef::Float(v) => v == 0.0,
        }
    }

    fn is_one(self) -> bool {
        match self {
            Coef::Rat(r) => r.is_one(),
            Coef::Float(v) => v == 1.0,
        }
    }

    fn to_expr(self) -> Expr {
        match self {
            Coef::Rat(r) => Expr::from_rational(r),
            Coef::Float(v) => Expr::Float(v),
        }
    }
}

fn checked_mul(a: Rational, b: Rational) -> Option<Rational> {
    let num = (a.num() as i128).checked_mul(b.num() as i128)?;
    let den = (a.den() as i128).checked_mul(b.den() as i128)?;
    reduce_checked(num, den)
}

fn checked_add(a: Rational, b: Rational) -> Option<Rational> {
    let num = (a.num() as i128)
        .checked_mul(b.den() as i128)?
        .checked_add((b.num() as i128).checked_mul(a.den() as i128)?)?;
    let den = (a.den() as i128).checked_mul(b.den() as i128)?;
    reduce_checked(num, den)
}

fn reduce_checked(num: i128, den: i128) -> Option<Rational> {
    let (mut a, mut b) = (num.abs(), den.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    let g = a.max(1);
    let (n, d) = (num / g, den / g);
    if n.abs() > i64::MAX as i128 || d.abs() > i64::MAX as i128 {
        return None;
    }
    Some(Rational::new(n as i64, d as i64))
}

fn simp(e: &Expr) -> Expr {
    match e {
        Expr::Int(_) | Expr::Float(_) | Expr::ImagUnit | Expr::Param(_) | Expr::Var(_) => e.clone(),
        Expr::Rat(r) => Expr::from_rational(*r),
        Expr::Func(k, a) => {
            let a = simp(a);
            if a.is_zero() {
                return match k {
                    FuncKind::Sin | FuncKind::Atan => Expr::Int(0),
                    FuncKind::Cos | FuncKind::Exp => Expr::Int(1),
                };
            }
            Expr::func(*k, a)
        }
        Expr::Pow(b, r) => pow_simplify(simp(b), *r),
        Expr::Prod(fs) => prod_simplify(fs.iter().map(simp).collect()),
        Expr::Sum(ts) => sum_simplify(ts.iter().map(simp).collect()),
    }
}

// ---- powers ----

fn pow_simplify(base: Expr, exp: Rational) -> Expr {
    if exp.is_zero() {
        return Expr::Int(1);
    }
    if exp.is_one() {
        return base;
    }
    match base {
        Expr::Int(0) => {
            if exp.is_positive() {
                Expr::Int(0)
            } else {
                Expr::pow(Expr::Int(0), exp)
            }
        }
        Expr::Int(1) => Expr::Int(1),
        Expr::Int(n) => numeric_pow(Rational::int(n), exp),
        Expr::Rat(r) => numeric_pow(r, exp),
        Expr::Float(v) => {
            if exp.is_integer() && exp.num().unsigned_abs() <= 32 {
                let p = v.powi(exp.num() as i32);
                if p.is_finite() {
                    return Expr::Float(p);
                }
                Expr::pow(Expr::Float(v), exp)
            } else if v > 0.0 {
                Expr::Float(v.powf(exp.to_f64()))
            } else {
                Expr::pow(Expr::Float(v), exp)
            }
        }
        Expr::ImagUnit => {
            if exp.is_integer() {
                match exp.num().rem_euclid(4) {
                    0 => Expr::Int(1),
                    1 => Expr::ImagUnit,
                    2 => Expr::Int(-1),
                    _ => Expr::Prod(vec![Expr::Int(-1), Expr::ImagUnit]),
                }
            } else {
                Expr::pow(Expr::ImagUnit, exp)
            }
        }
        Expr::Pow(inner, e2) => {
            if exp.is_integer() || inner.is_positive() {
                pow_simplify(*inner, e2 * exp)
            } else {
                Expr::Pow(Box::new(Expr::Pow(inner, e2)), exp)
            }
        }
        Expr::Prod(fs) => {
            // fractional exponents only distribute over numeric positive
            // factors, so symbolic groupings like (a3/a2)^(10/9) survive
            let distribute = exp.is_integer()
                || fs
                    .iter()
                    .all(|f| f.is_number() && f.is_positive());
            if distribute {
                prod_simplify(
                    fs.into_iter()
                        .map(|f| pow_simplify(f, exp))
                        .collect(),
                )
            } else {
                Expr::pow(Expr::Prod(fs), exp)
            }
        }
        Expr::Sum(ts) => {
            let n = exp.num();
            let expandable = exp.is_integer()
                && n.unsigned_abs() >= 2
                && n.unsigned_abs() <= 12
                && ts.len() <= 6
                && ts.iter().all(|t| t.is_constant());
            if expandable {
                let expanded = expand_const_sum_pow(&ts, n.unsigned_abs() as u32);
                if n < 0 {
                    pow_simplify(expanded, Rational::int(-1))
                } else {
                    expanded
                }
            } else {
                Expr::pow(Expr::Sum(ts), exp)
            }
        }
        other @ (Expr::Param(_) | Expr::Var(_) | Expr::Func(..)) => Expr::pow(other, exp),
    }
}

/// Exact power of a rational base. Integer exponents fold outright; for a
/// positive base the fractional part is rationalized, `(a/b)^(p/n) =
/// (a^p b^(n-p))^(1/n) / b`, and perfect n-th power factors are pulled out
/// of the radical. Negative bases keep their radical form.
fn numeric_pow(q: Rational, exp: Rational) -> Expr {
    if exp.is_integer() {
        return match q.checked_pow(exp.num()) {
            Some(r) => Expr::from_rational(r),
            None => Expr::pow(Expr::from_rational(q), exp),
        };
    }
    if !q.is_positive() {
        return Expr::pow(Expr::from_rational(q), exp);
    }
    let (ipart, frac) = exp.split_floor();
    let int_factor = match q.checked_pow(ipart) {
        Some(r) => r,
        None => return Expr::pow(Expr::from_rational(q), exp),
    };
    let (p, n) = (frac.num(), frac.den());
    let a = q.num() as i128;
    let b = q.den() as i128;
    let u = match a
        .checked_pow(p as u32)
        .and_then(|x| b.checked_pow((n - p) as u32).and_then(|y| x.checked_mul(y)))
    {
        Some(u) if u <= i64::MAX as i128 => u as i64,
        _ => return Expr::pow(Expr::from_rational(q), exp),
    };
    let (outside, inside) = extract_root(u, n as u32);
    let coef = match checked_mul(int_factor, Rational::new(outside, q.den())) {
        Some(c) => c,
        None => return Expr::pow(Expr::from_rational(q), exp),
    };
    if inside == 1 {
        Expr::from_rational(coef)
    } else if coef.is_one() {
        Expr::pow(Expr::Int(inside), Rational::new(1, n))
    } else {
        Expr::Prod(vec![
            Expr::from_rational(coef),
            Expr::pow(Expr::Int(inside), Rational::new(1, n)),
        ])
    }
}

/// Factor `u = k^n * m` with `k` maximal; returns `(k, m)`.
fn extract_root(u: i64, n: u32) -> (i64, i64) {
    debug_assert!(u > 0 && n >= 2);
    let mut rem = u;
    let mut outside = 1i64;
    let mut inside = 1i64;
    let mut p = 2i64;
    while p * p <= rem {
        if rem % p == 0 {
            let mut mult = 0u32;
            while rem % p == 0 {
                rem /= p;
                mult += 1;
            }
            outside *= p.pow(mult / n);
            inside *= p.pow(mult % n);
        }
        p += 1;
    }
    // any leftover is prime with multiplicity 1 < n
    (outside, inside * rem)
}

fn expand_const_sum_pow(terms: &[Expr], n: u32) -> Expr {
    let mut acc = vec![Expr::Int(1)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(acc.len() * terms.len());
        for a in &acc {
            for t in terms {
                next.push(prod_simplify(vec![a.clone(), t.clone()]));
            }
        }
        match sum_simplify(next) {
            Expr::Sum(v) => acc = v,
            other => acc = vec![other],
        }
    }
    Expr::sum(acc)
}

// ---- products ----

fn prod_simplify(factors: Vec<Expr>) -> Expr {
    let mut coef = Coef::one();
    let mut i_count: i64 = 0;
    let mut bases: Vec<(Expr, Rational)> = Vec::new();
    let mut queue: Vec<Expr> = factors;
    queue.reverse();

    while let Some(f) = queue.pop() {
        match f {
            Expr::Prod(fs) => {
                for x in fs.into_iter().rev() {
                    queue.push(x);
                }
            }
            Expr::ImagUnit => i_count += 1,
            ref num if num.is_number() => coef = coef.mul(Coef::from_expr(num).unwrap()),
            Expr::Pow(b, e) => {
                if matches!(*b, Expr::ImagUnit) && e.is_integer() {
                    i_count += e.num();
                } else {
                    merge_base(&mut bases, *b, e);
                }
            }
            other => merge_base(&mut bases, other, Rational::ONE),
        }
        if queue.is_empty() {
            // normalize merged bases; feed non-atomic results back through
            let pending: Vec<(Expr, Rational)> = std::mem::take(&mut bases);
            let mut done: Vec<(Expr, Rational)> = Vec::new();
            for (b, e) in pending {
                let p = pow_simplify(b, e);
                match p {
                    ref num if num.is_number() => coef = coef.mul(Coef::from_expr(num).unwrap()),
                    Expr::ImagUnit => i_count += 1,
                    Expr::Prod(fs) => {
                        for x in fs.into_iter().rev() {
                            queue.push(x);
                        }
                    }
                    Expr::Pow(b2, e2) => merge_base(&mut done, *b2, e2),
                    other => merge_base(&mut done, other, Rational::ONE),
                }
            }
            if queue.is_empty() {
                bases = done;
                break;
            }
            // more factors appeared: carry the processed ones forward
            for (b, e) in done {
                if e.is_one() {
                    queue.push(b);
                } else {
                    queue.push(Expr::pow(b, e));
                }
            }
        }
    }

    match i_count.rem_euclid(4) {
        0 => {}
        1 => merge_base(&mut bases, Expr::ImagUnit, Rational::ONE),
        2 => coef = coef.neg(),
        _ => {
            coef = coef.neg();
            merge_base(&mut bases, Expr::ImagUnit, Rational::ONE);
        }
    }

    if coef.is_zero() {
        return Expr::Int(0);
    }

    // distribute the numeric coefficient into the first plain sum factor,
    // so coefficient-inside and coefficient-outside constructions of the
    // same product canonicalize identically
    if !coef.is_one() {
        if let Some(pos) = bases
            .iter()
            .position(|(b, e)| e.is_one() && matches!(b, Expr::Sum(_)))
        {
            let (sum, _) = bases.remove(pos);
            let Expr::Sum(ts) = sum else { unreachable!() };
            let scaled = sum_simplify(
                ts.into_iter()
                    .map(|t| prod_simplify(vec![coef.to_expr(), t]))
                    .collect(),
            );
            coef = Coef::one();
            match scaled {
                ref num if num.is_number() => {
                    coef = coef.mul(Coef::from_expr(num).unwrap())
                }
                Expr::Prod(fs) => {
                    // rare: the scaled sum collapsed to a product
                    return prod_simplify(
                        fs.into_iter()
                            .chain(bases.into_iter().map(|(b, e)| {
                                if e.is_one() {
                                    b
                                } else {
                                    Expr::pow(b, e)
                                }
                            }))
                            .collect(),
                    );
                }
                other => merge_base(&mut bases, other, Rational::ONE),
            }
        }
    }

    bases.sort_by(|(b1, e1), (b2, e2)| b1.cmp_structural(b2).then_with(|| e1.cmp(e2)));

    let mut out: Vec<Expr> = Vec::with_capacity(bases.len() + 1);
    if !coef.is_one() {
        out.push(coef.to_expr());
    }
    for (b, e) in bases {
        if e.is_one() {
            out.push(b);
        } else {
            out.push(Expr::pow(b, e));
        }
    }
    Expr::prod(out)
}

fn merge_base(bases: &mut Vec<(Expr, Rational)>, b: Expr, e: Rational) {
    for (eb, ee) in bases.iter_mut() {
        if *eb == b {
            *ee = *ee + e;
            if ee.is_zero() {
                let idx = bases.iter().position(|(x, _)| *x == b).unwrap();
                bases.remove(idx);
            }
            return;
        }
    }
    bases.push((b, e));
}

// ---- sums ----

fn sum_simplify(terms: Vec<Expr>) -> Expr {
    let mut const_acc = Coef::zero();
    let mut groups: Vec<(Expr, Coef)> = Vec::new();

    let mut queue = terms;
    queue.reverse();
    while let Some(t) = queue.pop() {
        match t {
            Expr::Sum(ts) => {
                for x in ts.into_iter().rev() {
                    queue.push(x);
                }
            }
            ref num if num.is_number() => const_acc = const_acc.add(Coef::from_expr(num).unwrap()),
            other => {
                let (coef, core) = split_coefficient(other);
                match groups.iter_mut().find(|(c, _)| *c == core) {
                    Some((_, acc)) => *acc = acc.add(coef),
                    None => groups.push((core, coef)),
                }
            }
        }
    }

    let mut out: Vec<Expr> = Vec::new();
    for (core, coef) in groups {
        if coef.is_zero() {
            continue;
        }
        out.push(attach_coefficient(coef, core));
    }
    out.sort_by(term_order);
    if !const_acc.is_zero() {
        out.push(const_acc.to_expr());
    }
    Expr::sum(out)
}

/// Split a canonical term into (numeric coefficient, symbolic core).
fn split_coefficient(t: Expr) -> (Coef, Expr) {
    match t {
        Expr::Prod(fs) => {
            if let Some(c) = Coef::from_expr(&fs[0]) {
                let rest: Vec<Expr> = fs[1..].to_vec();
                (c, Expr::prod(rest))
            } else {
                (Coef::one(), Expr::Prod(fs))
            }
        }
        other => (Coef::one(), other),
    }
}

fn attach_coefficient(coef: Coef, core: Expr) -> Expr {
    if coef.is_one() {
        return core;
    }
    prod_simplify(vec![coef.to_expr(), core])
}

/// Canonical term order within a sum: symbolic terms before constants,
/// higher variable degree first, then higher parameter degree, then the
/// structural order of the coefficient-stripped core.
fn term_order(a: &Expr, b: &Expr) -> Ordering {
    let ka = a.is_constant();
    let kb = b.is_constant();
    ka.cmp(&kb)
        .then_with(|| b.var_degree().cmp(&a.var_degree()))
        .then_with(|| b.param_degree().cmp(&a.param_degree()))
        .then_with(|| {
            let (ca, corea) = split_coefficient(a.clone());
            let (cb, coreb) = split_coefficient(b.clone());
            corea.cmp_structural(&coreb).then_with(|| {
                ca.to_f64()
                    .partial_cmp(&cb.to_f64())
                    .unwrap_or(Ordering::Equal)
            })
        })
}
