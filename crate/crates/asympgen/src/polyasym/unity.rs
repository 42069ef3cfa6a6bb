//! Exact expressions for points on the unit circle.
//!
//! `unit_root(m, n)` is `e^(2 pi i m / n)`. Denominators whose angles have
//! real-radical closed forms (1, 2, 3, 4, 5, 6, 8, 10, 12 after reduction)
//! come out as radicals, matching the displayed root sets; the rest fall
//! back to exact `cos + i sin` form with rational multiples of pi.

use crate::symexpr::{simplify_basic, Expr};

pub fn unit_root(m: i64, n: i64) -> Expr {
    assert!(n >= 1);
    let m = m.rem_euclid(n);
    let g = gcd(m, n);
    let (m, n) = (m / g, n / g);
    let raw = match n {
        1 => Expr::Int(1),
        2 => Expr::Int(-1),
        3 | 4 | 6 | 12 => twelfth(m * (12 / n)),
        8 => eighth(m),
        5 | 10 => twentieth(m * (20 / n)),
        _ => trig(m, n),
    };
    simplify_basic(&raw)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

fn imag(re: Expr, im: Expr) -> Expr {
    Expr::Sum(vec![re, Expr::Prod(vec![im, Expr::ImagUnit])])
}

/// Points at multiples of 30 degrees, indexed by twelfths of a turn.
fn twelfth(k: i64) -> Expr {
    let half = || Expr::rat(1, 2);
    let neg_half = || Expr::rat(-1, 2);
    let r3h = || Expr::Prod(vec![Expr::rat(1, 2), Expr::sqrt(Expr::Int(3))]);
    let neg_r3h = || Expr::Prod(vec![Expr::rat(-1, 2), Expr::sqrt(Expr::Int(3))]);
    match k.rem_euclid(12) {
        0 => Expr::Int(1),
        1 => imag(r3h(), half()),
        2 => imag(half(), r3h()),
        3 => Expr::ImagUnit,
        4 => imag(neg_half(), r3h()),
        5 => imag(neg_r3h(), half()),
        6 => Expr::Int(-1),
        7 => imag(neg_r3h(), neg_half()),
        8 => imag(neg_half(), neg_r3h()),
        9 => Expr::neg(Expr::ImagUnit),
        10 => imag(half(), neg_r3h()),
        _ => imag(r3h(), neg_half()),
    }
}

/// Points at multiples of 45 degrees, indexed by eighths of a turn.
fn eighth(k: i64) -> Expr {
    let r2h = |s: i64| Expr::Prod(vec![Expr::rat(s, 2), Expr::sqrt(Expr::Int(2))]);
    match k.rem_euclid(8) {
        0 => Expr::Int(1),
        1 => imag(r2h(1), r2h(1)),
        2 => Expr::ImagUnit,
        3 => imag(r2h(-1), r2h(1)),
        4 => Expr::Int(-1),
        5 => imag(r2h(-1), r2h(-1)),
        6 => Expr::neg(Expr::ImagUnit),
        _ => imag(r2h(1), r2h(-1)),
    }
}

/// Points at multiples of 18 degrees, indexed by twentieths of a turn.
/// cos 36 = (sqrt(5)+1)/4, cos 72 = (sqrt(5)-1)/4,
/// sin 36 = sqrt(10-2 sqrt 5)/4, sin 72 = sqrt(10+2 sqrt 5)/4.
fn twentieth(k: i64) -> Expr {
    let r5p = |s: i64| {
        // s * (sqrt(5) + 1)/4
        Expr::Prod(vec![
            Expr::rat(s, 4),
            Expr::Sum(vec![Expr::sqrt(Expr::Int(5)), Expr::Int(1)]),
        ])
    };
    let r5m = |s: i64| {
        // s * (sqrt(5) - 1)/4
        Expr::Prod(vec![
            Expr::rat(s, 4),
            Expr::Sum(vec![Expr::sqrt(Expr::Int(5)), Expr::Int(-1)]),
        ])
    };
    let s36 = |s: i64| {
        Expr::Prod(vec![
            Expr::rat(s, 4),
            Expr::sqrt(Expr::Sum(vec![
                Expr::Int(10),
                Expr::Prod(vec![Expr::Int(-2), Expr::sqrt(Expr::Int(5))]),
            ])),
        ])
    };
    let s72 = |s: i64| {
        Expr::Prod(vec![
            Expr::rat(s, 4),
            Expr::sqrt(Expr::Sum(vec![
                Expr::Int(10),
                Expr::Prod(vec![Expr::Int(2), Expr::sqrt(Expr::Int(5))]),
            ])),
        ])
    };
    match k.rem_euclid(20) {
        0 => Expr::Int(1),
        1 => imag(s72(1), r5m(1)),  // 18
        2 => imag(r5p(1), s36(1)),  // 36
        3 => imag(s36(1), r5p(1)),  // 54
        4 => imag(r5m(1), s72(1)),  // 72
        5 => Expr::ImagUnit,
        6 => imag(r5m(-1), s72(1)),  // 108
        7 => imag(s36(-1), r5p(1)),  // 126
        8 => imag(r5p(-1), s36(1)),  // 144
        9 => imag(s72(-1), r5m(1)),  // 162
        10 => Expr::Int(-1),
        11 => imag(s72(-1), r5m(-1)), // 198
        12 => imag(r5p(-1), s36(-1)), // 216
        13 => imag(s36(-1), r5p(-1)), // 234
        14 => imag(r5m(-1), s72(-1)), // 252
        15 => Expr::neg(Expr::ImagUnit),
        16 => imag(r5m(1), s72(-1)), // 288
        17 => imag(s36(1), r5p(-1)), // 306
        18 => imag(r5p(1), s36(-1)), // 324
        _ => imag(s72(1), r5m(-1)),  // 342
    }
}

fn trig(m: i64, n: i64) -> Expr {
    let angle = || Expr::Prod(vec![Expr::rat(2 * m, n), Expr::param("pi")]);
    imag(Expr::cos(angle()), Expr::sin(angle()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::Bindings;
    use num_complex::Complex64;

    fn value(e: &Expr) -> Complex64 {
        e.eval(&Bindings::new()).unwrap()
    }

    #[test]
    fn all_needed_orders_evaluate_exactly() {
        for n in 1..=20i64 {
            for m in 0..n {
                let got = value(&unit_root(m, n));
                let theta = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
                let want = Complex64::new(theta.cos(), theta.sin());
                assert!(
                    (got - want).norm() < 1e-12,
                    "e^(2 pi i {m}/{n}): got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn fifth_roots_match_displayed_radicals() {
        // -1/4 + sqrt(5)/4 + i sqrt(10 + 2 sqrt 5)/4 is the 72-degree root
        let expected = simplify_basic(&Expr::Sum(vec![
            Expr::rat(-1, 4),
            Expr::Prod(vec![Expr::rat(1, 4), Expr::sqrt(Expr::Int(5))]),
            Expr::Prod(vec![
                Expr::rat(1, 4),
                Expr::ImagUnit,
                Expr::sqrt(Expr::Sum(vec![
                    Expr::Int(10),
                    Expr::Prod(vec![Expr::Int(2), Expr::sqrt(Expr::Int(5))]),
                ])),
            ]),
        ]));
        assert_eq!(unit_root(1, 5), expected);
    }

    #[test]
    fn seventh_roots_fall_back_to_trig_and_are_exact() {
        let r = unit_root(1, 7);
        let got = value(&r);
        let theta = 2.0 * std::f64::consts::PI / 7.0;
        assert!((got - Complex64::new(theta.cos(), theta.sin())).norm() < 1e-14);
    }

    #[test]
    fn powers_of_each_root_return_to_one() {
        for n in [5i64, 6, 7, 8, 9, 10] {
            for m in 0..n {
                let z = value(&unit_root(m, n));
                assert!((z.powu(n as u32) - Complex64::new(1.0, 0.0)).norm() < 1e-10);
            }
        }
    }
}
