//! Exact rational arithmetic for coefficients and exponents.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A rational number kept in lowest terms with a positive denominator.
///
/// The canonical zero is `0/1`. Arithmetic uses `i128` intermediates and
/// panics on overflow of the reduced result; the expression grammar only
/// produces small exponents and coefficients, so this is a programming
/// error rather than a runtime condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn reduce128(num: i128, den: i128) -> Rational {
    assert!(den != 0, "rational with zero denominator");
    let sign = if den < 0 { -1 } else { 1 };
    let (mut n, mut d) = (num * sign as i128, den * sign as i128);
    let g = {
        let (mut a, mut b) = (n.abs(), d.abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a.max(1)
    };
    n /= g;
    d /= g;
    assert!(
        n >= i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128,
        "rational overflow: {n}/{d}"
    );
    Rational {
        num: n as i64,
        den: d as i64,
    }
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Rational {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn int(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 && self.den == 1
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub fn abs(&self) -> Self {
        Rational {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn recip(&self) -> Self {
        assert!(self.num != 0, "reciprocal of zero");
        Rational::new(self.den, self.num)
    }

    /// Split into integer and fractional parts with `0 <= frac < 1`.
    pub fn split_floor(&self) -> (i64, Rational) {
        let q = self.num.div_euclid(self.den);
        let r = self.num.rem_euclid(self.den);
        (q, Rational::new(r, self.den))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact integer power; `None` when the result overflows `i64`.
    pub fn checked_pow(&self, exp: i64) -> Option<Rational> {
        fn ipow(base: i64, exp: u32) -> Option<i128> {
            (base as i128).checked_pow(exp)
        }
        if exp == 0 {
            return Some(Rational::ONE);
        }
        let (n, d, e) = if exp > 0 {
            (self.num, self.den, exp as u32)
        } else {
            if self.num == 0 {
                return None;
            }
            (self.den, self.num, (-exp) as u32)
        };
        let num = ipow(n, e)?;
        let den = ipow(d, e)?;
        if num.abs() > i64::MAX as i128 || den.abs() > i64::MAX as i128 {
            return None;
        }
        Some(reduce128(num, den))
    }

    /// Exact decimal parse, e.g. `"0.8333"` -> 8333/10000. `None` on overflow.
    pub fn from_decimal_str(s: &str) -> Option<Rational> {
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i128, rest),
            None => (1, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let mut num: i128 = if int_part.is_empty() {
            0
        } else {
            int_part.parse::<i128>().ok()?
        };
        let mut den: i128 = 1;
        for c in frac_part.chars() {
            let d = c.to_digit(10)? as i128;
            num = num.checked_mul(10)?.checked_add(d)?;
            den = den.checked_mul(10)?;
        }
        if num > i64::MAX as i128 || den > i64::MAX as i128 {
            return None;
        }
        Some(reduce128(sign * num, den))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        reduce128(
            self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        reduce128(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        reduce128(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
        )
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms_with_positive_denominator() {
        let r = Rational::new(-10, -4);
        assert_eq!((r.num(), r.den()), (5, 2));
        let r = Rational::new(3, -9);
        assert_eq!((r.num(), r.den()), (-1, 3));
        assert_eq!(Rational::new(0, -7), Rational::ZERO);
    }

    #[test]
    fn arithmetic() {
        let a = Rational::new(1, 6);
        let b = Rational::new(1, 3);
        assert_eq!(a + b, Rational::new(1, 2));
        assert_eq!(b - a, a);
        assert_eq!(a * b, Rational::new(1, 18));
        assert_eq!(a / b, Rational::new(1, 2));
        assert_eq!(-a, Rational::new(-1, 6));
    }

    #[test]
    fn split_floor_gives_nonnegative_fraction() {
        let (q, f) = Rational::new(7, 2).split_floor();
        assert_eq!((q, f), (3, Rational::new(1, 2)));
        let (q, f) = Rational::new(-7, 2).split_floor();
        assert_eq!((q, f), (-4, Rational::new(1, 2)));
        let (q, f) = Rational::new(-5, 6).split_floor();
        assert_eq!((q, f), (-1, Rational::new(1, 6)));
    }

    #[test]
    fn checked_pow() {
        assert_eq!(
            Rational::new(5, 8).checked_pow(3),
            Some(Rational::new(125, 512))
        );
        assert_eq!(
            Rational::new(2, 3).checked_pow(-2),
            Some(Rational::new(9, 4))
        );
        assert_eq!(Rational::int(10).checked_pow(40), None);
        assert_eq!(Rational::ZERO.checked_pow(-1), None);
    }

    #[test]
    fn decimal_parse_is_exact() {
        assert_eq!(
            Rational::from_decimal_str("0.8333"),
            Some(Rational::new(8333, 10000))
        );
        assert_eq!(Rational::from_decimal_str("-1.5"), Some(Rational::new(-3, 2)));
        assert_eq!(Rational::from_decimal_str("6.0"), Some(Rational::int(6)));
        assert_eq!(Rational::from_decimal_str("x"), None);
    }

    #[test]
    fn ordering_is_by_value() {
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        assert!(Rational::new(-1, 2) < Rational::new(-1, 3));
    }
}
