//! Random expressions over the generator grammar, for property tests and
//! fuzzing examples. Sampled trees are safe to evaluate and differentiate
//! on positive real points: radicands and denominators are kept positive,
//! so finite differences never straddle a branch cut or a pole.

use super::expr::Expr;
use super::rational::Rational;
use rand::Rng;

pub fn sample_expr<R: Rng>(rng: &mut R, var: &str, depth: u32) -> Expr {
    if depth == 0 {
        return sample_atom(rng, var);
    }
    match rng.gen_range(0..10) {
        0..=2 => {
            let n = rng.gen_range(2..=4);
            Expr::Sum((0..n).map(|_| sample_expr(rng, var, depth - 1)).collect())
        }
        3..=4 => {
            let n = rng.gen_range(2..=3);
            Expr::Prod((0..n).map(|_| sample_expr(rng, var, depth - 1)).collect())
        }
        5 => {
            // rational power of a positive base: (x^2 + c)^(m/n)
            let c = rng.gen_range(1..=6);
            let base = Expr::Sum(vec![
                Expr::powi(Expr::var(var), 2),
                Expr::Int(c),
            ]);
            let num = *[-3i64, -1, 1, 2, 3].get(rng.gen_range(0..5)).unwrap();
            let den = *[1i64, 2, 3].get(rng.gen_range(0..3)).unwrap();
            Expr::pow(base, Rational::new(num, den))
        }
        6 => Expr::sin(sample_expr(rng, var, depth - 1)),
        7 => Expr::cos(sample_expr(rng, var, depth - 1)),
        8 => Expr::atan(sample_expr(rng, var, depth - 1)),
        _ => {
            // exp of a small linear argument to keep magnitudes tame
            let c = sample_coeff(rng);
            Expr::exp(Expr::Prod(vec![c, Expr::var(var)]))
        }
    }
}

fn sample_atom<R: Rng>(rng: &mut R, var: &str) -> Expr {
    match rng.gen_range(0..6) {
        0 => Expr::Int(rng.gen_range(-9..=9)),
        1 => sample_coeff(rng),
        2 => Expr::rat(rng.gen_range(1..=9), rng.gen_range(2..=9)),
        3 | 4 => {
            let k = rng.gen_range(1..=8);
            Expr::Prod(vec![sample_coeff(rng), Expr::powi(Expr::var(var), k)])
        }
        _ => Expr::var(var),
    }
}

fn sample_coeff<R: Rng>(rng: &mut R) -> Expr {
    let tenths: i64 = rng.gen_range(-29..=29);
    if tenths == 0 {
        Expr::Int(1)
    } else if tenths % 10 == 0 {
        Expr::Int(tenths / 10)
    } else {
        Expr::Float(tenths as f64 / 10.0)
    }
}
