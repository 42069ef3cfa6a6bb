//! Adaptive quadrature with an embedded Gauss rule pair.
//!
//! Each panel is estimated with 7- and 15-point Gauss-Legendre rules; the
//! difference is the panel error. Panels subdivide worst-first until the
//! summed error meets `rtol * |value| + atol` or the subdivision cap is
//! hit. Nodes are computed at startup by Newton iteration on the Legendre
//! recurrence, to machine precision.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;
use thiserror::Error;

/// Subdivision cap before reporting failure.
pub const MAX_SUBDIVISIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub subdivisions: usize,
}

impl QuadResult {
    pub fn converged(&self, rtol: f64, atol: f64) -> bool {
        self.err_estimate <= rtol * self.value.abs() + atol
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature failed to converge after {subdivisions} subdivisions (err {err:.3e})")]
    NoConvergence { subdivisions: usize, err: f64 },
    #[error("integrand returned a non-finite value near x = {0}")]
    NonFinite(f64),
}

/// Gauss-Legendre nodes and weights on [-1, 1].
fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-style initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_eval(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_eval(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

/// Value and derivative of the Legendre polynomial P_n at x.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rules() -> &'static (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    static RULES: OnceLock<(Vec<(f64, f64)>, Vec<(f64, f64)>)> = OnceLock::new();
    RULES.get_or_init(|| (legendre_rule(7), legendre_rule(15)))
}

fn apply_rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &[(f64, f64)]) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in rule {
        acc += w * f(mid + half * x);
    }
    acc * half
}

#[derive(Debug)]
struct Panel {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn eval_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel, QuadError> {
    let (low, high) = rules();
    let coarse = apply_rule(f, a, b, low);
    let fine = apply_rule(f, a, b, high);
    if !fine.is_finite() || !coarse.is_finite() {
        return Err(QuadError::NonFinite(0.5 * (a + b)));
    }
    Ok(Panel {
        err: (fine - coarse).abs(),
        a,
        b,
        value: fine,
    })
}

/// Integrate `f` over `[a, b]` to relative tolerance `rtol`.
pub fn adaptive_quad<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rtol: f64,
) -> Result<QuadResult, QuadError> {
    adaptive_quad_split(f, &[a, b], rtol)
}

/// Integrate over the union of panels delimited by `points` (strictly
/// increasing). Callers split at known features, e.g. the half-width of a
/// spiked integrand, so the subdivision budget is not spent finding them.
pub fn adaptive_quad_split<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    rtol: f64,
) -> Result<QuadResult, QuadError> {
    assert!(points.len() >= 2 && points.windows(2).all(|w| w[0] < w[1]));
    let atol = 1e-300;
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut err = 0.0;
    for w in points.windows(2) {
        let p = eval_panel(&f, w[0], w[1])?;
        value += p.value;
        err += p.err;
        heap.push(p);
    }
    let mut subdivisions = points.len() - 2;
    while err > rtol * value.abs() + atol {
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(QuadError::NoConvergence { subdivisions, err });
        }
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; accept as-is
            value += 0.0;
            err -= worst.err;
            continue;
        }
        let left = eval_panel(&f, worst.a, mid)?;
        let right = eval_panel(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    Ok(QuadResult {
        value,
        err_estimate: err,
        subdivisions,
    })
}
