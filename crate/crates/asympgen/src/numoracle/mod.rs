//! Numerical ground truths: adaptive quadrature, adaptive ODE integration
//! with blow-up detection, numeric polynomial roots, and the validation
//! gate that compares analytic approximations against them.

pub mod ode;
pub mod quad;
pub mod roots;
pub mod validate;

pub use ode::{integrate_system, OdeError, OdeTrace};
pub use quad::{adaptive_quad, adaptive_quad_split, QuadError, QuadResult};
pub use roots::poly_roots;
pub use validate::validate_problem;

use crate::symexpr::Rational;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The acceptance rule: every analytic approximation must be within 10%
/// relative error of the numerical oracle at its regime probe points.
pub const ERROR_GATE: f64 = 0.10;

/// One analytic-vs-numeric comparison. For complex quantities the stored
/// `analytic`/`numeric` columns are magnitudes and `rel_error` is the
/// complex distance over the numeric magnitude.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SamplePoint {
    pub probe: f64,
    pub analytic: f64,
    pub numeric: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RegimeValidation {
    pub regime: String,
    pub samples: Vec<SamplePoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ValidationReport {
    pub regimes: Vec<RegimeValidation>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn from_regimes(regimes: Vec<RegimeValidation>) -> Self {
        let pass = regimes
            .iter()
            .flat_map(|r| r.samples.iter())
            .all(|s| s.rel_error < ERROR_GATE)
            && regimes.iter().any(|r| !r.samples.is_empty());
        ValidationReport { regimes, pass }
    }

    pub fn failed() -> Self {
        ValidationReport {
            regimes: Vec::new(),
            pass: false,
        }
    }

    /// Re-derive the pass flag from the stored rows (gate soundness check).
    pub fn recheck(&self) -> bool {
        self.regimes
            .iter()
            .flat_map(|r| r.samples.iter())
            .all(|s| s.rel_error < ERROR_GATE)
            && self.regimes.iter().any(|r| !r.samples.is_empty())
    }

    pub fn max_rel_error(&self) -> f64 {
        self.regimes
            .iter()
            .flat_map(|r| r.samples.iter())
            .map(|s| s.rel_error)
            .fold(0.0, f64::max)
    }
}

/// Probe points and tolerances used by consistency checks and the gate.
/// All of these are interpretation choices rather than published values,
/// so they live in configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ProbeConfig {
    /// Small-epsilon probe for root regimes and consistency checks.
    pub small_eps: f64,
    /// Large-epsilon probe for root regimes and consistency checks.
    pub large_eps: f64,
    /// Small-epsilon probe for polynomial-denominator integrals.
    pub tiny_eps: f64,
    /// "Negligible" means at most this fraction of the kept terms.
    pub ratio_threshold: f64,
    /// Offsets below the blow-up point where ODE solutions are sampled.
    pub ode_blowup_offsets: Vec<f64>,
    /// Number of Taylor-regime sample points on [0, 0.1].
    pub taylor_points: usize,
    /// Large-x probes for Laplace integrals.
    pub laplace_xs: Vec<f64>,
    pub quad_rtol: f64,
    pub ode_rtol: f64,
    pub ode_atol: f64,
    pub blow_threshold: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            small_eps: 1e-3,
            large_eps: 1e3,
            tiny_eps: 1e-6,
            ratio_threshold: 0.1,
            ode_blowup_offsets: vec![0.5, 0.2, 0.1],
            taylor_points: 5,
            laplace_xs: vec![20.0, 50.0],
            quad_rtol: 1e-8,
            ode_rtol: 1e-8,
            ode_atol: 1e-10,
            blow_threshold: 1e6,
        }
    }
}

/// Real-branch rational power: for negative bases with odd-denominator
/// exponents this is the real root (`(-8)^(1/3) = -2`), the convention the
/// blow-up solutions `alpha (x - x*)^p` are written in.
pub fn real_pow(base: f64, p: Rational) -> f64 {
    if base >= 0.0 {
        return base.powf(p.to_f64());
    }
    if p.den() % 2 == 1 {
        let mag = (-base).powf(p.to_f64());
        if p.num() % 2 == 0 {
            mag
        } else {
            -mag
        }
    } else {
        f64::NAN
    }
}

/// Greedily pair analytic roots with numeric roots by ascending relative
/// distance. Each root on either side is used at most once. Returns
/// `(analytic_index, numeric_index, rel_error)` for every pair made.
pub fn greedy_match(analytic: &[Complex64], numeric: &[Complex64]) -> Vec<(usize, usize, f64)> {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, a) in analytic.iter().enumerate() {
        for (j, n) in numeric.iter().enumerate() {
            let rel = (a - n).norm() / n.norm().max(1e-300);
            candidates.push((rel, i, j));
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used_a = vec![false; analytic.len()];
    let mut used_n = vec![false; numeric.len()];
    let mut out = Vec::new();
    for (rel, i, j) in candidates {
        if !used_a[i] && !used_n[j] {
            used_a[i] = true;
            used_n[j] = true;
            out.push((i, j, rel));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_pow_odd_roots() {
        assert!((real_pow(-8.0, Rational::new(1, 3)) + 2.0).abs() < 1e-12);
        assert!((real_pow(-1.5, Rational::int(-1)) + 2.0 / 3.0).abs() < 1e-12);
        assert!((real_pow(-4.0, Rational::new(-2, 3)) - 4.0f64.powf(-2.0 / 3.0)).abs() < 1e-12);
        assert!(real_pow(-1.0, Rational::new(1, 2)).is_nan());
    }

    #[test]
    fn gate_checks_every_row() {
        let mk = |rel: f64| SamplePoint {
            probe: 1.0,
            analytic: 1.0,
            numeric: 1.0,
            rel_error: rel,
        };
        let rep = ValidationReport::from_regimes(vec![RegimeValidation {
            regime: "small".into(),
            samples: vec![mk(0.01), mk(0.09)],
        }]);
        assert!(rep.pass && rep.recheck());
        let rep = ValidationReport::from_regimes(vec![RegimeValidation {
            regime: "small".into(),
            samples: vec![mk(0.01), mk(0.11)],
        }]);
        assert!(!rep.pass && !rep.recheck());
    }

    #[test]
    fn greedy_match_pairs_each_root_once() {
        let a = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let n = vec![Complex64::new(1.001, 0.0), Complex64::new(5.0, 0.0)];
        let m = greedy_match(&a, &n);
        assert_eq!(m.len(), 2);
        assert!(m[0].2 < 0.01);
        assert!(m[1].2 > 0.5);
    }
}
