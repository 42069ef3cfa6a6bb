//! Embedded adaptive Runge-Kutta integration (Dormand-Prince 5(4)) for the
//! first-order system (y, y', y''), with finite-time blow-up detection.
//!
//! Integration stops once the max-norm of the state exceeds the blow-up
//! threshold; the crossing point is then located on the dense interpolant
//! of the final step. Divergence of any state component counts: power-law
//! solutions with positive fractional exponents keep `y` bounded while the
//! derivatives blow up.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at x = {0} before reaching the blow-up threshold")]
    StiffFailure(f64),
    #[error("step budget exhausted at x = {0}")]
    MaxSteps(f64),
    #[error("right-hand side not finite at the initial point")]
    BadInitial,
}

/// Accepted-step trace of a three-component system.
#[derive(Debug, Clone, Default)]
pub struct OdeTrace {
    pub xs: Vec<f64>,
    pub ys: Vec<[f64; 3]>,
    /// y''' at each accepted point (the RHS value), for Hermite sampling.
    pub d3: Vec<f64>,
    pub blowup_x: Option<f64>,
}

impl OdeTrace {
    pub fn last_x(&self) -> f64 {
        *self.xs.last().expect("nonempty trace")
    }

    /// Cubic Hermite interpolation of the state at `x`, valid inside the
    /// traced range. Each component's derivative is the next component;
    /// y'' uses the stored RHS.
    pub fn sample(&self, x: f64) -> Option<[f64; 3]> {
        if self.xs.is_empty() || x < self.xs[0] || x > self.last_x() {
            return None;
        }
        let idx = match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => return Some(self.ys[i]),
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.xs[idx], self.xs[idx + 1]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        let mut out = [0.0; 3];
        for c in 0..3 {
            let y0 = self.ys[idx][c];
            let y1 = self.ys[idx + 1][c];
            let d0 = if c < 2 { self.ys[idx][c + 1] } else { self.d3[idx] };
            let d1 = if c < 2 {
                self.ys[idx + 1][c + 1]
            } else {
                self.d3[idx + 1]
            };
            let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
            let h10 = s * (1.0 - s) * (1.0 - s);
            let h01 = s * s * (3.0 - 2.0 * s);
            let h11 = s * s * (s - 1.0);
            out[c] = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
        }
        Some(out)
    }
}

const MAX_STEPS: usize = 4_000_000;

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/dx = f(x, y)` from `x0` to `x_max`, stopping early when
/// `|y|` exceeds `blow_threshold`.
///
/// Divergences with a bounded `y` but exploding derivatives (power laws
/// with `0 < p < 3`) never trip the threshold; they instead collapse the
/// step size. When that happens right where the derivatives have grown
/// large, the location is reported as the blow-up point rather than as a
/// stiffness failure.
pub fn integrate_system<F: Fn(f64, &[f64; 3]) -> [f64; 3]>(
    f: F,
    x0: f64,
    y0: [f64; 3],
    x_max: f64,
    blow_threshold: f64,
    rtol: f64,
    atol: f64,
) -> Result<OdeTrace, OdeError> {
    // derivative magnitude above which a step-size collapse is read as a
    // derivative-driven divergence
    const DERIV_BLOWUP: f64 = 1e3;

    let mut trace = OdeTrace::default();
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    if !k1.iter().all(|v| v.is_finite()) {
        return Err(OdeError::BadInitial);
    }
    trace.xs.push(x);
    trace.ys.push(y);
    trace.d3.push(k1[2]);

    let mut h = 1e-4f64.min(x_max - x0);
    let mut steps = 0usize;

    while x < x_max {
        if steps >= MAX_STEPS {
            return Err(OdeError::MaxSteps(x));
        }
        steps += 1;
        h = h.min(x_max - x);
        if h < 1e-12 * x.abs().max(1.0) {
            let last = trace.ys.last().expect("nonempty");
            if last[1].abs().max(last[2].abs()) > DERIV_BLOWUP {
                trace.blowup_x = Some(x);
                return Ok(trace);
            }
            return Err(OdeError::StiffFailure(x));
        }

        let mut k = [[0.0f64; 3]; 7];
        k[0] = k1;
        let mut failed = false;
        for stage in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                for c in 0..3 {
                    ys[c] += h * A[stage][j] * kj[c];
                }
            }
            k[stage + 1] = f(x + C[stage] * h, &ys);
            if !k[stage + 1].iter().all(|v| v.is_finite()) {
                failed = true;
                break;
            }
        }
        if failed {
            h *= 0.25;
            continue;
        }

        let mut y5 = y;
        let mut y4 = y;
        for (j, kj) in k.iter().enumerate() {
            for c in 0..3 {
                y5[c] += h * B5[j] * kj[c];
                y4[c] += h * B4[j] * kj[c];
            }
        }
        let mut err = 0.0f64;
        for c in 0..3 {
            let sc = atol + rtol * y[c].abs().max(y5[c].abs());
            err = err.max(((y5[c] - y4[c]) / sc).abs());
        }

        if err <= 1.0 && y5.iter().all(|v| v.is_finite()) {
            // accept; DP is FSAL so k7 is next step's k1
            x += h;
            y = y5;
            k1 = k[6];
            trace.xs.push(x);
            trace.ys.push(y);
            trace.d3.push(k1[2]);
            if y[0].abs() > blow_threshold {
                let bx = locate_crossing(&trace, blow_threshold);
                trace.blowup_x = Some(bx);
                return Ok(trace);
            }
        }

        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }
    Ok(trace)
}

/// Bisect the final accepted step's interpolant for the `|y|` crossing.
fn locate_crossing(trace: &OdeTrace, threshold: f64) -> f64 {
    let n = trace.xs.len();
    let (mut lo, mut hi) = (trace.xs[n - 2], trace.xs[n - 1]);
    let over = |x: f64| {
        trace
            .sample(x)
            .map(|y| y[0].abs() > threshold)
            .unwrap_or(true)
    };
    for _ in 0..60 {
        if hi - lo < 1e-6 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if over(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
