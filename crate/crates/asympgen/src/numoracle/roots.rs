//! Numeric polynomial roots via companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Roots of `c[0] + c[1] x + ... + c[n] x^n`. Leading zeros are trimmed;
/// a constant polynomial has no roots.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|v| *v == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let m = DMatrix::from_fn(n, n, |r, col| {
        if col == n - 1 {
            -c[r] / lead
        } else if r == col + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sort_by_re_im(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn quadratic_with_known_roots() {
        // x^2 - 3x + 2 = (x-1)(x-2)
        let r = sort_by_re_im(poly_roots(&[2.0, -3.0, 1.0]));
        assert!((r[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fifth_roots_of_unity() {
        // x^5 - 1
        let r = poly_roots(&[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(r.len(), 5);
        for root in r {
            assert!((root.norm() - 1.0).abs() < 1e-10);
            assert!((root.powu(5) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn wide_coefficient_range() {
        // eps x^6 - x^5 + 1 at eps = 1e-3: one root near 1/eps
        let eps = 1e-3;
        let r = poly_roots(&[1.0, 0.0, 0.0, 0.0, 0.0, -1.0, eps]);
        assert_eq!(r.len(), 6);
        let biggest = r.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        assert!((biggest - 1000.0).abs() / 1000.0 < 1e-3, "got {biggest}");
    }
}
