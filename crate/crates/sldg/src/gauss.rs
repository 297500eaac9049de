//! Gauss-Legendre quadrature rules on [-1, 1].

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_RULE: usize = 16;

/// An n-point Gauss-Legendre rule on [-1, 1].
///
/// Integrates polynomials of degree <= 2n - 1 exactly; the weights sum to 2.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrate `f` over [lo, hi].
    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for (&p, &w) in self.points.iter().zip(&self.weights) {
            acc += w * f(mid + half * p);
        }
        acc * half
    }
}

/// Legendre polynomial P_n and its derivative at x.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute_rule(n: usize) -> GaussRule {
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // Newton iteration from the Chebyshev-like initial guess; roots are
    // symmetric so only the first half is solved for.
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x.abs();
        points[n - 1 - i] = x.abs();
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    GaussRule { points, weights }
}

/// The n-point Gauss-Legendre rule, 1 <= n <= 16. Rules are computed once
/// and cached for the lifetime of the process.
pub fn gauss_legendre(n: usize) -> Result<&'static GaussRule> {
    static CACHE: OnceLock<Vec<GaussRule>> = OnceLock::new();
    if n == 0 || n > MAX_RULE {
        return Err(Error::Config(format!(
            "quadrature order {n} outside 1..={MAX_RULE}"
        )));
    }
    let rules = CACHE.get_or_init(|| (1..=MAX_RULE).map(compute_rule).collect());
    Ok(&rules[n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_is_midpoint_rule() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.points, vec![0.0]);
        assert_eq!(r.weights, vec![2.0]);
    }

    #[test]
    fn two_point_rule() {
        let r = gauss_legendre(2).unwrap();
        let s = 1.0 / 3.0_f64.sqrt();
        assert!((r.points[0] + s).abs() < 1e-15);
        assert!((r.points[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
        assert!((r.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn three_point_integrates_quartic() {
        // analytic oracle: int_{-1}^{1} xi^4 dxi = 2/5
        let r = gauss_legendre(3).unwrap();
        let v = r.integrate(-1.0, 1.0, |x| x.powi(4));
        assert!((v - 0.4).abs() < 1e-15);
    }

    #[test]
    fn exactness_through_order_eight() {
        for n in 1..=8 {
            let r = gauss_legendre(n).unwrap();
            for d in 0..=(2 * n - 1) {
                let exact = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
                let v = r.integrate(-1.0, 1.0, |x| x.powi(d as i32));
                assert!(
                    (v - exact).abs() < 1e-13,
                    "n={n} degree={d}: {v} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn invariants_hold() {
        for n in 1..=16 {
            let r = gauss_legendre(n).unwrap();
            let sum: f64 = r.weights.iter().sum();
            assert!((sum - 2.0).abs() < 1e-14);
            for w in &r.weights {
                assert!(*w > 0.0);
            }
            for pair in r.points.windows(2) {
                assert!(pair[0] < pair[1]);
            }
            for i in 0..n {
                assert!((r.points[i] + r.points[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(17).is_err());
    }
}
