//! Cell-wise rescaling limiter that keeps the distribution function
//! nonnegative at the points the update actually samples, without
//! changing cell averages.
//!
//! For a cell polynomial f^h with mean F1 and minimum m over the check
//! points, the limited polynomial is F1 + theta (f^h - F1) with
//! theta = min(1, F1 / (F1 - m)). Applied before a sweep at the points
//! the donor integrals evaluate, and after the final stage at the full
//! tensor Gauss points, this keeps means nonnegative step to step.

use crate::basis::basis_2d;
use crate::error::{Error, Result};
use crate::field::DGField2D;
use crate::gauss::gauss_legendre;

/// Cell means more negative than this are a hard error; means within
/// [-MEAN_TOL, 0] are clamped to zero.
pub const MEAN_TOL: f64 = 1e-12;

/// Sample points (xi, eta) at which a limited cell must be nonnegative.
#[derive(Debug, Clone)]
pub struct CheckPoints {
    pub points: Vec<(f64, f64)>,
}

/// Points sampled by one x-sweep stage with fractional shift `nu`:
/// for each transverse Gauss line eta_k, the donor integrals evaluate
/// the K = ceil(M/2) point Gauss rule in donor-cell coordinates on the
/// sliver [1 - 2 nu, 1] handed to the downstream neighbor (points
/// xi = 1 - nu (1 - s)) and on the remainder [-1, 1 - 2 nu] the cell
/// keeps (points xi = -nu + (1 - nu) s), for Gauss nodes s.
pub fn stage_points(nu: f64, m: usize) -> Result<CheckPoints> {
    if !(0.0..1.0).contains(&nu) {
        return Err(Error::FracOutOfRange(nu));
    }
    let eta_rule = gauss_legendre(m)?;
    let k = m.div_ceil(2);
    let s_rule = gauss_legendre(k)?;
    let mut points = Vec::with_capacity(2 * m * k);
    for &eta in &eta_rule.points {
        for &s in &s_rule.points {
            points.push((1.0 - nu * (1.0 - s), eta));
            points.push((-nu + (1.0 - nu) * s, eta));
        }
    }
    Ok(CheckPoints { points })
}

/// The M x M tensor Gauss points used for moments and diagnostics.
pub fn final_points(m: usize) -> Result<CheckPoints> {
    let rule = gauss_legendre(m)?;
    let mut points = Vec::with_capacity(m * m);
    for &xi in &rule.points {
        for &eta in &rule.points {
            points.push((xi, eta));
        }
    }
    Ok(CheckPoints { points })
}

/// Outcome of limiting a field.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LimiterReport {
    /// Cells where theta < 1 was applied.
    pub cells_limited: usize,
    /// Smallest theta used (1.0 when nothing was limited).
    pub min_theta: f64,
    /// Most negative pre-limit point value seen.
    pub worst_point_value: f64,
}

impl LimiterReport {
    pub fn none() -> Self {
        Self { cells_limited: 0, min_theta: 1.0, worst_point_value: 0.0 }
    }

    pub fn merge(&mut self, other: &LimiterReport) {
        self.cells_limited += other.cells_limited;
        self.min_theta = self.min_theta.min(other.min_theta);
        self.worst_point_value = self.worst_point_value.min(other.worst_point_value);
    }
}

/// Limit one cell's coefficients in place. Returns the theta applied,
/// or an error if the cell mean is more negative than [`MEAN_TOL`].
pub fn limit_cell(coeffs: &mut [f64], check: &CheckPoints) -> Result<f64> {
    let mean = coeffs[0];
    if mean < -MEAN_TOL {
        return Err(Error::NegativeMean(mean));
    }
    if mean <= 0.0 {
        // clamp a numerically-zero mean cell to exactly zero
        coeffs.fill(0.0);
        return Ok(if mean < 0.0 { 0.0 } else { 1.0 });
    }
    let mut min_val = f64::INFINITY;
    for &(xi, eta) in &check.points {
        let mut v = 0.0;
        for (l, &c) in coeffs.iter().enumerate() {
            v += c * basis_2d(l + 1, xi, eta);
        }
        min_val = min_val.min(v);
    }
    if min_val >= 0.0 {
        return Ok(1.0);
    }
    let theta = (mean / (mean - min_val)).min(1.0);
    for c in coeffs.iter_mut().skip(1) {
        *c *= theta;
    }
    Ok(theta)
}

/// Apply the limiter to every cell of a field.
pub fn limit_field(f: &mut DGField2D, check: &CheckPoints) -> Result<LimiterReport> {
    let mut report = LimiterReport::none();
    for j in 0..f.mesh.mv {
        for i in 0..f.mesh.mx {
            let cell = f.cell_mut(i, j);
            // track worst point value before limiting
            let mut min_val = f64::INFINITY;
            for &(xi, eta) in &check.points {
                let mut v = 0.0;
                for (l, &c) in cell.iter().enumerate() {
                    v += c * basis_2d(l + 1, xi, eta);
                }
                min_val = min_val.min(v);
            }
            let theta = limit_cell(cell, check)?;
            if theta < 1.0 {
                report.cells_limited += 1;
                report.min_theta = report.min_theta.min(theta);
            }
            if min_val < report.worst_point_value {
                report.worst_point_value = min_val;
            }
        }
    }
    Ok(report)
}
