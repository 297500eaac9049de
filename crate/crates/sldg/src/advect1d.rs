//! One-dimensional semi-Lagrangian advection along a row of cells.
//!
//! The update is exact for constant-coefficient advection: each solution
//! polynomial is shifted by the displacement and re-projected. For a
//! displacement a*dt = (j + nu)*dx with integer j and nu in [0, 1), the
//! new coefficients in cell i mix the donor cells i-1-j and i-j through
//! two overlap matrices that depend only on nu (and, in 2D, on the
//! transverse Gauss line eta).

use crate::basis::{basis_2d, num_coeffs_2d};
use crate::error::{Error, Result};
use crate::gauss::gauss_legendre;

/// Integer/fractional decomposition of a displacement in cell units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftDecomposition {
    /// Signed whole-cell part, floor(a dt / dx).
    pub whole: i64,
    /// Fractional part in [0, 1).
    pub frac: f64,
}

/// Split `a * dt / dx` into whole cells plus a fraction in [0, 1).
pub fn decompose_shift(a: f64, dt: f64, dx: f64) -> Result<ShiftDecomposition> {
    let s = a * dt / dx;
    if !s.is_finite() {
        return Err(Error::FracOutOfRange(s));
    }
    let whole = s.floor();
    let mut frac = s - whole;
    let mut whole = whole as i64;
    // guard against floor rounding producing frac == 1.0
    if frac >= 1.0 {
        whole += 1;
        frac = 0.0;
    }
    Ok(ShiftDecomposition { whole, frac })
}

/// Row boundary treatment for the donor-cell lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Donor cells outside the row contribute zero (inflow is vacuum).
    ZeroInflow,
}

/// Overlap matrices for one fractional shift. `left[l][k]` weights the
/// donor cell one further upwind; `right[l][k]` the nearer donor.
#[derive(Debug, Clone)]
pub struct OverlapMatrices {
    pub ncoef: usize,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl OverlapMatrices {
    #[inline]
    pub fn left_at(&self, l: usize, k: usize) -> f64 {
        self.left[l * self.ncoef + k]
    }
    #[inline]
    pub fn right_at(&self, l: usize, k: usize) -> f64 {
        self.right[l * self.ncoef + k]
    }
}

/// Build the overlap matrices for fractional shift `nu` at transverse
/// coordinate `eta`, using the full 2D basis of order `m` restricted to
/// the Gauss line. Entries are
///   left[l][k]  = 1/2 int_{-1}^{-1+2nu} phi_k(xi + 2 - 2nu, eta) phi_l(xi, eta) dxi,
///   right[l][k] = 1/2 int_{-1+2nu}^{1}  phi_k(xi - 2nu, eta)     phi_l(xi, eta) dxi,
/// integrated exactly with an order-m Gauss rule on each subinterval.
pub fn overlap_matrices(nu: f64, m: usize, eta: f64) -> Result<OverlapMatrices> {
    if !(0.0..1.0).contains(&nu) {
        return Err(Error::FracOutOfRange(nu));
    }
    let rule = gauss_legendre(m)?;
    let ncoef = num_coeffs_2d(m);
    let mut left = vec![0.0; ncoef * ncoef];
    let mut right = vec![0.0; ncoef * ncoef];
    let split = -1.0 + 2.0 * nu;

    let accumulate = |mat: &mut [f64], lo: f64, hi: f64, donor_shift: f64| {
        if hi - lo <= 0.0 {
            return;
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (&p, &w) in rule.points.iter().zip(&rule.weights) {
            let xi = mid + half * p;
            let scale = 0.5 * half * w;
            for l in 0..ncoef {
                let pl = basis_2d(l + 1, xi, eta);
                for k in 0..ncoef {
                    mat[l * ncoef + k] += scale * pl * basis_2d(k + 1, xi + donor_shift, eta);
                }
            }
        }
    };

    accumulate(&mut left, -1.0, split, 2.0 - 2.0 * nu);
    accumulate(&mut right, split, 1.0, -2.0 * nu);
    Ok(OverlapMatrices { ncoef, left, right })
}

/// Transverse-averaged overlap matrices: the net effect of advecting
/// every Gauss line of a cell by the same fractional shift and then
/// reassembling with the half-weights w_k / 2. Because the line rule
/// integrates the eta dependence exactly, these act on 2D coefficients
/// as the exact shift-and-project operator.
pub fn composite_overlap(nu: f64, m: usize) -> Result<OverlapMatrices> {
    let rule = gauss_legendre(m)?;
    let ncoef = num_coeffs_2d(m);
    let mut left = vec![0.0; ncoef * ncoef];
    let mut right = vec![0.0; ncoef * ncoef];
    for (&eta, &w) in rule.points.iter().zip(&rule.weights) {
        let ov = overlap_matrices(nu, m, eta)?;
        for (dst, src) in left.iter_mut().zip(&ov.left) {
            *dst += 0.5 * w * src;
        }
        for (dst, src) in right.iter_mut().zip(&ov.right) {
            *dst += 0.5 * w * src;
        }
    }
    Ok(OverlapMatrices { ncoef, left, right })
}

/// Donor-cell index under the boundary rule; `None` means vacuum inflow.
#[inline]
pub fn donor_index(i: i64, n: usize, bc: Boundary) -> Option<usize> {
    match bc {
        Boundary::Periodic => Some(i.rem_euclid(n as i64) as usize),
        Boundary::ZeroInflow => {
            if (0..n as i64).contains(&i) {
                Some(i as usize)
            } else {
                None
            }
        }
    }
}

/// Advect one row of cells by `whole + nu` cells using precomputed
/// overlap matrices. `row` and `out` are `n * ncoef` coefficient slabs.
pub fn advect_row(
    row: &[f64],
    out: &mut [f64],
    n: usize,
    shift: ShiftDecomposition,
    ov: &OverlapMatrices,
    bc: Boundary,
) {
    let ncoef = ov.ncoef;
    debug_assert_eq!(row.len(), n * ncoef);
    debug_assert_eq!(out.len(), n * ncoef);

    if shift.frac == 0.0 {
        // pure integer shift: copy donor coefficients bit-exactly
        for i in 0..n {
            let dst = &mut out[i * ncoef..(i + 1) * ncoef];
            match donor_index(i as i64 - shift.whole, n, bc) {
                Some(d) => dst.copy_from_slice(&row[d * ncoef..(d + 1) * ncoef]),
                None => dst.fill(0.0),
            }
        }
        return;
    }

    advect_line(row, out, n, shift, ov, bc);
}

/// Like [`advect_row`] but always applies the donor overlap matrices,
/// with no integer-shift fast path. A single Gauss line inside a row
/// whose neighbours shift fractionally must contribute its transverse
/// restriction at that line's ordinate even when its own shift is a
/// whole number of cells; the coefficient copy would contribute the
/// donor's cell average instead and break conservation of the
/// reassembled row.
pub fn advect_line(
    row: &[f64],
    out: &mut [f64],
    n: usize,
    shift: ShiftDecomposition,
    ov: &OverlapMatrices,
    bc: Boundary,
) {
    let ncoef = ov.ncoef;
    debug_assert_eq!(row.len(), n * ncoef);
    debug_assert_eq!(out.len(), n * ncoef);

    for i in 0..n {
        let dst = &mut out[i * ncoef..(i + 1) * ncoef];
        dst.fill(0.0);
        let dl = donor_index(i as i64 - 1 - shift.whole, n, bc);
        let dr = donor_index(i as i64 - shift.whole, n, bc);
        if let Some(d) = dl {
            let src = &row[d * ncoef..(d + 1) * ncoef];
            for l in 0..ncoef {
                let mrow = &ov.left[l * ncoef..(l + 1) * ncoef];
                let mut acc = 0.0;
                for k in 0..ncoef {
                    acc += mrow[k] * src[k];
                }
                dst[l] += acc;
            }
        }
        if let Some(d) = dr {
            let src = &row[d * ncoef..(d + 1) * ncoef];
            for l in 0..ncoef {
                let mrow = &ov.right[l * ncoef..(l + 1) * ncoef];
                let mut acc = 0.0;
                for k in 0..ncoef {
                    acc += mrow[k] * src[k];
                }
                dst[l] += acc;
            }
        }
    }
}

/// Which single-step scheme the amplification analysis refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityVariant {
    /// The shift-and-project update implemented here.
    SemiLagrangian,
    /// Classical one-step Lax-Wendroff DG, for comparison.
    LaxWendroff,
}

use num_complex::Complex64;

/// Von Neumann amplification matrix for the second-order (M = 2)
/// scheme at Courant number `nu` in [0, 1] and Fourier multiplier
/// `zeta = exp(-I k dx)`.
pub fn amplification_matrix(
    variant: StabilityVariant,
    nu: f64,
    zeta: Complex64,
) -> Result<[[Complex64; 2]; 2]> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::FracOutOfRange(nu));
    }
    let s3 = 3.0_f64.sqrt();
    let one = Complex64::new(1.0, 0.0);
    Ok(match variant {
        StabilityVariant::SemiLagrangian => [
            [
                one + nu * (zeta - 1.0),
                s3 * nu * (1.0 - nu) * (zeta - 1.0),
            ],
            [
                s3 * nu * (nu - 1.0) * (zeta - 1.0),
                one + 2.0 * nu.powi(3) * (1.0 - zeta) + 6.0 * nu * nu * zeta
                    - 3.0 * nu * (zeta + 1.0),
            ],
        ],
        StabilityVariant::LaxWendroff => [
            [
                one + nu * (zeta - 1.0),
                s3 * nu * (1.0 - nu) * (zeta - 1.0),
            ],
            [
                s3 * nu * (1.0 - zeta),
                one - 3.0 * nu * (zeta + 1.0) + 3.0 * nu * nu * (zeta - 1.0),
            ],
        ],
    })
}

fn spectral_radius_2x2(m: &[[Complex64; 2]; 2]) -> f64 {
    let tr = m[0][0] + m[1][1];
    // tr^2 - 4 det written as (m00 - m11)^2 + 4 m01 m10 to avoid the
    // catastrophic cancellation that occurs at degenerate eigenvalues
    let diff = m[0][0] - m[1][1];
    let disc = (diff * diff + 4.0 * m[0][1] * m[1][0]).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    l1.norm().max(l2.norm())
}

/// Supremum over |zeta| = 1 of the spectral radius of the amplification
/// matrix, computed by a coarse angle sweep followed by local ternary
/// refinement around the best samples.
pub fn sup_spectral_radius(variant: StabilityVariant, nu: f64) -> Result<f64> {
    let radius_at = |theta: f64| -> f64 {
        let zeta = Complex64::from_polar(1.0, theta);
        spectral_radius_2x2(&amplification_matrix(variant, nu, zeta).unwrap())
    };
    amplification_matrix(variant, nu, Complex64::new(1.0, 0.0))?;

    const COARSE: usize = 720;
    let step = std::f64::consts::TAU / COARSE as f64;
    let samples: Vec<f64> = (0..=COARSE).map(|k| radius_at(k as f64 * step)).collect();
    let mut best = 0.0_f64;
    for k in 0..=COARSE {
        if samples[k] + 1e-12 >= samples[k.saturating_sub(1)]
            && samples[k] + 1e-12 >= samples[(k + 1).min(COARSE)]
        {
            // ternary search in the bracketing interval
            let mut lo = (k as f64 - 1.0) * step;
            let mut hi = (k as f64 + 1.0) * step;
            for _ in 0..200 {
                let a = lo + (hi - lo) / 3.0;
                let b = hi - (hi - lo) / 3.0;
                if radius_at(a) < radius_at(b) {
                    lo = a;
                } else {
                    hi = b;
                }
            }
            best = best.max(radius_at(0.5 * (lo + hi)));
        }
        best = best.max(samples[k]);
    }
    Ok(best)
}

/// Closed-form growth bound max(1, |1 - 6 nu + 6 nu^2|) satisfied by the
/// shift-and-project scheme; equals 1 for all nu in [0, 1].
pub fn semi_lagrangian_bound(nu: f64) -> f64 {
    1.0_f64.max((1.0 - 6.0 * nu + 6.0 * nu * nu).abs())
}

/// Closed-form amplification envelope max(1, |1 - 6 nu|) of one-step
/// Lax-Wendroff DG at M = 2; exceeds 1 for nu > 1/3.
pub fn lax_wendroff_bound(nu: f64) -> f64 {
    1.0_f64.max((1.0 - 6.0 * nu).abs())
}
