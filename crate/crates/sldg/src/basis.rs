//! Orthonormal Legendre bases on the canonical element.
//!
//! The 1D basis is orthonormal under (1/2) * int_{-1}^{1} phi_m phi_n dxi and
//! the 2D tensor basis under (1/4) * int int phi_m phi_n dxi deta. Both are
//! hard-coded through spatial order M = 5 (polynomial degree four).

use crate::error::{Error, Result};

/// Highest supported spatial order.
pub const MAX_ORDER: usize = 5;

/// Number of 2D basis functions at order `m`: m(m+1)/2.
pub fn num_coeffs_2d(m: usize) -> usize {
    m * (m + 1) / 2
}

const SQ3: f64 = 1.7320508075688772;
const SQ5: f64 = 2.23606797749979;
const SQ7: f64 = 2.6457513110645907;
const SQ15: f64 = 3.872983346207417;
const SQ21: f64 = 4.58257569495584;

/// 1D orthonormal Legendre basis, 1-based index `l` in 1..=5.
pub fn basis_1d(l: usize, xi: f64) -> f64 {
    match l {
        1 => 1.0,
        2 => SQ3 * xi,
        3 => 0.5 * SQ5 * (3.0 * xi * xi - 1.0),
        4 => 0.5 * SQ7 * xi * (5.0 * xi * xi - 3.0),
        5 => 0.125 * (3.0 * (35.0 * xi.powi(4) - 30.0 * xi * xi + 3.0)),
        _ => panic!("1D basis index {l} out of range"),
    }
}

/// Derivative of the 1D basis with respect to xi.
pub fn basis_1d_deriv(l: usize, xi: f64) -> f64 {
    match l {
        1 => 0.0,
        2 => SQ3,
        3 => 3.0 * SQ5 * xi,
        4 => 0.5 * SQ7 * (15.0 * xi * xi - 3.0),
        5 => 0.125 * 3.0 * (140.0 * xi.powi(3) - 60.0 * xi),
        _ => panic!("1D basis index {l} out of range"),
    }
}

/// 2D orthonormal tensor Legendre basis, 1-based index `l` in 1..=15,
/// ordered by total degree so the first m(m+1)/2 entries span order m.
pub fn basis_2d(l: usize, xi: f64, eta: f64) -> f64 {
    match l {
        1 => 1.0,
        2 => SQ3 * xi,
        3 => SQ3 * eta,
        4 => 3.0 * xi * eta,
        5 => 0.5 * SQ5 * (3.0 * xi * xi - 1.0),
        6 => 0.5 * SQ5 * (3.0 * eta * eta - 1.0),
        7 => 0.5 * SQ15 * eta * (3.0 * xi * xi - 1.0),
        8 => 0.5 * SQ15 * xi * (3.0 * eta * eta - 1.0),
        9 => 0.5 * SQ7 * xi * (5.0 * xi * xi - 3.0),
        10 => 0.5 * SQ7 * eta * (5.0 * eta * eta - 3.0),
        11 => 0.5 * SQ21 * eta * xi * (5.0 * xi * xi - 3.0),
        12 => 0.5 * SQ21 * xi * eta * (5.0 * eta * eta - 3.0),
        13 => 1.25 * (3.0 * xi * xi - 1.0) * (3.0 * eta * eta - 1.0),
        14 => 13.125 * xi.powi(4) - 11.25 * xi * xi + 1.125,
        15 => 13.125 * eta.powi(4) - 11.25 * eta * eta + 1.125,
        _ => panic!("2D basis index {l} out of range"),
    }
}

/// Checked 2D basis evaluation with 1-based index.
pub fn basis_eval_2d(l: usize, xi: f64, eta: f64) -> Result<f64> {
    if l == 0 || l > num_coeffs_2d(MAX_ORDER) {
        return Err(Error::BasisIndex(l, MAX_ORDER));
    }
    Ok(basis_2d(l, xi, eta))
}

/// Index permutation of the 2D basis under the swap (xi, eta) -> (eta, xi).
/// 1-based in and out. Each total-degree block maps to itself, so the
/// permutation is valid for any order m <= 5.
pub fn transpose_index(l: usize) -> usize {
    match l {
        1 => 1,
        2 => 3,
        3 => 2,
        4 => 4,
        5 => 6,
        6 => 5,
        7 => 8,
        8 => 7,
        9 => 10,
        10 => 9,
        11 => 12,
        12 => 11,
        13 => 13,
        14 => 15,
        15 => 14,
        _ => panic!("2D basis index {l} out of range"),
    }
}
