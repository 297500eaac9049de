//! Conserved-quantity functionals and time-series analysis helpers.
//!
//! All phase-space integrals use the M^2 tensor Gauss points per cell:
//!   I^h(g(f)) = (dx dv / 4) sum_cells sum_k w_k g(f at point k).
//! Sums are accumulated pairwise in a fixed order so results do not
//! depend on thread count.

use crate::error::Result;
use crate::field::{DGField1D, DGField2D};
use crate::gauss::gauss_legendre;

/// Pairwise summation over a fixed-order slice (deterministic and more
/// accurate than naive left-to-right for long series).
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

/// Evaluate I^h(g(f, v)) where `g` receives the field value and the
/// velocity coordinate of the quadrature point.
pub fn functional(f: &DGField2D, g: impl Fn(f64, f64) -> f64) -> Result<f64> {
    let rule = gauss_legendre(f.order)?;
    let mesh = f.mesh;
    let mut cells = Vec::with_capacity(mesh.mx * mesh.mv);
    for j in 0..mesh.mv {
        let vc = mesh.v_center(j);
        for i in 0..mesh.mx {
            let mut acc = 0.0;
            for (&xi, &wa) in rule.points.iter().zip(&rule.weights) {
                for (&eta, &wb) in rule.points.iter().zip(&rule.weights) {
                    let v = vc + 0.5 * mesh.dv * eta;
                    acc += wa * wb * g(f.eval_cell(i, j, xi, eta), v);
                }
            }
            cells.push(acc);
        }
    }
    Ok(0.25 * mesh.dx * mesh.dv * pairwise_sum(&cells))
}

/// One row of the diagnostics time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// I^h(|f|)
    pub l1: f64,
    /// sqrt( dx dv / 4 * sum of squared coefficients )
    pub l2: f64,
    /// 1/2 I^h(v^2 f) + dx/4 sum of squared E coefficients
    pub energy: f64,
    /// -I^h(f log f) with the integrand taken as 0 where f <= 0
    pub entropy: f64,
    /// sum of cell means times dx dv
    pub mass: f64,
    /// smallest field value over all tensor Gauss points
    pub min_value: f64,
    /// quadrature points skipped in the entropy integrand (f <= 0)
    pub entropy_skips: usize,
    /// sqrt( dx * sum of squared E coefficients )
    pub efield_l2: f64,
}

/// Evaluate the full conserved set at time `t`. All point values are
/// computed once per cell from a precomputed basis table and shared by
/// every functional, keeping the cost of per-step diagnostics low.
pub fn conserved_set(t: f64, f: &DGField2D, e: &DGField1D) -> Result<DiagnosticsRecord> {
    let mesh = f.mesh;
    let m = f.order;
    let ncoef = f.ncoef;
    let rule = gauss_legendre(m)?;

    // basis values and weights at the m x m tensor points
    let npts = m * m;
    let mut tab = vec![0.0; npts * ncoef];
    let mut wts = vec![0.0; npts];
    let mut etas = vec![0.0; npts];
    for (a, (&xi, &wa)) in rule.points.iter().zip(&rule.weights).enumerate() {
        for (b, (&eta, &wb)) in rule.points.iter().zip(&rule.weights).enumerate() {
            let p = a * m + b;
            wts[p] = wa * wb;
            etas[p] = eta;
            for l in 0..ncoef {
                tab[p * ncoef + l] = crate::basis::basis_2d(l + 1, xi, eta);
            }
        }
    }

    let ncells = mesh.mx * mesh.mv;
    let mut l1_c = Vec::with_capacity(ncells);
    let mut kin_c = Vec::with_capacity(ncells);
    let mut ent_c = Vec::with_capacity(ncells);
    let mut min_value = f64::INFINITY;
    let mut skips = 0usize;
    for j in 0..mesh.mv {
        let vc = mesh.v_center(j);
        for i in 0..mesh.mx {
            let cell = f.cell(i, j);
            let (mut l1a, mut kina, mut enta) = (0.0, 0.0, 0.0);
            for p in 0..npts {
                let mut val = 0.0;
                for l in 0..ncoef {
                    val += cell[l] * tab[p * ncoef + l];
                }
                let w = wts[p];
                let v = vc + 0.5 * mesh.dv * etas[p];
                l1a += w * val.abs();
                kina += w * v * v * val;
                if val > 0.0 {
                    enta += w * val * val.ln();
                } else {
                    skips += 1;
                }
                min_value = min_value.min(val);
            }
            l1_c.push(l1a);
            kin_c.push(kina);
            ent_c.push(enta);
        }
    }
    let cell_weight = 0.25 * mesh.dx * mesh.dv;

    let sq: Vec<f64> = f.data.iter().map(|c| c * c).collect();
    let l2 = (cell_weight * pairwise_sum(&sq)).sqrt();

    let esq: Vec<f64> = e.data.iter().map(|c| c * c).collect();
    let esum = pairwise_sum(&esq);

    Ok(DiagnosticsRecord {
        t,
        l1: cell_weight * pairwise_sum(&l1_c),
        l2,
        energy: 0.5 * cell_weight * pairwise_sum(&kin_c) + 0.25 * mesh.dx * esum,
        entropy: -cell_weight * pairwise_sum(&ent_c),
        mass: f.mean_sum() * mesh.dx * mesh.dv,
        min_value,
        entropy_skips: skips,
        efield_l2: (mesh.dx * esum).sqrt(),
    })
}

/// Local maxima of a time series, excluding the endpoints.
pub fn find_peaks(series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut peaks = Vec::new();
    for w in series.windows(3) {
        if w[1].1 > w[0].1 && w[1].1 >= w[2].1 {
            peaks.push(w[1]);
        }
    }
    peaks
}

/// Least-squares slope of ln(value) against t over the given points;
/// points with non-positive values are skipped.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, v)| v > 0.0)
        .map(|&(t, v)| (t, v.ln()))
        .collect();
    if data.len() < 2 {
        return None;
    }
    let n = data.len() as f64;
    let st: f64 = data.iter().map(|&(t, _)| t).sum();
    let sy: f64 = data.iter().map(|&(_, y)| y).sum();
    let stt: f64 = data.iter().map(|&(t, _)| t * t).sum();
    let sty: f64 = data.iter().map(|&(t, y)| t * y).sum();
    let denom = n * stt - st * st;
    if denom == 0.0 {
        return None;
    }
    Some((n * sty - st * sy) / denom)
}
