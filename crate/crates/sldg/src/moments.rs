//! Velocity moments of the distribution function and the Taylor-in-time
//! expansion of the electric field used by the velocity sweeps.
//!
//! The time derivatives of E follow from the Vlasov-Poisson moment
//! hierarchy:
//!   E_t   = -j + C1(x, t)
//!   E_tt  = d/dx(e2) - rho E + C2
//!   E_ttt = d/dx(2 j E) - d2/dx2(e3) + E d/dx(j) + rho^2 u + C3
//! with j = rho u the current, e2 = int v^2 f dv, e3 = int v^3 f dv, and
//! C1..C3 source corrections (zero when the kinetic equation is
//! unforced). Spatial derivatives use fifth-order-in-cell formulas on
//! the Legendre coefficients with periodic neighbor coupling.

use crate::basis::basis_1d;
use crate::error::{Error, Result};
use crate::field::{DGField1D, DGField2D};
use crate::gauss::gauss_legendre;

/// Velocity moments of f as 1D coefficient fields in x.
pub struct MomentSet {
    /// rho = int f dv
    pub density: DGField1D,
    /// j = int v f dv
    pub current: DGField1D,
    /// e2 = int v^2 f dv
    pub energy2: DGField1D,
    /// e3 = int v^3 f dv
    pub energy3: DGField1D,
}

/// Compute rho, j, e2, e3 from the phase-space field. Quadrature uses
/// the M-point Gauss rule in xi and enough eta points to integrate
/// v^3 * (degree M-1) exactly.
pub fn compute_moments(f: &DGField2D) -> Result<MomentSet> {
    let m = f.order;
    let mesh = f.mesh;
    let xr = gauss_legendre(m)?;
    let nv = (m + 3).div_ceil(2);
    let vr = gauss_legendre(nv)?;
    let ax = mesh.x_axis();
    let mut density = DGField1D::zeros(ax, m);
    let mut current = DGField1D::zeros(ax, m);
    let mut energy2 = DGField1D::zeros(ax, m);
    let mut energy3 = DGField1D::zeros(ax, m);

    // cache xi-basis values
    let mut phix = vec![0.0; m * m];
    for (a, &p) in xr.points.iter().enumerate() {
        for l in 0..m {
            phix[a * m + l] = basis_1d(l + 1, p);
        }
    }

    for i in 0..mesh.mx {
        for j in 0..mesh.mv {
            let vc = mesh.v_center(j);
            for (a, &xa) in xr.points.iter().enumerate() {
                let wa = xr.weights[a];
                for (&eb, &wb) in vr.points.iter().zip(&vr.weights) {
                    let v = vc + 0.5 * mesh.dv * eb;
                    let fv = f.eval_cell(i, j, xa, eb);
                    // dv integral contributes dv/2 * wb; the xi projection
                    // carries its own 1/2 * wa factor
                    let g = 0.25 * wa * wb * mesh.dv * fv;
                    for l in 0..m {
                        let p = g * phix[a * m + l];
                        density.cell_mut(i)[l] += p;
                        current.cell_mut(i)[l] += p * v;
                        energy2.cell_mut(i)[l] += p * v * v;
                        energy3.cell_mut(i)[l] += p * v * v * v;
                    }
                }
            }
        }
    }
    Ok(MomentSet { density, current, energy2, energy3 })
}

/// Fifth-order first derivative of a coefficient field on a periodic
/// mesh. Only the five-coefficient (M = 5) layout is supported.
pub fn legendre_dx(f: &DGField1D) -> Result<DGField1D> {
    if f.order != 5 {
        return Err(Error::UnsupportedOrder(f.order, "legendre_dx needs order 5"));
    }
    let n = f.mesh.n;
    let dx = f.mesh.dx;
    let s5 = 5.0_f64.sqrt();
    let s21 = 21.0_f64.sqrt();
    let mut out = DGField1D::zeros(f.mesh, 5);
    for i in 0..n {
        let ip = (i + 1) % n;
        let im = (i + n - 1) % n;
        let d1 = |l: usize| f.cell(ip)[l] - f.cell(im)[l];
        let c = out.cell_mut(i);
        c[0] = (d1(0) - 2.0 * s5 * d1(2) + 78.0 * d1(4)) / (2.0 * dx);
        c[1] = (d1(1) - (10.0 / 3.0) * s21 * d1(3)) / (2.0 * dx);
        c[2] = (d1(2) - 14.0 * s5 * d1(4)) / (2.0 * dx);
        c[3] = d1(3) / (2.0 * dx);
        c[4] = d1(4) / (2.0 * dx);
    }
    Ok(out)
}

/// Fifth-order second derivative; periodic, order 5 only.
pub fn legendre_dxx(f: &DGField1D) -> Result<DGField1D> {
    if f.order != 5 {
        return Err(Error::UnsupportedOrder(f.order, "legendre_dxx needs order 5"));
    }
    let n = f.mesh.n;
    let dx2 = f.mesh.dx * f.mesh.dx;
    let s5 = 5.0_f64.sqrt();
    let s21 = 21.0_f64.sqrt();
    let mut out = DGField1D::zeros(f.mesh, 5);
    for i in 0..n {
        let ip = (i + 1) % n;
        let im = (i + n - 1) % n;
        let d2 = |l: usize| f.cell(ip)[l] - 2.0 * f.cell(i)[l] + f.cell(im)[l];
        let c = out.cell_mut(i);
        c[0] = (d2(0) - s5 * d2(2) + 11.0 * d2(4)) / dx2;
        c[1] = (d2(1) - (5.0 / 3.0) * s21 * d2(3)) / dx2;
        c[2] = (d2(2) - 7.0 * s5 * d2(4)) / dx2;
        c[3] = d2(3) / dx2;
        c[4] = d2(4) / dx2;
    }
    Ok(out)
}

/// Time-derivative corrections from an external forcing of the kinetic
/// equation; all zero for the self-consistent system.
pub trait FieldCorrections {
    fn c1(&self, x: f64, t: f64) -> f64;
    fn c2(&self, x: f64, t: f64) -> f64;
    fn c3(&self, x: f64, t: f64) -> f64;
}

/// No forcing: all corrections vanish.
pub struct NoCorrections;

impl FieldCorrections for NoCorrections {
    fn c1(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn c2(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn c3(&self, _: f64, _: f64) -> f64 {
        0.0
    }
}

/// Degree of the time expansion of E used to build displacements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaylorDegree {
    /// E frozen at the expansion time.
    Constant,
    /// E + t E_t + t^2/2 E_tt + t^3/6 E_ttt.
    Cubic,
}

/// Taylor expansion of the electric field about a reference time.
pub struct EFieldTaylor {
    pub t0: f64,
    pub e: DGField1D,
    pub et: DGField1D,
    pub ett: DGField1D,
    pub ettt: DGField1D,
}

/// Assemble the expansion from the field and its moments at time `t0`.
pub fn build_taylor(
    e: &DGField1D,
    moments: &MomentSet,
    t0: f64,
    corrections: &dyn FieldCorrections,
    degree: TaylorDegree,
) -> Result<EFieldTaylor> {
    let mesh = e.mesh;
    let m = e.order;
    let project_src = |g: &dyn Fn(f64) -> f64| DGField1D::project_with(mesh, m, m, g);

    if matches!(degree, TaylorDegree::Constant) {
        return Ok(EFieldTaylor {
            t0,
            e: e.clone(),
            et: DGField1D::zeros(mesh, m),
            ett: DGField1D::zeros(mesh, m),
            ettt: DGField1D::zeros(mesh, m),
        });
    }

    // E_t = -j + C1
    let mut et = moments.current.scaled(-1.0);
    et.add_assign(&project_src(&|x| corrections.c1(x, t0))?);

    // E_tt = d/dx(e2) - rho E + C2; rho here is the full density
    let mut ett = legendre_dx(&moments.energy2)?;
    let rho_e = moments.density.pointwise_product(e)?;
    ett.sub_assign(&rho_e);
    ett.add_assign(&project_src(&|x| corrections.c2(x, t0))?);

    // E_ttt = d/dx(2 j E) - d2/dx2(e3) + E d/dx(j) + rho^2 u + C3,
    // assembled termwise with pointwise products re-projected
    let je = moments.current.pointwise_product(e)?;
    let mut ettt = legendre_dx(&je.scaled(2.0))?;
    ettt.sub_assign(&legendre_dxx(&moments.energy3)?);
    let djdx = legendre_dx(&moments.current)?;
    ettt.add_assign(&e.pointwise_product(&djdx)?);
    let rho_j = moments.density.pointwise_product(&moments.current)?;
    ettt.add_assign(&rho_j);
    ettt.add_assign(&project_src(&|x| corrections.c3(x, t0))?);

    Ok(EFieldTaylor { t0, e: e.clone(), et, ett, ettt })
}

impl EFieldTaylor {
    /// Time-integrated field int_{ta}^{tb} E(x, t) dt at point x, with
    /// ta, tb measured as absolute times (offsets from t0 are taken
    /// internally).
    pub fn displacement(&self, x: f64, ta: f64, tb: f64) -> Result<f64> {
        let a = ta - self.t0;
        let b = tb - self.t0;
        let p1 = b - a;
        let p2 = 0.5 * (b * b - a * a);
        let p3 = (b * b * b - a * a * a) / 6.0;
        let p4 = (b * b * b * b - a * a * a * a) / 24.0;
        Ok(self.e.eval(x)? * p1
            + self.et.eval(x)? * p2
            + self.ett.eval(x)? * p3
            + self.ettt.eval(x)? * p4)
    }

    /// Same as [`displacement`](Self::displacement) but with the cell
    /// index and canonical coordinate already known.
    pub fn displacement_cell(&self, i: usize, xi: f64, ta: f64, tb: f64) -> f64 {
        let a = ta - self.t0;
        let b = tb - self.t0;
        let p1 = b - a;
        let p2 = 0.5 * (b * b - a * a);
        let p3 = (b * b * b - a * a * a) / 6.0;
        let p4 = (b * b * b * b - a * a * a * a) / 24.0;
        self.e.eval_cell(i, xi) * p1
            + self.et.eval_cell(i, xi) * p2
            + self.ett.eval_cell(i, xi) * p3
            + self.ettt.eval_cell(i, xi) * p4
    }
}

/// Max |E| over per-cell Gauss points, used to size time steps.
pub fn efield_max(e: &DGField1D) -> f64 {
    e.max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Mesh1D, Mesh2D};
    use std::f64::consts::PI;

    #[test]
    fn moments_of_separable_field() {
        // f(x, v) = (1 + cos x) * v^2 on [0, 2 pi] x [-2, 2]
        let mesh = Mesh2D::new(12, 8, 0.0, 2.0 * PI, -2.0, 2.0).unwrap();
        let f = DGField2D::project_with(mesh, 5, 8, |x, v| (1.0 + x.cos()) * v * v).unwrap();
        let mom = compute_moments(&f).unwrap();
        // int_{-2}^{2} v^2 dv = 16/3; v^3: 0; v^4: 64/5; v^5: 0
        let rho_exact = DGField1D::project_with(mesh.x_axis(), 5, 8, |x| (1.0 + x.cos()) * 16.0 / 3.0).unwrap();
        let e2_exact = DGField1D::project_with(mesh.x_axis(), 5, 8, |x| (1.0 + x.cos()) * 64.0 / 5.0).unwrap();
        let err = mom.density.relative_l2_error(&rho_exact).unwrap();
        assert!(err < 1e-6, "rho err {err:.2e}");
        assert!(mom.current.l2_norm() < 1e-10);
        let err = mom.energy2.relative_l2_error(&e2_exact).unwrap();
        assert!(err < 1e-6, "e2 err {err:.2e}");
        assert!(mom.energy3.l2_norm() < 1e-10);
    }

    #[test]
    fn moment_quadrature_exact_for_polynomial_f() {
        // f polynomial of degree <= 4 in v: moments must be exact to
        // rounding since the rule integrates v^3 * f exactly
        let mesh = Mesh2D::new(4, 6, 0.0, 1.0, -1.0, 1.0).unwrap();
        let f = DGField2D::project(mesh, 5, |x, v| (1.0 + x) * (1.0 + v + v * v)).unwrap();
        let mom = compute_moments(&f).unwrap();
        // exact v-integrals over each cell computed against projection
        let rho_exact = DGField1D::project(mesh.x_axis(), 5, |x| (1.0 + x) * (2.0 + 2.0 / 3.0)).unwrap();
        for (a, b) in mom.density.data.iter().zip(&rho_exact.data) {
            assert!((a - b).abs() < 1e-13);
        }
        // j = (1+x) int v + v^2 + v^3 dv = (1+x) * 2/3
        let j_exact = DGField1D::project(mesh.x_axis(), 5, |x| (1.0 + x) * 2.0 / 3.0).unwrap();
        for (a, b) in mom.current.data.iter().zip(&j_exact.data) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_formulas_are_high_order() {
        let run = |n: usize| -> (f64, f64) {
            let mesh = Mesh1D::new(n, 0.0, 2.0 * PI).unwrap();
            let f = DGField1D::project_with(mesh, 5, 8, |x| x.sin()).unwrap();
            let d1 = legendre_dx(&f).unwrap();
            let d2 = legendre_dxx(&f).unwrap();
            let c1 = DGField1D::project_with(mesh, 5, 8, |x| x.cos()).unwrap();
            let c2 = DGField1D::project_with(mesh, 5, 8, |x| -x.sin()).unwrap();
            (
                d1.relative_l2_error(&c1).unwrap(),
                d2.relative_l2_error(&c2).unwrap(),
            )
        };
        let (a1, a2) = run(10);
        let (b1, b2) = run(20);
        let r1 = (a1 / b1).log2();
        let r2 = (a2 / b2).log2();
        assert!(r1 > 4.5, "dx rate {r1} ({a1:.2e} -> {b1:.2e})");
        assert!(r2 > 4.5, "dxx rate {r2} ({a2:.2e} -> {b2:.2e})");
    }

    #[test]
    fn derivative_rejects_wrong_order() {
        let mesh = Mesh1D::new(4, 0.0, 1.0).unwrap();
        let f = DGField1D::zeros(mesh, 3);
        assert!(matches!(legendre_dx(&f), Err(Error::UnsupportedOrder(3, _))));
        assert!(matches!(legendre_dxx(&f), Err(Error::UnsupportedOrder(3, _))));
    }

    #[test]
    fn constant_taylor_displacement() {
        let mesh = Mesh1D::new(8, 0.0, 1.0).unwrap();
        let e = DGField1D::project(mesh, 5, |x| 1.0 + x).unwrap();
        let taylor = EFieldTaylor {
            t0: 2.0,
            e: e.clone(),
            et: DGField1D::zeros(mesh, 5),
            ett: DGField1D::zeros(mesh, 5),
            ettt: DGField1D::zeros(mesh, 5),
        };
        let d = taylor.displacement(0.5, 2.0, 2.5).unwrap();
        assert!((d - 1.5 * 0.5).abs() < 1e-13);
    }

    #[test]
    fn taylor_reproduces_polynomial_time_dependence() {
        // choose coefficient fields directly and verify the quartic
        // antiderivative weights
        let mesh = Mesh1D::new(4, 0.0, 1.0).unwrap();
        let one = DGField1D::project(mesh, 5, |_| 1.0).unwrap();
        let taylor = EFieldTaylor {
            t0: 0.0,
            e: one.clone(),
            et: one.scaled(2.0),
            ett: one.scaled(6.0),
            ettt: one.scaled(24.0),
        };
        // E(t) = 1 + 2t + 3t^2 + 4t^3; int_0^1 = 1 + 1 + 1 + 1 = 4
        let d = taylor.displacement(0.3, 0.0, 1.0).unwrap();
        assert!((d - 4.0).abs() < 1e-12);
    }
}
