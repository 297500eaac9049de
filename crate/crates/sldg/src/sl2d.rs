//! Quasi-1D semi-Lagrangian sweeps over a 2D phase-space field.
//!
//! A sweep advects every mesh row along its first coordinate. Within a
//! row the displacement may differ between the M transverse Gauss lines
//! (the advection speed varies across the cell); each line is advected
//! with its own shift and overlap matrices and the results are
//! reassembled with the half Gauss weights w_k / 2. Sweeps along the
//! second coordinate reuse the same kernel on the transposed field.

use crate::advect1d::{advect_line, advect_row, decompose_shift, overlap_matrices, Boundary};
use crate::basis::basis_2d;
use crate::error::{Error, Result};
use crate::field::DGField2D;
use crate::gauss::gauss_legendre;
use crate::limiter::{limit_cell, CheckPoints, LimiterReport};
use crate::mesh::Mesh2D;
use crate::moments::EFieldTaylor;
use rayon::prelude::*;

/// Displacements for one sweep: `disp[row * m + line]` is the physical
/// displacement of Gauss line `line` of row `row` along the sweep axis.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub nrows: usize,
    pub order: usize,
    pub disp: Vec<f64>,
    /// Cell size along the sweep axis.
    pub dx: f64,
    pub bc: Boundary,
}

/// Plan an x-direction sweep of duration `dt` at speed `speed(v)`,
/// sampled at the Gauss line ordinates of each velocity cell.
pub fn x_sweep_plan(
    mesh: &Mesh2D,
    m: usize,
    dt: f64,
    bc: Boundary,
    speed: &dyn Fn(f64) -> f64,
) -> Result<SweepPlan> {
    let rule = gauss_legendre(m)?;
    let mut disp = Vec::with_capacity(mesh.mv * m);
    for j in 0..mesh.mv {
        let vc = mesh.v_center(j);
        for &eta in &rule.points {
            disp.push(speed(vc + 0.5 * mesh.dv * eta) * dt);
        }
    }
    Ok(SweepPlan { nrows: mesh.mv, order: m, disp, dx: mesh.dx, bc })
}

/// Plan a v-direction sweep (to run on the transposed field) with the
/// displacement given by the time-integrated electric field between
/// `ta` and `tb`, sampled at the Gauss abscissas of each x cell. The
/// characteristics are straight in v, so one displacement per x point
/// serves the whole column.
pub fn v_sweep_plan_taylor(
    mesh: &Mesh2D,
    m: usize,
    taylor: &EFieldTaylor,
    ta: f64,
    tb: f64,
    bc: Boundary,
) -> Result<SweepPlan> {
    let rule = gauss_legendre(m)?;
    let mut disp = Vec::with_capacity(mesh.mx * m);
    for i in 0..mesh.mx {
        for &xi in &rule.points {
            disp.push(taylor.displacement_cell(i, xi, ta, tb));
        }
    }
    Ok(SweepPlan { nrows: mesh.mx, order: m, disp, dx: mesh.dv, bc })
}

/// Plan a v-direction sweep (to run on the transposed field) at the
/// prescribed speed `speed(x)` of duration `dt`, sampled at the Gauss
/// abscissas of each x cell.
pub fn v_sweep_plan_speed(
    mesh: &Mesh2D,
    m: usize,
    dt: f64,
    bc: Boundary,
    speed: &dyn Fn(f64) -> f64,
) -> Result<SweepPlan> {
    let rule = gauss_legendre(m)?;
    let mut disp = Vec::with_capacity(mesh.mx * m);
    for i in 0..mesh.mx {
        let xc = mesh.x_center(i);
        for &xi in &rule.points {
            disp.push(speed(xc + 0.5 * mesh.dx * xi) * dt);
        }
    }
    Ok(SweepPlan { nrows: mesh.mx, order: m, disp, dx: mesh.dv, bc })
}

/// Check points sampled by the donor integrals of one row: for every
/// line with a genuinely fractional shift, the K-point Gauss images in
/// both donor cells at that line's transverse ordinate; for lines moved
/// by whole cells, the K-point Gauss line across the full cell. The
/// latter matters because lines of one target cell may arrive from
/// different donors, so the update mixes per-line means, not cell
/// means, and each line mean must be nonnegative on its own.
fn row_check_points(shifts: &[(i64, f64)], m: usize) -> Result<Option<CheckPoints>> {
    let eta_rule = gauss_legendre(m)?;
    let k = m.div_ceil(2);
    let s_rule = gauss_legendre(k)?;
    let mut points = Vec::new();
    for (line, &(_, nu)) in shifts.iter().enumerate() {
        let eta = eta_rule.points[line];
        if nu == 0.0 {
            for &s in &s_rule.points {
                points.push((s, eta));
            }
        } else {
            for &s in &s_rule.points {
                // upstream-donor sliver [1-2nu, 1] and downstream-donor
                // remainder [-1, 1-2nu]
                points.push((1.0 - nu * (1.0 - s), eta));
                points.push((-nu + (1.0 - nu) * s, eta));
            }
        }
    }
    Ok(Some(CheckPoints { points }))
}

/// Execute a sweep along the first coordinate of `f`. When `limit` is
/// set, each donor row is rescaled cell by cell so the values sampled
/// by the update are nonnegative. `source`, if given, is a
/// time-integrated forcing s(x, v) accumulated along the arriving
/// characteristics; its cell projections are added after advection.
pub fn sweep(
    f: &DGField2D,
    plan: &SweepPlan,
    limit: bool,
    source: Option<&(dyn Fn(f64, f64) -> f64 + Sync)>,
) -> Result<(DGField2D, LimiterReport)> {
    let mesh = f.mesh;
    let m = f.order;
    let ncoef = f.ncoef;
    if plan.nrows != mesh.mv || plan.order != m || plan.dx != mesh.dx {
        return Err(Error::MeshMismatch("sweep plan does not match field".into()));
    }
    let rule = gauss_legendre(m)?;
    let mut out = DGField2D::zeros(mesh, f.order);
    let n = mesh.mx;

    let report = out
        .data
        .par_chunks_mut(n * ncoef)
        .enumerate()
        .map(|(j, out_row)| -> Result<LimiterReport> {
            let mut report = LimiterReport::none();
            let in_row = &f.data[j * n * ncoef..(j + 1) * n * ncoef];

            let mut shifts = Vec::with_capacity(m);
            for k in 0..m {
                let d = plan.disp[j * m + k];
                if !d.is_finite() {
                    return Err(Error::NonFinite(j, k));
                }
                let s = decompose_shift(d, 1.0, plan.dx)?;
                shifts.push((s.whole, s.frac));
            }

            // every line moving by the same whole number of cells is an
            // exact translation: the update is a bit-exact donor copy
            // which preserves cell means, so no limiting is needed
            let uniform_whole = shifts.iter().all(|&(w, f)| f == 0.0 && w == shifts[0].0);

            let donor: Vec<f64>;
            let donor_ref: &[f64] = if limit && !uniform_whole {
                let mut copy = in_row.to_vec();
                if let Some(check) = row_check_points(&shifts, m)? {
                    for i in 0..n {
                        let cell = &mut copy[i * ncoef..(i + 1) * ncoef];
                        let mut min_val = f64::INFINITY;
                        for &(xi, eta) in &check.points {
                            let mut v = 0.0;
                            for (l, &c) in cell.iter().enumerate() {
                                v += c * basis_2d(l + 1, xi, eta);
                            }
                            min_val = min_val.min(v);
                        }
                        let theta = limit_cell(cell, &check)?;
                        if theta < 1.0 {
                            report.cells_limited += 1;
                            report.min_theta = report.min_theta.min(theta);
                        }
                        report.worst_point_value = report.worst_point_value.min(min_val);
                    }
                }
                donor = copy;
                &donor
            } else {
                in_row
            };

            if uniform_whole {
                let ov = overlap_matrices(0.0, m, 0.0)?;
                advect_row(
                    donor_ref,
                    out_row,
                    n,
                    crate::advect1d::ShiftDecomposition { whole: shifts[0].0, frac: 0.0 },
                    &ov,
                    plan.bc,
                );
            } else {
                let mut line_out = vec![0.0; n * ncoef];
                for k in 0..m {
                    let (whole, frac) = shifts[k];
                    let ov = overlap_matrices(frac, m, rule.points[k])?;
                    advect_line(
                        donor_ref,
                        &mut line_out,
                        n,
                        crate::advect1d::ShiftDecomposition { whole, frac },
                        &ov,
                        plan.bc,
                    );
                    let w = 0.5 * rule.weights[k];
                    for (dst, src) in out_row.iter_mut().zip(&line_out) {
                        *dst += w * src;
                    }
                }
            }

            if let Some(s) = source {
                let vc = mesh.v_center(j);
                for i in 0..n {
                    let xc = mesh.x_center(i);
                    let cell = &mut out_row[i * ncoef..(i + 1) * ncoef];
                    for (&pa, &wa) in rule.points.iter().zip(&rule.weights) {
                        let x = xc + 0.5 * mesh.dx * pa;
                        for (&pb, &wb) in rule.points.iter().zip(&rule.weights) {
                            let v = vc + 0.5 * mesh.dv * pb;
                            let g = 0.25 * wa * wb * s(x, v);
                            for l in 0..ncoef {
                                cell[l] += g * basis_2d(l + 1, pa, pb);
                            }
                        }
                    }
                }
            }
            Ok(report)
        })
        .try_reduce(LimiterReport::none, |mut a, b| {
            a.merge(&b);
            Ok(a)
        })?;

    Ok((out, report))
}

/// Sweep along the second (velocity) coordinate: transpose, run the
/// row kernel, transpose back. `plan` must be built for the transposed
/// orientation ([`v_sweep_plan_taylor`]).
pub fn v_sweep(
    f: &DGField2D,
    plan: &SweepPlan,
    limit: bool,
) -> Result<(DGField2D, LimiterReport)> {
    let ft = f.transposed();
    let (out, report) = sweep(&ft, plan, limit, None)?;
    Ok((out.transposed(), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DGField1D;
    use crate::mesh::Mesh1D;
    use crate::moments::TaylorDegree;
    use std::f64::consts::PI;

    fn gaussian_mesh() -> Mesh2D {
        Mesh2D::new(16, 16, 0.0, 2.0 * PI, -4.0, 4.0).unwrap()
    }

    /// A row whose Gauss lines straddle a zero of the speed mixes
    /// whole shifts of -1 and 0 with one line shifted by exactly zero.
    /// That line must contribute its transverse restriction, not a
    /// coefficient copy, or the reassembled row loses mass.
    #[test]
    fn mixed_sign_row_with_zero_line_conserves_mass() {
        let mesh = Mesh2D::new(33, 1, 0.0, 1.0, 0.0, 1.0).unwrap();
        let f = DGField2D::project(mesh, 5, |x, v| {
            (v - 0.5) * (v - 0.5) * (2.0 - (2.0 * PI * x).cos())
        })
        .unwrap();
        let m0 = f.mean_sum();
        let dx = mesh.dx;
        let plan = SweepPlan {
            nrows: 1,
            order: 5,
            disp: vec![-0.0023 * dx, -0.0013 * dx, 0.0, 0.0013 * dx, 0.0023 * dx],
            dx,
            bc: Boundary::Periodic,
        };
        for limit in [false, true] {
            let (out, _) = sweep(&f, &plan, limit, None).unwrap();
            let drift = ((out.mean_sum() - m0) / m0).abs();
            assert!(drift < 1e-13, "limit={limit}: mass drift {drift:.3e}");
        }
    }

    #[test]
    fn constant_speed_sweep_matches_exact_shift() {
        let mesh = gaussian_mesh();
        let f0 = |x: f64, v: f64| (1.0 + 0.5 * x.sin()) * (-v * v).exp();
        let f = DGField2D::project_with(mesh, 5, 8, f0).unwrap();
        let dt = 0.37;
        let a = 1.3;
        let plan = x_sweep_plan(&mesh, 5, dt, Boundary::Periodic, &|_| a).unwrap();
        let (out, rep) = sweep(&f, &plan, false, None).unwrap();
        assert_eq!(rep.cells_limited, 0);
        let exact = DGField2D::project_with(mesh, 5, 8, |x, v| {
            let mut xs = x - a * dt;
            while xs < 0.0 {
                xs += 2.0 * PI;
            }
            f0(xs, v)
        })
        .unwrap();
        let err = out.relative_l2_error(&exact).unwrap();
        assert!(err < 2e-5, "err = {err:.3e}");
    }

    #[test]
    fn velocity_dependent_sweep_matches_characteristics() {
        // f_t + v f_x = 0 solved exactly in one step of any size
        let mesh = gaussian_mesh();
        let f0 = |x: f64, v: f64| (1.0 + 0.5 * (x - 1.0).cos()) * (-(v - 0.5) * (v - 0.5)).exp();
        let f = DGField2D::project_with(mesh, 5, 8, f0).unwrap();
        let dt = 0.9;
        let plan = x_sweep_plan(&mesh, 5, dt, Boundary::Periodic, &|v| v).unwrap();
        let (out, _) = sweep(&f, &plan, false, None).unwrap();
        let exact = DGField2D::project_with(mesh, 5, 8, |x, v| f0(x - v * dt, v)).unwrap();
        let err = out.relative_l2_error(&exact).unwrap();
        assert!(err < 2e-4, "err = {err:.3e}");
    }

    #[test]
    fn sweep_conserves_mass() {
        let mesh = gaussian_mesh();
        let f = DGField2D::project_with(mesh, 5, 8, |x, v| {
            (2.0 - x.cos()) * (-v * v / 2.0).exp()
        })
        .unwrap();
        let plan = x_sweep_plan(&mesh, 5, 0.73, Boundary::Periodic, &|v| v).unwrap();
        let (out, _) = sweep(&f, &plan, false, None).unwrap();
        let m0 = f.mean_sum();
        let m1 = out.mean_sum();
        assert!((m0 - m1).abs() < 1e-12 * m0.abs());
    }

    #[test]
    fn zero_displacement_is_identity() {
        let mesh = gaussian_mesh();
        let f = DGField2D::project(mesh, 5, |x, v| (x - v).sin() + 2.0).unwrap();
        let plan = x_sweep_plan(&mesh, 5, 0.0, Boundary::Periodic, &|v| v).unwrap();
        let (out, _) = sweep(&f, &plan, false, None).unwrap();
        assert_eq!(out.data, f.data);
    }

    #[test]
    fn xv_duality_via_transpose() {
        // advecting in v with speed g(x) equals transposing, advecting in
        // x with the same per-line displacements, and transposing back
        let mesh = Mesh2D::new(12, 12, 0.0, 1.0, 0.0, 1.0).unwrap();
        let f = DGField2D::project(mesh, 5, |x, v| {
            (2.0 * PI * x).sin() * (2.0 * PI * v).cos() + 2.0
        })
        .unwrap();
        let dt = 0.21;
        // displacement in v depends on x: d(x) = 0.3 cos(2 pi x)
        let tmesh = mesh.transposed();
        let plan = x_sweep_plan(&tmesh, 5, dt, Boundary::Periodic, &|x| {
            0.3 * (2.0 * PI * x).cos()
        })
        .unwrap();
        let (direct, _) = sweep(&f.transposed(), &plan, false, None).unwrap();
        let direct = direct.transposed();

        let vplan = SweepPlan {
            nrows: plan.nrows,
            order: 5,
            disp: plan.disp.clone(),
            dx: mesh.dv,
            bc: Boundary::Periodic,
        };
        let (via_helper, _) = v_sweep(&f, &vplan, false).unwrap();
        for (a, b) in direct.data.iter().zip(&via_helper.data) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn composition_of_split_steps() {
        // two half-steps of a constant-speed sweep equal one full step
        let mesh = gaussian_mesh();
        let f = DGField2D::project_with(mesh, 5, 8, |x, v| {
            (2.0 - x.cos()) * (-v * v).exp()
        })
        .unwrap();
        let full = x_sweep_plan(&mesh, 5, 0.5, Boundary::Periodic, &|_| 0.77).unwrap();
        let half = x_sweep_plan(&mesh, 5, 0.25, Boundary::Periodic, &|_| 0.77).unwrap();
        let (one, _) = sweep(&f, &full, false, None).unwrap();
        let (tmp, _) = sweep(&f, &half, false, None).unwrap();
        let (two, _) = sweep(&tmp, &half, false, None).unwrap();
        // re-projection between the half steps is not an exact semigroup,
        // but the splitting error stays at the discretization level
        let err = two.relative_l2_error(&one).unwrap();
        assert!(err < 1e-5, "err = {err:.3e}");
    }

    #[test]
    fn limited_sweep_keeps_means_nonnegative() {
        // a steep profile that produces undershoots
        let mesh = Mesh2D::new(20, 10, 0.0, 1.0, -1.0, 1.0).unwrap();
        let f = DGField2D::project(mesh, 5, |x, v| {
            if (x - 0.5).abs() < 0.15 && v.abs() < 0.4 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let plan = x_sweep_plan(&mesh, 5, 0.043, Boundary::Periodic, &|v| 1.0 + 0.3 * v).unwrap();
        let m0 = f.mean_sum() * mesh.dx * mesh.dv;
        let mut g = f;
        for _ in 0..10 {
            let (next, _rep) = sweep(&g, &plan, true, None).unwrap();
            g = next;
            for j in 0..mesh.mv {
                for i in 0..mesh.mx {
                    assert!(g.cell(i, j)[0] >= -crate::limiter::MEAN_TOL);
                }
            }
        }
        // mass is still conserved by the rescaling (up to the clamp of
        // numerically-zero means)
        let m1 = g.mean_sum() * mesh.dx * mesh.dv;
        assert!((m1 - m0).abs() < 1e-9, "mass {m1} vs {m0}");
    }

    #[test]
    fn taylor_plan_uses_field_displacement() {
        let mesh = Mesh2D::new(8, 8, 0.0, 1.0, -1.0, 1.0).unwrap();
        let ax = Mesh1D::new(8, 0.0, 1.0).unwrap();
        let e = DGField1D::project(ax, 5, |x| 0.2 + 0.1 * x).unwrap();
        let taylor = EFieldTaylor {
            t0: 0.0,
            e: e.clone(),
            et: DGField1D::zeros(ax, 5),
            ett: DGField1D::zeros(ax, 5),
            ettt: DGField1D::zeros(ax, 5),
        };
        let plan = v_sweep_plan_taylor(&mesh, 5, &taylor, 0.0, 0.5, Boundary::ZeroInflow).unwrap();
        // displacement = E(x) * 0.5 at the Gauss abscissas of each cell
        let rule = gauss_legendre(5).unwrap();
        for i in 0..8 {
            let xc = ax.center(i);
            for (k, &xi) in rule.points.iter().enumerate() {
                let x = xc + 0.5 * ax.dx * xi;
                let expect = (0.2 + 0.1 * x) * 0.5;
                assert!((plan.disp[i * 5 + k] - expect).abs() < 1e-13);
            }
        }
        let _ = TaylorDegree::Constant; // silence unused import in cfg(test)
    }

    #[test]
    fn source_term_is_projected_into_cells() {
        let mesh = Mesh2D::new(4, 4, 0.0, 1.0, 0.0, 1.0).unwrap();
        let f = DGField2D::zeros(mesh, 5);
        let plan = x_sweep_plan(&mesh, 5, 0.1, Boundary::Periodic, &|_| 0.0).unwrap();
        let src = |x: f64, v: f64| x + 2.0 * v;
        let (out, _) = sweep(&f, &plan, false, Some(&src)).unwrap();
        let exact = DGField2D::project(mesh, 5, src).unwrap();
        for (a, b) in out.data.iter().zip(&exact.data) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
