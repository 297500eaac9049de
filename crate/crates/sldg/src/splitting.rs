//! Time integration by operator splitting.
//!
//! Two drivers advance the phase-space field: second-order Strang
//! splitting and a seven-stage fourth-order composition. Both alternate
//! x-transport sweeps with v-direction sweeps whose displacement comes
//! either from a self-consistently solved electric field or from a
//! prescribed transverse velocity.

use crate::diagnostics::{conserved_set, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::field::{DGField1D, DGField2D};
use crate::limiter::{final_points, limit_field, LimiterReport};
use crate::mesh::Mesh2D;
use crate::moments::{
    build_taylor, compute_moments, EFieldTaylor, FieldCorrections, MomentSet, NoCorrections,
    TaylorDegree,
};
use crate::poisson::LdgOperator;
use crate::scenario::{Fn1, Mode, Scenario, SchemeKind};
use crate::sl2d::{sweep, v_sweep, v_sweep_plan_speed, v_sweep_plan_taylor, x_sweep_plan};

/// Splitting coefficients. The fourth-order composition uses the
/// classic triple-jump weights gamma1 = 1/(2 - 2^(1/3)) and
/// gamma2 = -2^(1/3) gamma1 with 2 gamma1 + gamma2 = 1.
#[derive(Debug, Clone, Copy)]
pub struct SplitScheme {
    pub kind: SchemeKind,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl SplitScheme {
    pub fn new(kind: SchemeKind) -> Self {
        let g1 = 1.0 / (2.0 - 2f64.cbrt());
        SplitScheme { kind, gamma1: g1, gamma2: -(2f64.cbrt()) * g1 }
    }

    /// Durations of the four x-transport stages as fractions of dt.
    pub fn x_fractions(&self) -> [f64; 4] {
        let h1 = 0.5 * self.gamma1;
        let h12 = 0.5 * (self.gamma1 + self.gamma2);
        [h1, h12, h12, h1]
    }

    /// Durations of the three v-direction stages as fractions of dt.
    pub fn v_fractions(&self) -> [f64; 3] {
        [self.gamma1, self.gamma2, self.gamma1]
    }
}

/// Everything that evolves during a run.
pub struct SimulationState {
    pub scenario: Scenario,
    pub order: usize,
    pub f: DGField2D,
    pub t: f64,
    pub step: usize,
    pub limiter_on: bool,
    pub limiter_report: LimiterReport,
}

impl SimulationState {
    /// Project the scenario's initial data onto the DG space.
    pub fn new(
        scenario: Scenario,
        mx: usize,
        mv: usize,
        order: usize,
        limiter_on: bool,
    ) -> Result<Self> {
        scenario.validate()?;
        let (xlo, xhi, vlo, vhi) = scenario.domain;
        let mesh = Mesh2D::new(mx, mv, xlo, xhi, vlo, vhi)?;
        let init = scenario.initial.clone();
        let mut f = DGField2D::project(mesh, order, |x, v| init(x, v))?;
        if limiter_on {
            // the projection of nonnegative data can undershoot at the
            // Gauss points; start from a positivity-corrected state
            limit_field(&mut f, &final_points(order)?)?;
        }
        Ok(SimulationState {
            scenario,
            order,
            f,
            t: 0.0,
            step: 0,
            limiter_on,
            limiter_report: LimiterReport::none(),
        })
    }
}

/// Velocity moments and the periodic field solve for the current
/// distribution: the source is the density minus its domain mean (the
/// neutralizing background), which also enforces the periodic
/// compatibility condition.
pub fn solve_field(f: &DGField2D) -> Result<(MomentSet, DGField1D)> {
    let moments = compute_moments(f)?;
    let mut src = moments.density.clone();
    let rho0 = src.domain_mean();
    for i in 0..src.mesh.n {
        src.cell_mut(i)[0] -= rho0;
    }
    let ldg = LdgOperator::assemble(f.order)?;
    let (e, _phi) = ldg.solve_periodic(&src)?;
    Ok((moments, e))
}

/// One x-transport stage from time `ta` to `tb` (possibly backward).
/// Moves each Gauss line at its transverse speed and, for forced
/// problems, adds the exact characteristic integral of the source over
/// [ta, tb].
fn a_step(state: &mut SimulationState, ta: f64, tb: f64) -> Result<()> {
    let mesh = state.f.mesh;
    let m = state.order;
    let dt = tb - ta;
    let plan = match &state.scenario.mode {
        Mode::PureAdvection { horizontal, .. } => {
            x_sweep_plan(&mesh, m, dt, state.scenario.x_bc, &**horizontal)?
        }
        _ => x_sweep_plan(&mesh, m, dt, state.scenario.x_bc, &|v| v)?,
    };
    let (out, rep) = if let Some(forcing) = &state.scenario.forcing {
        let ac = &forcing.along_characteristic;
        let src = move |x: f64, v: f64| ac(x, v, ta, tb);
        sweep(&state.f, &plan, state.limiter_on, Some(&src))?
    } else {
        sweep(&state.f, &plan, state.limiter_on, None)?
    };
    state.f = out;
    state.limiter_report.merge(&rep);
    Ok(())
}

/// One v-direction stage displaced by the time integral of the field
/// expansion over [ta, tb].
fn b_step_taylor(state: &mut SimulationState, taylor: &EFieldTaylor, ta: f64, tb: f64) -> Result<()> {
    let plan = v_sweep_plan_taylor(&state.f.mesh, state.order, taylor, ta, tb, state.scenario.v_bc)?;
    let (out, rep) = v_sweep(&state.f, &plan, state.limiter_on)?;
    state.f = out;
    state.limiter_report.merge(&rep);
    Ok(())
}

/// One v-direction stage at a prescribed speed for duration `dt`.
fn b_step_speed(state: &mut SimulationState, vertical: &Fn1, dt: f64) -> Result<()> {
    let plan = v_sweep_plan_speed(&state.f.mesh, state.order, dt, state.scenario.v_bc, &**vertical)?;
    let (out, rep) = v_sweep(&state.f, &plan, state.limiter_on)?;
    state.f = out;
    state.limiter_report.merge(&rep);
    Ok(())
}

/// Post-step bookkeeping: one final positivity pass over the tensor
/// Gauss points, then advance the clock.
fn finish_step(state: &mut SimulationState, dt: f64) -> Result<()> {
    if state.limiter_on {
        let check = final_points(state.order)?;
        let rep = limit_field(&mut state.f, &check)?;
        state.limiter_report.merge(&rep);
    }
    state.t += dt;
    state.step += 1;
    Ok(())
}

/// Second-order Strang step: half x-transport, one full v-stage with
/// the field frozen at the half-time solve, half x-transport.
pub fn strang_step(state: &mut SimulationState, dt: f64) -> Result<()> {
    let t = state.t;
    a_step(state, t, t + 0.5 * dt)?;
    match state.scenario.mode.clone() {
        Mode::PureAdvection { vertical, .. } => b_step_speed(state, &vertical, dt)?,
        _ => {
            let (_, e) = solve_field(&state.f)?;
            let mesh = e.mesh;
            let m = e.order;
            // freeze E^{n+1/2}: the displacement is E (x) * dt
            let taylor = EFieldTaylor {
                t0: t,
                e,
                et: DGField1D::zeros(mesh, m),
                ett: DGField1D::zeros(mesh, m),
                ettt: DGField1D::zeros(mesh, m),
            };
            b_step_taylor(state, &taylor, t, t + dt)?;
        }
    }
    a_step(state, t + 0.5 * dt, t + dt)?;
    finish_step(state, dt)
}

/// Fourth-order step: one field solve and cubic-in-time expansion at
/// the step start, then the seven-stage composition with x-stage
/// durations gamma1/2, (gamma1+gamma2)/2, (gamma1+gamma2)/2, gamma1/2
/// and v-stages over the sub-intervals [0, g1], [g1, g1+g2],
/// [g1+g2, 1] of dt. The middle stages run backward in time.
pub fn fourth_step(state: &mut SimulationState, dt: f64) -> Result<()> {
    let sch = SplitScheme::new(SchemeKind::Sl4);
    let xf = sch.x_fractions();
    let vf = sch.v_fractions();
    let t = state.t;

    // the x-transport stages follow their own cumulative clock so the
    // forcing is integrated over consecutive intervals covering [t, t+dt]
    let mut a_marks = [0.0; 5];
    for i in 0..4 {
        a_marks[i + 1] = a_marks[i] + xf[i];
    }
    let mut b_marks = [0.0; 4];
    for i in 0..3 {
        b_marks[i + 1] = b_marks[i] + vf[i];
    }

    match state.scenario.mode.clone() {
        Mode::PureAdvection { vertical, .. } => {
            for stage in 0..3 {
                a_step(state, t + a_marks[stage] * dt, t + a_marks[stage + 1] * dt)?;
                b_step_speed(state, &vertical, vf[stage] * dt)?;
            }
            a_step(state, t + a_marks[3] * dt, t + a_marks[4] * dt)?;
        }
        _ => {
            let (moments, e) = solve_field(&state.f)?;
            let corrections = state.scenario.corrections.clone();
            let corr: &dyn FieldCorrections = match &corrections {
                Some(c) => &**c,
                None => &NoCorrections,
            };
            let taylor = build_taylor(&e, &moments, t, corr, TaylorDegree::Cubic)?;
            for stage in 0..3 {
                a_step(state, t + a_marks[stage] * dt, t + a_marks[stage + 1] * dt)?;
                b_step_taylor(
                    state,
                    &taylor,
                    t + b_marks[stage] * dt,
                    t + b_marks[stage + 1] * dt,
                )?;
            }
            a_step(state, t + a_marks[3] * dt, t + a_marks[4] * dt)?;
        }
    }
    finish_step(state, dt)
}

/// Largest |speed| over a fine sample of the interval, used for step
/// sizing against prescribed velocity fields.
fn sampled_speed_bound(speed: &Fn1, lo: f64, hi: f64) -> f64 {
    let n = 4096;
    let mut best = 0.0f64;
    for i in 0..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        best = best.max(speed(x).abs());
    }
    best
}

/// Result of a full run: final state plus the per-step diagnostics.
pub struct RunResult {
    pub state: SimulationState,
    pub diagnostics: Vec<DiagnosticsRecord>,
}

/// Advance a scenario to `t_final`.
///
/// The step is dt = cfl / max(Vmax/dx, Amax/dv) where Vmax bounds the
/// x-direction speed (the scenario's bound unless `vmax_override` is
/// positive) and Amax bounds the v-direction speed: the prescribed
/// transverse speed for pure advection, or the initial max |E| for
/// kinetic runs. dt is then held constant, with only the last step
/// shortened to land on `t_final`. `on_step` sees every diagnostics
/// record (including the initial one) together with the state.
#[allow(clippy::too_many_arguments)]
pub fn run(
    scenario: &Scenario,
    mx: usize,
    mv: usize,
    order: usize,
    cfl: f64,
    t_final: f64,
    scheme: SchemeKind,
    limiter_on: bool,
    vmax_override: f64,
    mut on_step: impl FnMut(&DiagnosticsRecord, &SimulationState) -> Result<()>,
) -> Result<RunResult> {
    if !(cfl > 0.0) {
        return Err(Error::Config("cfl must be positive".into()));
    }
    if !(t_final >= 0.0) {
        return Err(Error::Config("t_final must be nonnegative".into()));
    }
    let mut state = SimulationState::new(scenario.clone(), mx, mv, order, limiter_on)?;
    let mesh = state.f.mesh;

    let vmax = if vmax_override > 0.0 { vmax_override } else { scenario.vmax };
    let amax = match &scenario.mode {
        Mode::PureAdvection { vertical, .. } => {
            sampled_speed_bound(vertical, mesh.xlo, mesh.xhi)
        }
        _ => solve_field(&state.f)?.1.max_abs(),
    };
    let rate = (vmax / mesh.dx).max(amax / mesh.dv);
    let dt_fixed = if rate > 0.0 { cfl / rate } else { t_final };

    let observe = |state: &SimulationState| -> Result<DiagnosticsRecord> {
        let e = match &state.scenario.mode {
            Mode::PureAdvection { .. } => DGField1D::zeros(mesh.x_axis(), state.order),
            _ => solve_field(&state.f)?.1,
        };
        conserved_set(state.t, &state.f, &e)
    };

    let mut diagnostics = Vec::new();
    let rec = observe(&state)?;
    on_step(&rec, &state)?;
    diagnostics.push(rec);

    let t_eps = 1e-12 * t_final.max(1.0);
    while state.t < t_final - t_eps {
        let dt = dt_fixed.min(t_final - state.t);
        if !(dt > 0.0) {
            break;
        }
        match scheme {
            SchemeKind::Sl2 => strang_step(&mut state, dt)?,
            SchemeKind::Sl4 => fourth_step(&mut state, dt)?,
        }
        let rec = observe(&state)?;
        on_step(&rec, &state)?;
        diagnostics.push(rec);
    }

    Ok(RunResult { state, diagnostics })
}

/// Run the scenario on a sequence of n x n meshes and report the
/// relative L2 error of the final field against the projected exact
/// solution at `t_final`.
pub fn convergence_study(
    scenario: &Scenario,
    meshes: &[usize],
    order: usize,
    cfl: f64,
    t_final: f64,
    scheme: SchemeKind,
    limiter_on: bool,
) -> Result<Vec<(usize, f64)>> {
    let exact = scenario
        .exact_f
        .clone()
        .ok_or_else(|| Error::NoExactSolution(scenario.name.to_string()))?;
    let mut rows = Vec::with_capacity(meshes.len());
    for &n in meshes {
        let result = run(scenario, n, n, order, cfl, t_final, scheme, limiter_on, 0.0, |_, _| {
            Ok(())
        })?;
        rows.push((n, result.state.f.relative_l2_error_fn(|x, v| exact(t_final, x, v))?));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advect1d::Boundary;
    use crate::scenario::{scenario_by_name, Scenario};
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn split_coefficients() {
        let s = SplitScheme::new(SchemeKind::Sl4);
        assert!((s.gamma1 - 1.351207191959658).abs() < 1e-14);
        assert!((2.0 * s.gamma1 + s.gamma2 - 1.0).abs() < 1e-15);
        let xa: f64 = s.x_fractions().iter().sum();
        let va: f64 = s.v_fractions().iter().sum();
        assert!((xa - 1.0).abs() < 1e-15, "x stage fractions sum to {xa}");
        assert!((va - 1.0).abs() < 1e-15, "v stage fractions sum to {va}");
    }

    /// Free streaming: x-transport at speed v, nothing in the v
    /// direction.
    fn free_streaming() -> Scenario {
        Scenario {
            name: "free_streaming",
            domain: (0.0, 2.0 * PI, -3.0, 3.0),
            initial: Arc::new(|x, v| (1.0 + 0.5 * x.sin()) * (-v * v).exp()),
            mode: Mode::PureAdvection {
                horizontal: Arc::new(|v| v),
                vertical: Arc::new(|_| 0.0),
            },
            exact_f: None,
            exact_e: None,
            forcing: None,
            corrections: None,
            x_bc: Boundary::Periodic,
            v_bc: Boundary::ZeroInflow,
            vmax: 3.0,
        }
    }

    #[test]
    fn strang_free_streaming_equals_single_sweep() {
        // with no transverse speed the middle stage must be a bit-exact
        // identity, so the Strang step is exactly its two half x-sweeps
        let sc = free_streaming();
        let dt = 0.02;
        let mut state = SimulationState::new(sc.clone(), 128, 128, 5, false).unwrap();
        strang_step(&mut state, dt).unwrap();

        let mut halves = SimulationState::new(sc.clone(), 128, 128, 5, false).unwrap();
        a_step(&mut halves, 0.0, 0.5 * dt).unwrap();
        a_step(&mut halves, 0.5 * dt, dt).unwrap();
        assert_eq!(state.f.data, halves.f.data, "middle stage is not the identity");

        // the two half-sweeps agree with one full sweep up to the
        // re-projection between them, which refines away with the mesh
        let mut single = SimulationState::new(sc, 128, 128, 5, false).unwrap();
        a_step(&mut single, 0.0, dt).unwrap();
        let err: f64 = state
            .f
            .data
            .iter()
            .zip(&single.f.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "strang vs single sweep: {err}");
    }

    #[test]
    fn fourth_step_time_reversal() {
        let sc = free_streaming();
        let mut state = SimulationState::new(sc, 128, 128, 5, false).unwrap();
        let start = state.f.data.clone();
        let dt = 0.02;
        fourth_step(&mut state, dt).unwrap();
        fourth_step(&mut state, -dt).unwrap();
        let err: f64 = state
            .f
            .data
            .iter()
            .zip(&start)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "reversal residual {err}");
    }

    #[test]
    fn one_step_conserves_mass_two_stream() {
        let sc = scenario_by_name("two_stream").unwrap();
        for scheme in [SchemeKind::Sl2, SchemeKind::Sl4] {
            let mut state = SimulationState::new(sc.clone(), 32, 32, 5, true).unwrap();
            let m0 = state.f.mean_sum();
            let dt = 0.05;
            match scheme {
                SchemeKind::Sl2 => strang_step(&mut state, dt).unwrap(),
                SchemeKind::Sl4 => fourth_step(&mut state, dt).unwrap(),
            }
            let m1 = state.f.mean_sum();
            assert!(
                ((m1 - m0) / m0).abs() < 1e-12,
                "{:?} mass drift {}",
                scheme,
                (m1 - m0) / m0
            );
        }
    }

    #[test]
    fn zero_final_time_returns_projection() {
        let sc = scenario_by_name("weak_landau").unwrap();
        let result = run(&sc, 16, 16, 3, 2.0, 0.0, SchemeKind::Sl2, true, 0.0, |_, _| Ok(()))
            .unwrap();
        assert_eq!(result.diagnostics.len(), 1);
        assert_eq!(result.state.step, 0);
    }

    #[test]
    fn run_lands_exactly_on_t_final() {
        let sc = scenario_by_name("weak_landau").unwrap();
        let result = run(&sc, 16, 16, 3, 2.0, 0.37, SchemeKind::Sl2, true, 0.0, |_, _| Ok(()))
            .unwrap();
        assert!((result.state.t - 0.37).abs() < 1e-12);
    }

    #[test]
    fn rotation_coarse_run_returns_near_initial() {
        // one full turn on a coarse mesh: the error corridor is wide but
        // the bump must come back to where it started
        let sc = scenario_by_name("rotation").unwrap();
        let result = run(&sc, 20, 20, 5, 5.0, 1.0, SchemeKind::Sl4, true, 0.0, |_, _| Ok(()))
            .unwrap();
        let init = SimulationState::new(sc, 20, 20, 5, false).unwrap();
        let err = result.state.f.relative_l2_error(&init.f).unwrap();
        assert!(err < 0.1, "relative error after one turn: {err}");
    }

    #[test]
    fn forced_strang_field_solve_is_second_order() {
        // E^{n+1/2} from the half-step density must converge at second
        // order in dt toward the exact field at t + dt/2
        let sc = scenario_by_name("forced").unwrap();
        let exact_e = sc.exact_e.clone().unwrap();
        let mut errs = Vec::new();
        for &dt in &[0.1, 0.05, 0.025] {
            let mut state = SimulationState::new(sc.clone(), 64, 64, 5, false).unwrap();
            a_step(&mut state, 0.0, 0.5 * dt).unwrap();
            let (_, e) = solve_field(&state.f).unwrap();
            let exact = DGField1D::project(e.mesh, e.order, |x| exact_e(0.5 * dt, x)).unwrap();
            errs.push(e.relative_l2_error(&exact).unwrap());
        }
        let r1 = (errs[0] / errs[1]).log2();
        assert!(r1 > 1.6, "E half-step orders: {errs:?} ratio {r1}");
    }
}
