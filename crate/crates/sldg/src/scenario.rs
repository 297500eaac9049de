//! Benchmark problem catalog and run configuration.
//!
//! Each scenario bundles the phase-space domain, the initial
//! distribution, the advection mode (self-consistent field, prescribed
//! rotation, or self-consistent field with external forcing), and any
//! exact data available for error measurement.

use crate::advect1d::Boundary;
use crate::error::{Error, Result};
use crate::moments::FieldCorrections;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

/// Scalar function of (x, v).
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Scalar function of (t, x, v).
pub type Fn3 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
/// Scalar function of one coordinate.
pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// How the transport speeds are obtained.
#[derive(Clone)]
pub enum Mode {
    /// Kinetic transport at speed v in x; field solve supplies the
    /// acceleration in v.
    VlasovPoisson,
    /// Prescribed divergence-free velocity field: `horizontal(y)` moves
    /// rows, `vertical(x)` moves columns. No field solve.
    PureAdvection { horizontal: Fn1, vertical: Fn1 },
    /// As [`Mode::VlasovPoisson`] plus an external forcing integrated
    /// exactly along the x-transport characteristics.
    ForcedVlasovPoisson,
}

/// External forcing of the kinetic equation.
#[derive(Clone)]
pub struct Forcing {
    /// Pointwise forcing psi(t, x, v).
    pub psi: Fn3,
    /// Exact integral of psi along an arriving characteristic:
    /// given the arrival point (x, v) at time t1 and the departure time
    /// t0, returns `int_{t0}^{t1} psi(s, x + v (s - t1), v) ds`.
    pub along_characteristic: Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>,
}

/// A benchmark problem: domain, initial data, transport mode, and
/// whatever exact information the problem admits.
#[derive(Clone)]
pub struct Scenario {
    pub name: &'static str,
    /// (x_lo, x_hi, v_lo, v_hi).
    pub domain: (f64, f64, f64, f64),
    /// Initial distribution f(0, x, v).
    pub initial: Fn2,
    pub mode: Mode,
    /// Exact distribution f(t, x, v) when known.
    pub exact_f: Option<Fn3>,
    /// Exact field E(t, x) when known.
    pub exact_e: Option<Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>>,
    /// External forcing (forced mode only).
    pub forcing: Option<Forcing>,
    /// Corrections to the field time derivatives induced by the forcing.
    pub corrections: Option<Arc<dyn FieldCorrections + Send + Sync>>,
    pub x_bc: Boundary,
    pub v_bc: Boundary,
    /// Bound on the x-direction transport speed, used for step sizing.
    pub vmax: f64,
}

impl Scenario {
    /// Forced scenarios must carry the full exact-data bundle.
    pub fn validate(&self) -> Result<()> {
        if matches!(self.mode, Mode::ForcedVlasovPoisson)
            && (self.forcing.is_none()
                || self.corrections.is_none()
                || self.exact_f.is_none()
                || self.exact_e.is_none())
        {
            return Err(Error::Config(format!(
                "scenario '{}' is forced but lacks exact data",
                self.name
            )));
        }
        Ok(())
    }
}

fn rotation_scenario() -> Scenario {
    let x0 = 0.4;
    let y0 = 0.5;
    Scenario {
        name: "rotation",
        domain: (0.0, 1.0, 0.0, 1.0),
        initial: Arc::new(move |x, y| {
            let r = ((x - x0).powi(2) + (y - y0).powi(2)).sqrt();
            if r <= 0.3 {
                (5.0 * PI / 3.0 * r).cos().powi(6)
            } else {
                0.0
            }
        }),
        mode: Mode::PureAdvection {
            horizontal: Arc::new(|y| PI * (2.0 * y - 1.0)),
            vertical: Arc::new(|x| PI * (1.0 - 2.0 * x)),
        },
        // One full turn per unit time: q(1, ., .) = q(0, ., .).
        exact_f: Some(Arc::new(move |_t, x, y| {
            let r = ((x - x0).powi(2) + (y - y0).powi(2)).sqrt();
            if r <= 0.3 {
                (5.0 * PI / 3.0 * r).cos().powi(6)
            } else {
                0.0
            }
        })),
        exact_e: None,
        forcing: None,
        corrections: None,
        x_bc: Boundary::ZeroInflow,
        v_bc: Boundary::ZeroInflow,
        vmax: PI,
    }
}

/// Velocity profile of the forced problem.
fn forced_gaussian(v: f64) -> f64 {
    (-0.25 * (4.0 * v - 1.0).powi(2)).exp()
}

/// Exact time integral of the forcing along an arriving characteristic:
/// `int_{t0}^{t1} psi(s, x + v (s - t1), v) ds` in closed form. The
/// phase of the forcing along the characteristic is a*s + b with
/// a = 2v - 2*pi and b = 2x - 2v*t1, so the integrand is
/// A sin(a s + b) + B sin(a s + b) cos(a s + b) and both terms
/// integrate to products of sines.
pub fn forced_source_integral(x: f64, v: f64, t0: f64, t1: f64) -> f64 {
    let sp = PI.sqrt();
    let g = forced_gaussian(v);
    let ca = 0.5 * g * (2.0 * sp + 1.0) * (4.0 * v - 2.0 * sp);
    let cb = -0.5 * g * sp * (4.0 * v - 1.0);
    let a = 2.0 * v - 2.0 * PI;
    let b = 2.0 * x - 2.0 * v * t1;
    let mid = 0.5 * a * (t0 + t1) + b;
    if a.abs() < 1e-8 {
        // sinc limit of both closed forms as the phase speed vanishes
        ca * (t1 - t0) * mid.sin() + 0.5 * cb * (t1 - t0) * (2.0 * mid).sin()
    } else {
        let term1 = (2.0 * ca / a) * mid.sin() * (0.5 * a * (t1 - t0)).sin();
        let term2 = (cb / (2.0 * a)) * (2.0 * mid).sin() * (a * (t1 - t0)).sin();
        term1 + term2
    }
}

/// Field-derivative corrections induced by the forced problem's source.
pub struct ForcedCorrections;

impl FieldCorrections for ForcedCorrections {
    fn c1(&self, x: f64, t: f64) -> f64 {
        let sp = PI.sqrt();
        0.25 * sp + 0.125 * sp * (4.0 * PI - 1.0) * (2.0 * x - 2.0 * PI * t).cos()
    }
    fn c2(&self, x: f64, t: f64) -> f64 {
        let sp = PI.sqrt();
        (3.0 * sp + 4.0 * PI - 16.0 * PI * PI * sp) / 16.0 * (-2.0 * x + 2.0 * PI * t).sin()
            + PI / 16.0 * (4.0 * x - 4.0 * PI * t).sin()
    }
    fn c3(&self, x: f64, t: f64) -> f64 {
        let sp = PI.sqrt();
        -0.25 * PI
            + (7.0 * sp + 16.0 * PI - 64.0 * PI.powi(3) * sp) / 32.0
                * (2.0 * x - 2.0 * PI * t).cos()
            - 3.0 * PI / 16.0 * (4.0 * x - 4.0 * PI * t).cos()
    }
}

fn forced_scenario() -> Scenario {
    Scenario {
        name: "forced",
        domain: (-PI, PI, -PI, PI),
        initial: Arc::new(|x, v| (2.0 - (2.0 * x).cos()) * forced_gaussian(v)),
        mode: Mode::ForcedVlasovPoisson,
        exact_f: Some(Arc::new(|t, x, v| {
            (2.0 - (2.0 * x - 2.0 * PI * t).cos()) * forced_gaussian(v)
        })),
        exact_e: Some(Arc::new(|t, x| {
            -0.25 * PI.sqrt() * (2.0 * x - 2.0 * PI * t).sin()
        })),
        forcing: Some(Forcing {
            psi: Arc::new(|t, x, v| {
                let sp = PI.sqrt();
                let theta = 2.0 * x - 2.0 * PI * t;
                0.5 * theta.sin()
                    * forced_gaussian(v)
                    * ((2.0 * sp + 1.0) * (4.0 * v - 2.0 * sp)
                        - sp * (4.0 * v - 1.0) * theta.cos())
            }),
            along_characteristic: Arc::new(forced_source_integral),
        }),
        corrections: Some(Arc::new(ForcedCorrections)),
        x_bc: Boundary::Periodic,
        v_bc: Boundary::Periodic,
        // max |v| on the velocity domain [-pi, pi]
        vmax: PI,
    }
}

fn two_stream_scenario() -> Scenario {
    Scenario {
        name: "two_stream",
        domain: (-2.0 * PI, 2.0 * PI, -2.0 * PI, 2.0 * PI),
        initial: Arc::new(|x, v| {
            v * v / (8.0 * PI).sqrt() * (2.0 - (0.5 * x).cos()) * (-0.5 * v * v).exp()
        }),
        mode: Mode::VlasovPoisson,
        exact_f: None,
        exact_e: None,
        forcing: None,
        corrections: None,
        // the distribution's tail at |v| = 2 pi is ~1e-8; wrapping the
        // donor indices keeps every sweep exactly conservative
        x_bc: Boundary::Periodic,
        v_bc: Boundary::Periodic,
        vmax: 2.0 * PI,
    }
}

fn landau_scenario(name: &'static str, alpha: f64) -> Scenario {
    let k = 0.5;
    Scenario {
        name,
        domain: (-2.0 * PI, 2.0 * PI, -2.0 * PI, 2.0 * PI),
        initial: Arc::new(move |x, v| {
            (1.0 + alpha * (k * x).cos()) / (2.0 * PI).sqrt() * (-0.5 * v * v).exp()
        }),
        mode: Mode::VlasovPoisson,
        exact_f: None,
        exact_e: None,
        forcing: None,
        corrections: None,
        x_bc: Boundary::Periodic,
        v_bc: Boundary::Periodic,
        vmax: 2.0 * PI,
    }
}

/// The five benchmark problems.
pub fn builtin_scenarios() -> Vec<Scenario> {
    vec![
        rotation_scenario(),
        forced_scenario(),
        two_stream_scenario(),
        landau_scenario("weak_landau", 0.01),
        landau_scenario("strong_landau", 0.5),
    ]
}

/// Look a scenario up by name.
pub fn scenario_by_name(name: &str) -> Result<Scenario> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

/// Time integrator selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// Second-order Strang splitting.
    Sl2,
    /// Fourth-order seven-stage splitting.
    Sl4,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Sl2 => "sl2",
            SchemeKind::Sl4 => "sl4",
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sl2" => Ok(SchemeKind::Sl2),
            "sl4" => Ok(SchemeKind::Sl4),
            other => Err(Error::Config(format!("unknown scheme '{other}' (want sl2 or sl4)"))),
        }
    }
}

/// One complete run description, read from a flat key=value file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub mx: usize,
    pub mv: usize,
    pub order: usize,
    pub cfl: f64,
    pub t_final: f64,
    pub scheme: SchemeKind,
    pub limiter: bool,
    /// Override for the x-direction speed bound; 0 keeps the scenario default.
    pub vmax: f64,
    /// Times at which full-field snapshots are written.
    pub snapshots: Vec<f64>,
    /// Output directory for CSV files.
    pub output: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: "weak_landau".to_string(),
            mx: 64,
            mv: 128,
            order: 5,
            cfl: 2.0,
            t_final: 60.0,
            scheme: SchemeKind::Sl4,
            limiter: true,
            vmax: 0.0,
            snapshots: Vec::new(),
            output: "out".to_string(),
        }
    }
}

impl RunConfig {
    /// Parse `key = value` lines; `#` starts a comment. Unknown keys are
    /// rejected with their line number.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Config(format!("line {}: {}", lineno + 1, msg));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "scenario" => cfg.scenario = value.to_string(),
                "mx" => cfg.mx = value.parse().map_err(|e| err(format!("mx: {e}")))?,
                "mv" => cfg.mv = value.parse().map_err(|e| err(format!("mv: {e}")))?,
                "order" => cfg.order = value.parse().map_err(|e| err(format!("order: {e}")))?,
                "cfl" => cfg.cfl = value.parse().map_err(|e| err(format!("cfl: {e}")))?,
                "t_final" => {
                    cfg.t_final = value.parse().map_err(|e| err(format!("t_final: {e}")))?
                }
                "scheme" => cfg.scheme = value.parse()?,
                "limiter" => {
                    cfg.limiter = match value {
                        "on" => true,
                        "off" => false,
                        other => return Err(err(format!("limiter: '{other}' (want on/off)"))),
                    }
                }
                "vmax" => cfg.vmax = value.parse().map_err(|e| err(format!("vmax: {e}")))?,
                "snapshots" => {
                    cfg.snapshots = value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|e| err(format!("snapshots: {e}")))?
                }
                "output" => cfg.output = value.to_string(),
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Inverse of [`parse`](Self::parse): `parse(serialize(c)) == c`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario = {}", self.scenario);
        let _ = writeln!(s, "mx = {}", self.mx);
        let _ = writeln!(s, "mv = {}", self.mv);
        let _ = writeln!(s, "order = {}", self.order);
        let _ = writeln!(s, "cfl = {:.16e}", self.cfl);
        let _ = writeln!(s, "t_final = {:.16e}", self.t_final);
        let _ = writeln!(s, "scheme = {}", self.scheme.as_str());
        let _ = writeln!(s, "limiter = {}", if self.limiter { "on" } else { "off" });
        let _ = writeln!(s, "vmax = {:.16e}", self.vmax);
        let snaps: Vec<String> = self.snapshots.iter().map(|t| format!("{t:.16e}")).collect();
        let _ = writeln!(s, "snapshots = {}", snaps.join(","));
        let _ = writeln!(s, "output = {}", self.output);
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.mx == 0 || self.mv == 0 {
            return Err(Error::Config("mesh sizes must be positive".into()));
        }
        if !(1..=crate::basis::MAX_ORDER).contains(&self.order) {
            return Err(Error::Config(format!("order {} out of range", self.order)));
        }
        if !(self.cfl > 0.0) {
            return Err(Error::Config("cfl must be positive".into()));
        }
        if !(self.t_final >= 0.0) {
            return Err(Error::Config("t_final must be nonnegative".into()));
        }
        Ok(())
    }
}
