//! Command-line front end: run a configured simulation, run a mesh
//! refinement study, or print the stability report. Thread count is
//! controlled by the RAYON_NUM_THREADS environment variable.

use clap::{Parser, Subcommand};
use sldg::advect1d::{
    lax_wendroff_bound, semi_lagrangian_bound, sup_spectral_radius, StabilityVariant,
};
use sldg::error::Result;
use sldg::output::{
    decay_rate_from_peaks, write_diagnostics_csv, write_efield_norm_csv, write_snapshot_csv,
};
use sldg::scenario::{scenario_by_name, RunConfig};
use sldg::splitting::{convergence_study, run};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "sldg",
    about = "Positivity-preserving semi-Lagrangian DG solver for the 1+1 Vlasov-Poisson system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a key=value config file and write
    /// diagnostics.csv, efield_norm.csv, and any requested snapshots.
    Run {
        /// Path to the config file.
        config: PathBuf,
    },
    /// Mesh refinement study: run the config's scenario on a list of
    /// n x n meshes and print errors with log2 ratios.
    Converge {
        /// Path to the config file (t_final, scheme, cfl, order, limiter apply).
        config: PathBuf,
        /// Comma-separated mesh sizes, e.g. 10,20,40,80.
        #[arg(long, value_delimiter = ',')]
        meshes: Vec<usize>,
    },
    /// Sweep the fractional shift and print measured sup spectral radii
    /// of the two piecewise-linear update variants against their
    /// closed-form bounds.
    Stability,
}

fn cmd_run(config_path: &PathBuf) -> Result<i32> {
    let text = std::fs::read_to_string(config_path)?;
    let cfg = RunConfig::parse(&text)?;
    let scenario = scenario_by_name(&cfg.scenario)?;
    let outdir = PathBuf::from(&cfg.output);
    std::fs::create_dir_all(&outdir)?;

    let mut pending: Vec<f64> = cfg.snapshots.clone();
    pending.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let snapdir = outdir.clone();
    let result = run(
        &scenario,
        cfg.mx,
        cfg.mv,
        cfg.order,
        cfg.cfl,
        cfg.t_final,
        cfg.scheme,
        cfg.limiter,
        cfg.vmax,
        |rec, state| {
            while let Some(&t_snap) = pending.first() {
                if rec.t + 1e-12 < t_snap {
                    break;
                }
                let name = format!("snapshot_t{:.6}.csv", t_snap);
                write_snapshot_csv(&snapdir.join(name), &state.f)?;
                pending.remove(0);
            }
            Ok(())
        },
    )?;

    write_diagnostics_csv(&outdir.join("diagnostics.csv"), &result.diagnostics)?;
    write_efield_norm_csv(&outdir.join("efield_norm.csv"), &result.diagnostics)?;

    let last = result.diagnostics.last().expect("at least the initial record");
    println!(
        "{}: {} steps to t = {:.6}; mass {:.6e}, energy {:.6e}, min f {:.3e}",
        cfg.scenario, result.state.step, result.state.t, last.mass, last.energy, last.min_value
    );
    if result.state.limiter_report.cells_limited > 0 {
        println!(
            "limiter: {} cell rescalings, min theta {:.3e}",
            result.state.limiter_report.cells_limited, result.state.limiter_report.min_theta
        );
    }
    if cfg.scenario.contains("landau") {
        if let Some(g1) = decay_rate_from_peaks(&result.diagnostics, 0.0, 30.0, 6) {
            println!("field-norm decay rate (peaks in [0, 30]): {g1:.4}");
        }
        if let Some(g2) = decay_rate_from_peaks(&result.diagnostics, 20.0, 40.0, usize::MAX) {
            println!("field-norm trend (peaks in [20, 40]): {g2:.4}");
        }
    }
    println!("wrote {}", outdir.display());
    Ok(0)
}

fn cmd_converge(config_path: &PathBuf, meshes: &[usize]) -> Result<i32> {
    let text = std::fs::read_to_string(config_path)?;
    let cfg = RunConfig::parse(&text)?;
    let scenario = scenario_by_name(&cfg.scenario)?;
    let rows = convergence_study(
        &scenario, meshes, cfg.order, cfg.cfl, cfg.t_final, cfg.scheme, cfg.limiter,
    )?;
    println!("mesh,error,log2_ratio");
    let mut prev: Option<f64> = None;
    for (n, err) in rows {
        match prev {
            Some(p) => println!("{n},{err:.16e},{:.2}", (p / err).log2()),
            None => println!("{n},{err:.16e},"),
        }
        prev = Some(err);
    }
    Ok(0)
}

fn cmd_stability() -> Result<i32> {
    println!("nu,measured_sl,bound_sl,measured_lxw,bound_lxw");
    for i in 0..=20 {
        let nu = i as f64 / 20.0;
        let sl = sup_spectral_radius(StabilityVariant::SemiLagrangian, nu)?;
        let lw = sup_spectral_radius(StabilityVariant::LaxWendroff, nu)?;
        println!(
            "{:.2},{:.10},{:.10},{:.10},{:.10}",
            nu,
            sl,
            semi_lagrangian_bound(nu),
            lw,
            lax_wendroff_bound(nu)
        );
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let status = match &cli.command {
        Command::Run { config } => cmd_run(config),
        Command::Converge { config, meshes } => cmd_converge(config, meshes),
        Command::Stability => cmd_stability(),
    };
    match status {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
