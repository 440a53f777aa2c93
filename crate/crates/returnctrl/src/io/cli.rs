//! Command-line front end. Each command writes `summary.json` (deterministic
//! for a fixed config and seed), `metadata.json` (timings, thread count),
//! the effective `config.toml`, data files and gnuplot scripts into the
//! output directory.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use super::config::{Command, ObservedCoefficients, RunConfig};
use super::fields::{
    write_field_binary, write_field_csv, write_grid_dat, write_json, write_profile_csv, write_table_csv, write_text,
};
use super::plot;
use crate::error::{Error, Result};
use crate::hum::{estimate_observability, log_slope, penalty_schedule, ControlSolver, SweepRow};
use crate::nonlinear::{
    default_window, demo_obstruction, free_v, freeze_coefficients, run_picard, Coupling, Damping, NonlinearProblem,
    Reaction,
};
use crate::pde::{CoefficientSet, Field, FieldPair, SpaceTimeGrid};
use crate::scalar::Scalar;
use crate::trajectory::{
    assemble_trajectory, build_model, profile_constraints, verify_trajectory, ReferenceTrajectory, TrajectoryModel,
};
use crate::Kind;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "RETURNCTRL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "returnctrl", version, about = "Return-method null control workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    /// TOML run configuration
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// output directory (default: out/<command>)
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// penalty of every control solve in the run
    #[arg(long = "penalty-epsilon", global = true, value_name = "F64", allow_hyphen_values = true)]
    pub penalty_epsilon: Option<f64>,
    /// weight strength of every control solve in the run
    #[arg(long, global = true, value_name = "F64", allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// grid size as NX,NT
    #[arg(long, global = true, value_name = "NX,NT", value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// cubic or quadratic-complex
    #[arg(long, global = true)]
    pub kind: Option<Kind>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CliCommand {
    /// Build and certify the reference trajectory
    BuildTrajectory,
    /// Penalized weighted control of the linearized system, with a penalty sweep
    SolveControl,
    /// Picard iteration driving small data to zero
    RunNonlinear,
    /// Random controls against the quadratic obstruction
    DemoObstruction,
    /// Empirical observability ratios
    Observability,
}

impl From<CliCommand> for Command {
    fn from(c: CliCommand) -> Self {
        match c {
            CliCommand::BuildTrajectory => Command::BuildTrajectory,
            CliCommand::SolveControl => Command::SolveControl,
            CliCommand::RunNonlinear => Command::RunNonlinear,
            CliCommand::DemoObstruction => Command::DemoObstruction,
            CliCommand::Observability => Command::Observability,
        }
    }
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected NX,NT, got {s:?}"))?;
    let nx = a.trim().parse().map_err(|_| format!("bad NX {a:?}"))?;
    let nt = b.trim().parse().map_err(|_| format!("bad NT {b:?}"))?;
    Ok((nx, nt))
}

/// Config file (or defaults) with the flags applied.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cmd: Command = cli.command.into();
    if let Some(c) = cfg.command {
        if c != cmd {
            return Err(Error::Config(format!(
                "config is for {}, command line asks for {}",
                c.name(),
                cmd.name()
            )));
        }
    }
    cfg.command = Some(cmd);
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(e) = cli.penalty_epsilon {
        cfg.control.penalty_epsilon = e;
        cfg.picard.control.penalty_epsilon = e;
    }
    if let Some(s) = cli.s {
        cfg.control.s = s;
        cfg.picard.control.s = s;
    }
    if let Some((nx, nt)) = cli.grid {
        cfg.grid.nx = nx;
        cfg.grid.nt = nt;
        cfg.obstruction.nx = nx;
        cfg.obstruction.nt = nt;
    }
    if let Some(k) = cli.kind {
        cfg.kind = k;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    if cfg.out.is_none() {
        cfg.out = Some(PathBuf::from("out").join(cmd.name()));
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Installs the global thread pool, capped by `RETURNCTRL_THREADS`.
pub fn configure_threads() -> Result<usize> {
    let cap = match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
            if n == 0 {
                return Err(Error::Config(format!("{THREADS_ENV} must be at least 1")));
            }
            Some(n)
        }
        Err(_) => None,
    };
    if let Some(n) = cap {
        let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.min(avail).max(1)).build_global();
    }
    Ok(rayon::current_num_threads())
}

/// Parses the arguments, runs the command and returns the exit code. Errors
/// are printed to stderr as JSON and written to `error.json`.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    let cfg = match configure_threads().and_then(|_| resolve_config(cli)) {
        Ok(c) => c,
        Err(e) => return report_error(&e, cli.out.as_deref()),
    };
    let out = cfg.out.clone().expect("resolved");
    match execute(&cfg) {
        Ok(summary) => {
            println!("{}", serde_json::to_string(&summary["result"]["headline"]).unwrap_or_default());
            0
        }
        Err(e) => report_error(&e, Some(&out)),
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({
        "error": {
            "kind": e.kind(),
            "exit_code": e.exit_code(),
            "message": e.to_string(),
        }
    })
}

fn report_error(e: &Error, out: Option<&Path>) -> i32 {
    let v = error_json(e);
    eprintln!("{v}");
    if let Some(dir) = out {
        let _ = write_json(&dir.join("error.json"), &v);
    }
    e.exit_code()
}

/// Runs the configured command; returns the summary that was written.
pub fn execute(cfg: &RunConfig) -> Result<Value> {
    let cmd = cfg.command.ok_or_else(|| Error::Config("no command given".into()))?;
    let out = cfg.out.clone().ok_or_else(|| Error::Config("no output directory".into()))?;
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    let _ = std::fs::remove_file(out.join("error.json"));
    write_text(&out.join("config.toml"), &cfg.to_toml()?)?;
    let start = Instant::now();
    let complex = cfg.kind.is_complex();
    let result = match cmd {
        Command::BuildTrajectory if complex => build_trajectory::<Complex64>(cfg, &out),
        Command::BuildTrajectory => build_trajectory::<f64>(cfg, &out),
        Command::SolveControl if complex => solve_control::<Complex64>(cfg, &out),
        Command::SolveControl => solve_control::<f64>(cfg, &out),
        Command::RunNonlinear if complex => run_nonlinear::<Complex64>(cfg, &out),
        Command::RunNonlinear => run_nonlinear::<f64>(cfg, &out),
        Command::DemoObstruction => obstruction(cfg, &out),
        Command::Observability if complex => observability::<Complex64>(cfg, &out),
        Command::Observability => observability::<f64>(cfg, &out),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let meta = json!({
        "command": cmd.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp_unix": std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        "elapsed_seconds": elapsed,
        "threads": rayon::current_num_threads(),
        "status": match &result { Ok(_) => "ok".to_string(), Err(e) => e.kind().to_string() },
    });
    write_json(&out.join("metadata.json"), &meta)?;
    let (result, deferred) = result?;
    // the echo leaves out the output directory so equal runs give equal files
    let mut echo = cfg.clone();
    echo.out = None;
    let summary = json!({
        "command": cmd.name(),
        "config": to_value(&echo)?,
        "result": result,
    });
    write_json(&out.join("summary.json"), &summary)?;
    match deferred {
        Some(e) => Err(e),
        None => Ok(summary),
    }
}

/// Command result plus an error to raise after the outputs are written.
type Outcome = (Value, Option<Error>);

/// `c·(sin πx, ·)` with an imaginary `c/2·sin 2πx` in the complex case.
pub fn sine_data<S: Scalar>(grid: &SpaceTimeGrid, c: f64) -> Vec<S> {
    (0..grid.nx)
        .map(|j| {
            let x = grid.x(j);
            let im = if S::COMPLEX { 0.5 * c * (2.0 * PI * x).sin() } else { 0.0 };
            S::from_parts(c * (PI * x).sin(), im)
        })
        .collect()
}

fn write_fields<S: Scalar>(cfg: &RunConfig, dir: &Path, fields: &[(&str, &Field<S>)]) -> Result<()> {
    for (name, f) in fields {
        if cfg.output.binary {
            write_field_binary(&dir.join("fields"), name, f)?;
        }
        if cfg.output.csv {
            write_field_csv(&dir.join("fields").join(format!("{name}.csv")), f)?;
        }
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Serialization(e.to_string()))
}

fn coupling<S: Scalar>(cfg: &RunConfig) -> Arc<dyn Coupling<S>> {
    Arc::new(Reaction::new(cfg.coupling_c, cfg.kind.power() as u32))
}

fn model<S: Scalar>(cfg: &RunConfig, cmd: Command) -> Result<Arc<TrajectoryModel<S>>> {
    let bump = cfg.bump(cmd);
    Ok(Arc::new(build_model::<S>(&bump, cfg.kind)?))
}

/// Trajectory on the configured grid, for the solver commands.
fn trajectory<S: Scalar>(cfg: &RunConfig, cmd: Command) -> Result<Arc<ReferenceTrajectory<S>>> {
    let m = model::<S>(cfg, cmd)?;
    let grid = cfg.grid.grid()?;
    let omega = (cfg.omega[0], cfg.omega[1]);
    Ok(Arc::new(assemble_trajectory(m, &grid, omega, &*coupling::<S>(cfg))?))
}

fn build_trajectory<S: Scalar>(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let m = model::<S>(cfg, Command::BuildTrajectory)?;
    let base = cfg.grid.grid()?;
    let (_, ex) = m.active_extent();
    let cx = m.config.center_x;
    // a support thinner than a few cells is sampled on a grid zoomed onto it
    let zoomed = ex < 4.0 * base.dx();
    let (grid, omega) = if zoomed {
        let (lo, hi) = (cx - 1.25 * ex, cx + 1.25 * ex);
        (SpaceTimeGrid::new(lo, hi, base.nx, base.t_final, base.nt, base.theta)?, (lo, hi))
    } else {
        (base, (cfg.omega[0], cfg.omega[1]))
    };
    let g = coupling::<S>(cfg);
    let traj = assemble_trajectory(m.clone(), &grid, omega, &*g)?;
    let report = verify_trajectory(&traj, &*g);
    let profiles = profile_constraints(&m);

    if cfg.output.csv {
        for p in m.sample_profiles() {
            write_profile_csv(&out.join("profiles").join(format!("{}.csv", p.name)), &p)?;
        }
    }
    write_fields(cfg, out, &[("u_bar", &traj.u_bar), ("v_bar", &traj.v_bar), ("h_bar", &traj.h_bar)])?;
    write_json(
        &out.join("residual_report.json"),
        &json!({ "trajectory": to_value(&report)?, "profiles": to_value(&profiles)?, "support_box": to_value(&traj.support)? }),
    )?;
    if cfg.output.plots {
        let n = 161;
        let ts: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / n as f64).collect();
        let rs: Vec<f64> = (0..n).map(|i| m.epsilon * (-1.1 + 2.2 * i as f64 / (n - 1) as f64)).collect();
        write_grid_dat(&out.join("kernel_sign.dat"), &ts, &rs, |i, k| {
            let kv = m.reference_point(ts[i], rs[k]).1.re();
            if kv > 0.0 {
                1.0
            } else if kv < 0.0 {
                -1.0
            } else {
                0.0
            }
        })?;
        write_text(&out.join("support.gp"), &plot::support_script("kernel_sign.dat", S::COMPLEX))?;
    }
    let headline = json!({
        "kind": cfg.kind,
        "epsilon": m.epsilon,
        "certified": report.certified,
        "v_defect_max": report.v_defect_max,
        "v_defect_relative": report.v_defect_relative,
        "observed_order": report.observed_order,
        "support_ok": report.support_ok,
        "profiles_ok": profiles.passed(),
    });
    Ok((
        json!({
            "headline": headline,
            "zoomed_grid": zoomed,
            "grid": to_value(&grid)?,
            "omega": [omega.0, omega.1],
            "support_box": to_value(&traj.support)?,
            "active_half_widths": [m.active_extent().0, m.active_extent().1],
            "domination": to_value(&m.domination)?,
            "profiles": to_value(&profiles)?,
            "trajectory": to_value(&report)?,
            "max_u_bar": traj.u_bar.sup_norm(),
            "max_v_bar": traj.v_bar.sup_norm(),
            "max_h_bar": traj.h_bar.sup_norm(),
        }),
        None,
    ))
}

fn solve_control<S: Scalar>(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let traj = trajectory::<S>(cfg, Command::SolveControl)?;
    let grid = traj.grid;
    let window = default_window(&*traj, cfg.picard.window_level)?;
    let g = coupling::<S>(cfg);
    let coeffs = freeze_coefficients(&*traj, &*g, &FieldPair::zeros(&grid), window)?;
    let weights = cfg.control.weights(&grid, window)?;
    let alpha = sine_data::<S>(&grid, cfg.data.control_amplitude);
    let mut solver = ControlSolver::new(&grid, &coeffs, (&alpha, &alpha), &weights, &cfg.control)?;
    let res = solver.solve(cfg.control.penalty_epsilon)?;
    let data_norm = FieldPair { first: res.zeta.first.clone(), second: res.zeta.second.clone() }.level_norm(0);

    let mut sweep_json = Value::Null;
    if cfg.sweep.enabled {
        let eps = penalty_schedule(cfg.sweep.penalty_hi, cfg.sweep.penalty_lo, cfg.sweep.per_decade);
        let rows: Vec<SweepRow> = solver.sweep(&eps)?.iter().map(SweepRow::from).collect();
        let terminal: Vec<f64> = rows.iter().map(|r| r.terminal_norm).collect();
        let weighted: Vec<f64> = rows.iter().map(|r| r.weighted_norm).collect();
        let slope = if terminal.iter().all(|v| *v > 0.0) {
            Some(log_slope(&eps, &terminal))
        } else {
            None
        };
        let monotone = terminal.windows(2).all(|w| w[1] <= w[0]);
        let wmax = weighted.iter().cloned().fold(0.0, f64::max);
        let wmin = weighted.iter().cloned().fold(f64::INFINITY, f64::min);
        let table: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.penalty_epsilon,
                    r.terminal_norm,
                    r.weighted_norm,
                    r.sup_norm,
                    r.target_norm,
                    r.cg_iterations as f64,
                    r.cg_residual,
                ]
            })
            .collect();
        write_table_csv(
            &out.join("sweep.csv"),
            &["penalty_epsilon", "terminal_norm", "weighted_norm", "sup_norm", "target_norm", "cg_iterations", "cg_residual"],
            &table,
        )?;
        if cfg.output.plots {
            write_text(&out.join("sweep.gp"), &plot::sweep_script("sweep.csv"))?;
        }
        sweep_json = json!({
            "rows": to_value(&rows)?,
            "slope": slope,
            "terminal_nonincreasing": monotone,
            "weighted_norm_spread": if wmin > 0.0 { wmax / wmin } else { f64::NAN },
        });
    }
    write_fields(cfg, out, &[("h", &res.h), ("zeta_u", &res.zeta.first), ("zeta_v", &res.zeta.second)])?;
    let headline = json!({
        "kind": cfg.kind,
        "penalty_epsilon": res.penalty_epsilon,
        "terminal_norm": res.terminal_norm,
        "data_norm": data_norm,
        "weighted_norm": res.weighted_norm,
        "h_is_zero": res.h.is_zero(),
        "slope": sweep_json.get("slope").cloned().unwrap_or(Value::Null),
    });
    Ok((
        json!({
            "headline": headline,
            "window": to_value(&window)?,
            "weights": to_value(&weights.summary)?,
            "m_bar": coeffs.m_bar,
            "lambda_max": res.lambda_max,
            "solve": to_value(&SweepRow::from(&res))?,
            "cg_history": res.cg_history,
            "sweep": sweep_json,
        }),
        None,
    ))
}

fn run_nonlinear<S: Scalar>(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let traj = trajectory::<S>(cfg, Command::RunNonlinear)?;
    let grid = traj.grid;
    let c = cfg.data.nonlinear_fraction * traj.u_bar.sup_norm();
    let d = sine_data::<S>(&grid, c);
    let problem = NonlinearProblem::new(traj.clone(), coupling::<S>(cfg), d.clone(), d, cfg.picard.delta_fraction)?;
    let o = run_picard(&problem, &cfg.picard)?;
    let table: Vec<Vec<f64>> = o
        .history
        .iter()
        .map(|r| {
            vec![
                r.k as f64,
                r.update_norm,
                r.sup_norm,
                r.terminal_norm,
                r.m_bar,
                r.cg_iterations as f64,
                r.cg_residual,
            ]
        })
        .collect();
    write_table_csv(
        &out.join("history.csv"),
        &["k", "update_norm", "sup_norm", "terminal_norm", "m_bar", "cg_iterations", "cg_residual"],
        &table,
    )?;
    if cfg.output.plots {
        write_text(&out.join("history.gp"), &plot::history_script("history.csv"))?;
    }
    write_fields(cfg, out, &[("u", &o.u), ("v", &o.v), ("h", &o.h)])?;
    let updates: Vec<f64> = o.history.iter().map(|r| r.update_norm).collect();
    // decay after the second iterate
    let geometric = updates.len() < 3 || updates[1..].windows(2).all(|w| w[1] < w[0]);
    let ratio = if o.data_norm > 0.0 { o.terminal_norm / o.data_norm } else { 0.0 };
    let headline = json!({
        "kind": cfg.kind,
        "converged": o.converged,
        "iterations": o.history.len(),
        "terminal_norm": o.terminal_norm,
        "data_norm": o.data_norm,
        "terminal_ratio": ratio,
        "geometric_decay": geometric,
        "residual_passed": o.residual.passed,
    });
    let result = json!({
        "headline": headline,
        "data_amplitude": c,
        "delta": problem.delta,
        "window": to_value(&o.window)?,
        "history": to_value(&o.history)?,
        "residual": to_value(&o.residual)?,
        "control_sup_norm": o.control.sup_norm,
        "control_weighted_norm": o.control.weighted_norm,
    });
    let deferred = (!o.converged).then(|| Error::NotConverged {
        iterations: o.history.len(),
        last_update: o.history.last().map_or(f64::NAN, |r| r.update_norm),
    });
    Ok((result, deferred))
}

fn obstruction(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let o = &cfg.obstruction;
    let grid = SpaceTimeGrid::new(0.0, 1.0, o.nx, o.t_final, o.nt, 1.0)?;
    let u0: Vec<f64> = sine_data(&grid, o.u0_amplitude);
    let v0: Vec<f64> = sine_data(&grid, 1.0);
    let g = Damping { c: o.c, power: 2 };
    let r = demo_obstruction(&grid, &g, o.reaction, &u0, &v0, (o.omega[0], o.omega[1]), o.n_controls, o.amplitude, cfg.seed)?;
    let v_star = free_v(&grid, o.reaction, &v0);
    let rows: Vec<Vec<f64>> = r.gaps.iter().enumerate().map(|(i, g)| vec![i as f64, *g]).collect();
    write_table_csv(&out.join("gaps.csv"), &["control", "min_gap"], &rows)?;
    let prof: Vec<Vec<f64>> = (0..grid.nx).map(|j| vec![grid.x(j), v_star[j]]).collect();
    write_table_csv(&out.join("v_star.csv"), &["x", "v_star_T"], &prof)?;
    if cfg.output.plots {
        write_text(&out.join("obstruction.gp"), &plot::obstruction_script("gaps.csv"))?;
    }
    let headline = json!({
        "n_controls": r.n_controls,
        "min_gap": r.min_gap,
        "min_v": r.min_v,
        "order_holds": r.min_gap >= -1e-10,
        "positive": r.min_v > 0.0,
    });
    Ok((
        json!({ "headline": headline, "coupling": Coupling::<f64>::name(&g), "report": to_value(&r)? }),
        None,
    ))
}

fn observability<S: Scalar>(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let ob = &cfg.observability;
    let (grid, coeffs, omega0) = match ob.coefficients {
        ObservedCoefficients::Trajectory => {
            let traj = trajectory::<S>(cfg, Command::Observability)?;
            let w = default_window(&*traj, cfg.picard.window_level)?;
            let g = coupling::<S>(cfg);
            let c = freeze_coefficients(&*traj, &*g, &FieldPair::zeros(&traj.grid), w)?;
            (traj.grid, c, w.omega0())
        }
        other => {
            let grid = cfg.grid.grid()?;
            let a21 = if other == ObservedCoefficients::Constant { S::one() } else { S::zero() };
            let z = S::zero();
            (grid, CoefficientSet::constant(&grid, [[z, z], [a21, z]]), (cfg.omega[0], cfg.omega[1]))
        }
    };
    let omega0 = ob.omega0.map_or(omega0, |o| (o[0], o[1]));
    let small = estimate_observability(&grid, &coeffs, omega0, ob.compare_samples, cfg.seed)?;
    let big = estimate_observability(&grid, &coeffs, omega0, ob.n_samples, cfg.seed)?;
    let change = if big.max.is_finite() && small.max > 0.0 {
        (big.max / small.max - 1.0).abs()
    } else {
        f64::INFINITY
    };
    let rows: Vec<Vec<f64>> = big.ratios.iter().enumerate().map(|(i, r)| vec![i as f64, *r]).collect();
    write_table_csv(&out.join("ratios.csv"), &["sample", "ratio"], &rows)?;
    if cfg.output.plots {
        write_text(&out.join("ratios.gp"), &plot::ratios_script("ratios.csv"))?;
    }
    let headline = json!({
        "coefficients": ob.coefficients,
        "max_ratio": big.max,
        "max_ratio_compare": small.max,
        "relative_change": change,
        "stable": change <= 0.1,
        "diverged": big.diverged,
    });
    Ok((
        json!({ "headline": headline, "omega0": [omega0.0, omega0.1], "report": to_value(&big)?, "compare": to_value(&small)? }),
        None,
    ))
}
