//! Acceptance report: one PASS/FAIL line per criterion, with the measured
//! quantities and the wall time against its budget.
//!
//! The process exits 0 whatever the verdicts so that the workspace test run
//! stays usable while a criterion is known to be out of reach; set
//! `ACCEPTANCE_STRICT=1` to exit 1 on any FAIL.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use returnctrl::hum::{ControlSolver, HumConfig};
use returnctrl::io::config::{ObservedCoefficients, RunConfig};
use returnctrl::io::{execute, Command};
use returnctrl::nonlinear::Reaction;
use returnctrl::pde::*;
use returnctrl::trajectory::*;
use returnctrl::{Kind, Scalar};
use serde_json::Value;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn run(id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        verdict(false, format!("panicked: {msg}"))
    });
    let took = start.elapsed();
    let in_time = took <= budget;
    let pass = v.pass && in_time;
    println!(
        "{} {id} {name}: {}; {:.1} s of {} s{}",
        if pass { "PASS" } else { "FAIL" },
        v.detail,
        took.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { " (over budget)" }
    );
    pass
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// Certified model sampled on a grid zoomed onto its support, as the CLI does.
fn certified<S: Scalar>(kind: Kind) -> (Arc<TrajectoryModel<S>>, TrajectoryReport) {
    let m = Arc::new(build_model::<S>(&BumpConfig::default(), kind).unwrap());
    let (_, ex) = m.active_extent();
    let cx = m.config.center_x;
    let (lo, hi) = (cx - 1.25 * ex, cx + 1.25 * ex);
    let grid = SpaceTimeGrid::new(lo, hi, 200, 0.5, 400, 0.5).unwrap();
    let g = Reaction::new(1.0, kind.power() as u32);
    let t = assemble_trajectory(m.clone(), &grid, (lo, hi), &g).unwrap();
    let r = verify_trajectory(&t, &g);
    (m, r)
}

fn trajectory_verdict(r: &TrajectoryReport) -> Verdict {
    let pass = r.v_defect_max <= 1e-6 && r.observed_order >= 2.0 && r.support_ok;
    verdict(
        pass,
        format!(
            "eps {:.3e}, max defect {:.3e} (need <= 1e-6; relative to term scale {:.3e}: {:.3e}), order {:.2}, support inside box {}",
            r.epsilon, r.v_defect_max, r.term_scale, r.v_defect_relative, r.observed_order, r.support_ok
        ),
    )
}

fn rand_field<S: Scalar>(g: &SpaceTimeGrid, rng: &mut Xoshiro256PlusPlus) -> Field<S> {
    let mut f = Field::zeros(g);
    for v in f.data.iter_mut() {
        *v = S::from_parts(rng.random_range(-1.0..1.0), if S::COMPLEX { rng.random_range(-1.0..1.0) } else { 0.0 });
    }
    f
}

fn rand_vec(n: usize, rng: &mut Xoshiro256PlusPlus) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// `⟨ζ(T), φ_T⟩ = ∫∫ 1_ω h φ₁` for zero initial data.
fn duality_gap(nx: usize, nt: usize, seed: u64) -> f64 {
    let g = SpaceTimeGrid::new(0.0, 1.0, nx, 0.5, nt, 0.5).unwrap();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let c = CoefficientSet {
        a11: rand_field(&g, &mut rng),
        a12: rand_field(&g, &mut rng),
        a21: rand_field(&g, &mut rng),
        a22: rand_field(&g, &mut rng),
        m_bar: 2.0,
        window: None,
    };
    let omega = (0.3, 0.7);
    let h: Field<f64> = rand_field(&g, &mut rng);
    let (p1, p2) = (rand_vec(nx, &mut rng), rand_vec(nx, &mut rng));
    let z = vec![0.0; nx];
    let zeta = solve_forward(&g, &c, (&z, &z), &h, omega).unwrap();
    let adj = solve_adjoint(&g, &c, (&p1, &p2), false).unwrap();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * g.dx();
    let lhs = dot(zeta.first.row(nt), &p1) + dot(zeta.second.row(nt), &p2);
    let mask = omega_mask(&g, omega);
    let mut rhs = 0.0;
    for m in 0..=nt {
        let hm: Vec<f64> = (0..nx).map(|j| if mask[j] { h.at(m, j) } else { 0.0 }).collect();
        rhs += dot(&hm, adj.kernel.first.row(m)) * g.dt();
    }
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
}

const WINDOW: Window = Window { t1: 0.1, t2: 0.4, x_lo: 0.25, x_hi: 0.75 };

fn small_solver() -> (ControlSolver<f64>, HumConfig) {
    let g = SpaceTimeGrid::new(0.0, 1.0, 12, 0.5, 16, 0.5).unwrap();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(41);
    let mut c = CoefficientSet::<f64>::zeros(&g);
    for k in 0..c.a11.data.len() {
        c.a11.data[k] = rng.random_range(-1.0..1.0);
        c.a12.data[k] = rng.random_range(-1.0..1.0);
        c.a22.data[k] = rng.random_range(-1.0..1.0);
        c.a21.data[k] = 1.0 + 0.2 * rng.random_range(-1.0..1.0);
    }
    c.m_bar = 3.0;
    c.window = Some(WINDOW);
    let cfg = HumConfig { s: 0.1, penalty_epsilon: 1e-4, ..Default::default() };
    let w = cfg.weights(&g, WINDOW).unwrap();
    let a: Vec<f64> = (0..g.nx).map(|j| (PI * g.x(j)).sin()).collect();
    let b: Vec<f64> = (0..g.nx).map(|j| 0.5 * (2.0 * PI * g.x(j)).sin()).collect();
    (ControlSolver::new(&g, &c, (&a, &b), &w, &cfg).unwrap(), cfg)
}

fn command(cmd: Command, edit: impl FnOnce(&mut RunConfig)) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig { command: Some(cmd), out: Some(dir.path().to_path_buf()), ..Default::default() };
    cfg.output.csv = false;
    cfg.output.binary = false;
    edit(&mut cfg);
    cfg.validate().unwrap();
    let s = execute(&cfg).unwrap_or_else(|e| panic!("{} failed: {e}", cmd.name()));
    s["result"].clone()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn picard_verdict(r: &Value) -> Verdict {
    let h = &r["headline"];
    let iters = h["iterations"].as_u64().unwrap_or(u64::MAX);
    let pass = h["converged"] == true
        && iters <= 15
        && h["geometric_decay"] == true
        && f(&h["terminal_ratio"]) <= 1e-6
        && h["residual_passed"] == true;
    verdict(
        pass,
        format!(
            "{} iterations, geometric decay {}, terminal/data {:.3e} (need <= 1e-6), residual check {} (excess {:.3e} of bound {:.3e})",
            iters,
            h["geometric_decay"],
            f(&h["terminal_ratio"]),
            h["residual_passed"],
            f(&r["residual"]["excess"]),
            f(&r["residual"]["excess_bound"])
        ),
    )
}

fn main() {
    let mut results = Vec::new();
    let mut cubic_model = None;

    results.push(run(1, "trajectory certificate (cubic)", secs(30), || {
        let (m, r) = certified::<f64>(Kind::Cubic);
        cubic_model = Some(m);
        trajectory_verdict(&r)
    }));

    results.push(run(2, "profile constraints", secs(5), || {
        // the model itself is built (and timed) in criterion 1
        let m = cubic_model.take().unwrap_or_else(|| Arc::new(build_model(&BumpConfig::default(), Kind::Cubic).unwrap()));
        let p = profile_constraints(&m);
        verdict(
            p.passed(),
            format!(
                "moment {:.2e}, normalization {:.2e}, sign at {} nodes {}, g0 identities {:.2e} {:.2e} {:.2e}",
                p.moment_residual,
                p.normalization_error,
                p.sign_nodes,
                p.sign_ok,
                p.g0_core_error,
                p.g0_core_slope_error,
                p.g0_edge_error
            ),
        )
    }));

    results.push(run(3, "adjoint exactness", secs(10), || {
        let mut worst = Vec::new();
        for (nx, nt) in [(12, 16), (50, 80), (200, 400)] {
            let w = (0..20).map(|s| duality_gap(nx, nt, 1000 + s)).fold(0.0, f64::max);
            worst.push((nx, nt, w));
        }
        let pass = worst.iter().all(|w| w.2 <= 1e-12);
        let d: Vec<String> = worst.iter().map(|(a, b, w)| format!("({a},{b}) {w:.2e}")).collect();
        verdict(pass, format!("worst relative gap over 20 pairs: {}", d.join(", ")))
    }));

    results.push(run(4, "dual solver correctness", secs(10), || {
        let (mut s, cfg) = small_solver();
        let b = s.target().to_vec();
        let eps = cfg.penalty_epsilon;
        let op = s.operator();
        let cols = op.dense();
        let n = cols.len();
        let a = DMatrix::from_fn(n, n, |i, k| cols[k][i] + if i == k { eps } else { 0.0 });
        let exact = a.lu().solve(&DVector::from_iterator(n, b.iter().map(|v| -v))).unwrap();
        let cg = op.solve(&b, eps, 1e-13, 500).unwrap();
        let diff = (0..n).map(|k| (cg.phi[k] - exact[k]).abs()).fold(0.0, f64::max);
        let rel = diff / exact.amax();

        let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
        let phi = rand_vec(n, &mut rng);
        let ge = 1e-3;
        let grad = op.gradient(&phi, &b, ge);
        let gn = op.norm(&grad);
        let h = 1e-5;
        let mut worst = 0.0f64;
        for k in 0..n {
            let (mut p, mut m) = (phi.clone(), phi.clone());
            p[k] += h;
            m[k] -= h;
            let fd = (op.objective(&p, &b, ge) - op.objective(&m, &b, ge)) / (2.0 * h);
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            worst = worst.max((fd - op.dot(&grad, &e)).abs() / gn);
        }
        verdict(
            rel <= 1e-8 && worst <= 1e-6,
            format!("CG vs dense {rel:.2e} (need <= 1e-8), gradient vs central differences {worst:.2e} (need <= 1e-6)"),
        )
    }));

    results.push(run(5, "penalty law", secs(300), || {
        let r = command(Command::SolveControl, |_| {});
        let s = &r["sweep"];
        let slope = f(&s["slope"]);
        let spread = f(&s["weighted_norm_spread"]);
        let mono = s["terminal_nonincreasing"] == true;
        let pass = mono && (0.4..=0.6).contains(&slope) && spread <= 1.1;
        verdict(
            pass,
            format!(
                "terminal norm nonincreasing {mono}, slope {slope:.3} (need 0.4 to 0.6), weighted norm max/min {spread:.2} (need <= 1.10)"
            ),
        )
    }));

    results.push(run(6, "nonlinear null control (cubic)", secs(600), || {
        picard_verdict(&command(Command::RunNonlinear, |_| {}))
    }));

    results.push(run(7, "obstruction", secs(60), || {
        let r = command(Command::DemoObstruction, |_| {});
        let h = &r["headline"];
        let (gap, minv) = (f(&h["min_gap"]), f(&h["min_v"]));
        verdict(
            gap >= -1e-10 && minv > 0.0 && h["n_controls"] == 32,
            format!("32 controls, min node-wise v(T) - v*(T) {gap:.3e} (need >= -1e-10), min v(T) {minv:.3e}"),
        )
    }));

    results.push(run(8, "complex variant", secs(600), || {
        let (_, t) = certified::<Complex64>(Kind::QuadraticComplex);
        let tv = trajectory_verdict(&t);
        let pv = picard_verdict(&command(Command::RunNonlinear, |c| c.kind = Kind::QuadraticComplex));
        verdict(tv.pass && pv.pass, format!("trajectory: {}; Picard: {}", tv.detail, pv.detail))
    }));

    results.push(run(9, "observability sanity", secs(120), || {
        let r = command(Command::Observability, |_| {});
        let h = &r["headline"];
        let (max, change) = (f(&h["max_ratio"]), f(&h["relative_change"]));
        let d = command(Command::Observability, |c| c.observability.coefficients = ObservedCoefficients::Decoupled);
        let diverged = d["headline"]["diverged"] == true;
        verdict(
            max.is_finite() && change <= 0.1 && diverged,
            format!(
                "max ratio {max:.4e} at 128 samples, {:.4e} at 64, change {change:.3} (need <= 0.10); decoupled reported divergent {diverged}",
                f(&h["max_ratio_compare"])
            ),
        )
    }));

    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed} of {} criteria pass", results.len());
    if std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") && passed < results.len() {
        std::process::exit(1);
    }
}
