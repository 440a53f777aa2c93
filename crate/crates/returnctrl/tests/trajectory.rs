mod common;

use std::sync::Arc;

use returnctrl::nonlinear::Reaction;
use returnctrl::trajectory::*;
use returnctrl::Kind;

fn resolvable(kind: Kind) -> Arc<TrajectoryModel<f64>> {
    Arc::new(build_model::<f64>(&BumpConfig::resolvable(), kind).unwrap())
}

/// Worst plain centred-difference residual of `v_t − v_xx − u³ − Rv` at
/// fixed points, with physical steps `h` in x and `h/10` in t.
fn centred_defect(m: &TrajectoryModel<f64>, pts: &[(f64, f64)], h: f64) -> f64 {
    let ht = 0.1 * h;
    let v = |s: f64, d: f64| m.evaluate_local(s, d).1;
    pts.iter()
        .map(|&(s, d)| {
            let (u, v0) = m.evaluate_local(s, d);
            let vt = (v(s + ht, d) - v(s - ht, d)) / (2.0 * ht);
            let vxx = (v(s, d + h) - 2.0 * v0 + v(s, d - h)) / (h * h);
            (vt - vxx - u * u * u - m.config.reaction * v0).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn second_equation_holds_at_second_order_under_plain_differences() {
    // fixed points off the bump layer |z − 1/2| < δ/2, which is about ρλδ
    // wide and needs steps far below any desk grid
    let m = resolvable(Kind::Cubic);
    let rho = m.config.rho_radius;
    let mut pts = Vec::new();
    for a in 0..9 {
        let tau = -0.6 + 0.15 * a as f64;
        let lam = m.time.lambda(tau);
        for z in [0.1, 0.2, 0.3, 0.38, 0.62, 0.7, 0.8, 0.9] {
            pts.push((rho * rho * tau, rho * lam * z));
        }
    }
    let e: Vec<f64> = [2.5e-4, 1.25e-4, 6.25e-5].iter().map(|&h| centred_defect(&m, &pts, h)).collect();
    for w in e.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..=2.2).contains(&order), "defects {e:?}");
    }
    // the terms themselves are of size 1e3 to 1e4
    assert!(e[2] < 0.5, "{e:?}");
}

#[test]
fn verification_report_on_the_resolvable_trajectory() {
    let t = common::trajectory::<f64>(Kind::Cubic);
    let r = verify_trajectory(&*t, &Reaction::new(1.0, 3));
    assert!(r.support_ok);
    // h̄ is the nodal residual of the first equation by construction
    assert_eq!(r.u_defect_max, 0.0);
    assert!(r.center_identity_error <= 1e-10, "{:e}", r.center_identity_error);
    let ladder: Vec<f64> = r.refinement.iter().map(|row| row.max_defect).collect();
    assert!(ladder.windows(2).all(|w| w[1] < w[0]), "{ladder:?}");
    let last = r.refinement.last().unwrap().order.unwrap();
    assert!(last >= 2.0, "{last}");
    assert!(r.v_defect_relative <= 1e-3, "{:e}", r.v_defect_relative);
}

#[test]
fn fields_vanish_outside_their_boxes() {
    let t = common::trajectory::<f64>(Kind::Cubic);
    let g = t.grid;
    let (a, b) = t.omega;
    for n in 0..g.levels() {
        for j in 0..g.nx {
            let (tt, x) = (g.t(n), g.x(j));
            if !t.support.contains(tt, x) {
                assert_eq!(t.u_bar.at(n, j), 0.0);
                assert_eq!(t.v_bar.at(n, j), 0.0);
            }
            if !(x > a && x < b) {
                assert_eq!(t.h_bar.at(n, j), 0.0);
            }
        }
    }
    assert!(t.u_bar.sup_norm() > 0.0);
    assert_eq!(t.u_bar.row(g.nt), vec![0.0; g.nx].as_slice());
    assert_eq!(t.v_bar.row(g.nt), vec![0.0; g.nx].as_slice());
}

#[test]
fn profile_constraints_hold_for_both_kinds() {
    let r = profile_constraints(&resolvable(Kind::Cubic));
    assert!(r.passed(), "{r:?}");
    let c = build_model::<num_complex::Complex64>(&BumpConfig::resolvable(), Kind::QuadraticComplex).unwrap();
    let r = profile_constraints(&c);
    assert!(r.passed(), "{r:?}");
    assert!(r.sign_nodes > 1000);
}

#[test]
fn certified_default_passes_the_domination_checks() {
    let m = build_model::<f64>(&BumpConfig::default(), Kind::Cubic).unwrap();
    assert!(m.domination.band_ok && m.domination.off_band_ok && m.domination.center_ok);
    assert!(m.epsilon > 0.0 && m.epsilon < 1e-4, "{:e}", m.epsilon);
    assert!(profile_constraints(&m).passed());
}

#[test]
fn support_outside_the_horizon_is_a_geometry_error() {
    let cfg = BumpConfig { center_t: 0.45, ..BumpConfig::resolvable() };
    let m = Arc::new(build_model::<f64>(&cfg, Kind::Cubic).unwrap());
    let r = assemble_trajectory(m, &common::grid(), common::OMEGA, &Reaction::new(1.0, 3));
    assert!(matches!(r, Err(returnctrl::Error::Geometry(_))));
}
