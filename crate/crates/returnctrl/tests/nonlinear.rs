mod common;

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use returnctrl::hum::WINDOW_LEVEL;
use returnctrl::nonlinear::*;
use returnctrl::pde::*;
use returnctrl::trajectory::ReferenceTrajectory;
use returnctrl::{Error, Kind};

fn cubic() -> Arc<ReferenceTrajectory<f64>> {
    static T: OnceLock<Arc<ReferenceTrajectory<f64>>> = OnceLock::new();
    T.get_or_init(|| common::trajectory(Kind::Cubic)).clone()
}

fn complex() -> Arc<ReferenceTrajectory<Complex64>> {
    static T: OnceLock<Arc<ReferenceTrajectory<Complex64>>> = OnceLock::new();
    T.get_or_init(|| common::trajectory(Kind::QuadraticComplex)).clone()
}

#[test]
fn frozen_coefficients_at_the_reference() {
    let t = cubic();
    let w = default_window(&*t, WINDOW_LEVEL).unwrap();
    let z = FieldPair::zeros(&t.grid);
    let c = freeze_coefficients(&*t, &Reaction::new(1.0, 3), &z, w).unwrap();
    for (k, u) in t.u_bar.data.iter().enumerate() {
        assert!((c.a21.data[k] - 3.0 * u * u).abs() <= 1e-12 * (1.0 + u * u));
        assert!((c.a11.data[k] + 3.0 * u * u).abs() <= 1e-12 * (1.0 + u * u));
        assert_eq!(c.a12.data[k], 1.0);
        assert_eq!(c.a22.data[k], t.reaction);
    }
    assert!(c.m_bar >= c.sup_norm());
    assert!(c.window_lower_bound().unwrap() >= 1.0 / c.m_bar);
}

#[test]
fn product_coupling_freezes_to_the_reference() {
    let t = cubic();
    let w = default_window(&*t, WINDOW_LEVEL).unwrap();
    let mut z = FieldPair::zeros(&t.grid);
    z.second = z.second.map(|_| 0.1);
    let c = freeze_coefficients(&*t, &Product, &z, w).unwrap();
    for (k, u) in t.u_bar.data.iter().enumerate() {
        assert!((c.a12.data[k] - u).abs() <= 1e-12 * (1.0 + u.abs()));
    }
}

#[test]
fn coupling_quotient_with_a_large_iterate() {
    // z₁ = −3ū/2 gives (u³ − ū³)/z₁ = 3ū²/4
    let t = cubic();
    let w = default_window(&*t, WINDOW_LEVEL).unwrap();
    let mut z = FieldPair::zeros(&t.grid);
    z.first = t.u_bar.map(|u| -1.5 * u);
    let c = freeze_coefficients(&*t, &Reaction::new(1.0, 3), &z, w).unwrap();
    for (k, u) in t.u_bar.data.iter().enumerate() {
        assert!((c.a21.data[k] - 0.75 * u * u).abs() <= 1e-11 * (1.0 + u * u));
    }
}

#[test]
fn window_off_the_support_is_degenerate() {
    // for real data 3ū² + 3ūz₁ + z₁² > 0 unless ū = z₁ = 0, so only a window
    // where ū vanishes degenerates
    let t = cubic();
    let w = Window { t1: 0.01, t2: 0.05, x_lo: 0.3, x_hi: 0.4 };
    let mut z = FieldPair::zeros(&t.grid);
    z.first = t.u_bar.map(|u| -u);
    let r = freeze_coefficients(&*t, &Reaction::new(1.0, 3), &z, w);
    assert!(matches!(r, Err(Error::CouplingDegeneracy(_))));
}

#[test]
fn complex_window_indicator_is_twice_the_imaginary_part() {
    let t = complex();
    let f = window_indicator(&*t);
    for (k, u) in t.u_bar.data.iter().enumerate() {
        assert_eq!(f.data[k], (2.0 * u.im).abs());
    }
    assert_eq!(g21(Kind::QuadraticComplex, Complex64::new(1.0, 2.0), Complex64::new(0.5, 0.0)), Complex64::new(2.5, 4.0));
}

#[test]
fn zero_data_stays_on_the_reference() {
    let t = cubic();
    let z = vec![0.0; t.grid.nx];
    let p = NonlinearProblem::new(t.clone(), common::coupling(Kind::Cubic), z.clone(), z, 1e-3).unwrap();
    let o = run_picard(&p, &PicardConfig::default()).unwrap();
    assert!(o.converged);
    assert_eq!(o.history.len(), 1);
    assert_eq!(o.terminal_norm, 0.0);
    assert_eq!(o.u.data, t.u_bar.data);
    assert_eq!(o.h.data, t.h_bar.data);
}

#[test]
fn data_above_the_smallness_bound_is_rejected() {
    let t = cubic();
    let big = common::small_data::<f64>(&t.grid, 1e-2 * t.u_bar.sup_norm());
    let p = NonlinearProblem::new(t, common::coupling(Kind::Cubic), big.clone(), big, 1e-3);
    assert!(matches!(p, Err(Error::Precondition(_))));
}

#[test]
fn cubic_picard_drives_small_data_to_zero() {
    let t = cubic();
    let c = 4e-5 * t.u_bar.sup_norm();
    let d = common::small_data::<f64>(&t.grid, c);
    let p = NonlinearProblem::new(t, common::coupling(Kind::Cubic), d.clone(), d, 1e-3).unwrap();
    let o = run_picard(&p, &PicardConfig::default()).unwrap();
    assert!(o.converged, "history {:?}", o.history);
    assert!(o.terminal_norm <= 1e-6 * o.data_norm, "{:e} / {:e}", o.terminal_norm, o.data_norm);
    assert!(o.residual.passed, "{:?}", o.residual);
    // the control never leaves ω
    assert_eq!(o.residual.solution.control_outside, 0.0);
}

#[test]
fn complex_picard_drives_small_data_to_zero() {
    let t = complex();
    let c = 4e-5 * t.u_bar.sup_norm();
    let d = common::small_data::<Complex64>(&t.grid, c);
    let p = NonlinearProblem::new(t, common::coupling(Kind::QuadraticComplex), d.clone(), d, 1e-3).unwrap();
    let o = run_picard(&p, &PicardConfig::default()).unwrap();
    assert!(o.converged, "history {:?}", o.history);
    assert!(o.terminal_norm <= 1e-6 * o.data_norm, "{:e} / {:e}", o.terminal_norm, o.data_norm);
    assert!(o.residual.passed, "{:?}", o.residual);
}

#[test]
fn residual_of_the_reference_is_its_own_discretization_error() {
    let t = cubic();
    let g = Reaction::new(1.0, 3);
    let r = check_residual(&t.u_bar, &t.v_bar, &t.h_bar, &g, 3, t.reaction, t.omega);
    // h̄ is supported in ω
    assert_eq!(r.control_outside, 0.0);
    assert!(r.max().is_finite());
}

// obstruction

fn implicit_grid() -> SpaceTimeGrid {
    SpaceTimeGrid::new(0.0, 1.0, 50, 0.2, 100, 1.0).unwrap()
}

#[test]
fn quadratic_obstruction_holds_for_random_controls() {
    let g = implicit_grid();
    let u0: Vec<f64> = (0..g.nx).map(|j| 0.1 * (std::f64::consts::PI * g.x(j)).sin()).collect();
    let v0 = vec![0.0; g.nx];
    let r = demo_obstruction(&g, &Damping { c: 1.0, power: 2 }, 0.5, &u0, &v0, (0.3, 0.6), 32, 5.0, 1).unwrap();
    assert_eq!(r.gaps.len(), 32);
    assert!(r.min_gap >= 0.0, "gap {:e}", r.min_gap);
    assert!(r.min_v >= 0.0);
    assert_eq!(r.min_v_star, 0.0);
}

#[test]
fn obstruction_with_zero_state_and_no_reaction() {
    // u0 = 0, v0 > 0, R = 0: v* is the heat flow of v0 and every control
    // only adds u² ≥ 0
    let g = implicit_grid();
    let u0 = vec![0.0; g.nx];
    let v0: Vec<f64> = (0..g.nx).map(|j| g.x(j) * (1.0 - g.x(j))).collect();
    let r = demo_obstruction(&g, &Damping { c: 1.0, power: 2 }, 0.0, &u0, &v0, (0.3, 0.6), 8, 1.0, 2).unwrap();
    assert!(r.min_gap >= 0.0);
    assert!(r.gaps.iter().all(|g| *g >= 0.0));
    let none = demo_obstruction(&g, &Damping { c: 1.0, power: 2 }, 0.0, &u0, &v0, (0.3, 0.6), 1, 0.0, 2).unwrap();
    assert_eq!(none.min_gap, 0.0);
}

#[test]
fn obstruction_preconditions() {
    let z = vec![0.0; 50];
    let d = Damping { c: 1.0, power: 2 };
    let cn = SpaceTimeGrid::new(0.0, 1.0, 50, 0.2, 100, 0.5).unwrap();
    assert!(matches!(demo_obstruction(&cn, &d, 0.0, &z, &z, (0.3, 0.6), 1, 1.0, 0), Err(Error::Precondition(_))));
    let g = implicit_grid();
    let neg = vec![-1e-3; 50];
    assert!(matches!(demo_obstruction(&g, &d, 0.0, &z, &neg, (0.3, 0.6), 1, 1.0, 0), Err(Error::Precondition(_))));
    assert!(matches!(demo_obstruction(&g, &d, 1e4, &z, &z, (0.3, 0.6), 1, 1.0, 0), Err(Error::Precondition(_))));
}

fn sine(g: &SpaceTimeGrid, c: f64) -> Vec<f64> {
    (0..g.nx).map(|j| c * (std::f64::consts::PI * g.x(j)).sin()).collect()
}

#[test]
fn obstruction_with_sine_initial_datum() {
    let g = SpaceTimeGrid::new(0.0, 1.0, 100, 0.5, 200, 1.0).unwrap();
    let r = demo_obstruction(&g, &Damping { c: 1.0, power: 2 }, 0.5, &sine(&g, 0.1), &sine(&g, 1.0), (0.3, 0.6), 32, 5.0, 11)
        .unwrap();
    assert_eq!(r.gaps.len(), 32);
    assert!(r.min_gap >= -1e-10, "gap {:e}", r.min_gap);
    assert!(r.min_v > 0.0);
}

#[test]
fn uncontrolled_sine_datum_matches_the_free_flow() {
    // u0 = 0 and h = 0 keep u ≡ 0, so v is exactly the free solution
    let g = implicit_grid();
    let v0 = sine(&g, 1.0);
    let r = demo_obstruction(&g, &Damping { c: 1.0, power: 2 }, 0.0, &vec![0.0; g.nx], &v0, (0.3, 0.6), 1, 0.0, 5).unwrap();
    assert_eq!(r.min_gap, 0.0);
    // implicit Euler on the sine mode: v(T) = v0 / (1 + dt·λ)^N
    let v = free_v(&g, 0.0, &v0);
    let lam = 4.0 / (g.dx() * g.dx()) * (std::f64::consts::PI * g.dx() / 2.0).sin().powi(2);
    let factor = (1.0 + g.dt() * lam).powi(-(g.nt as i32));
    for j in 0..g.nx {
        assert!((v[j] - factor * v0[j]).abs() <= 1e-12, "node {j}");
    }
}
