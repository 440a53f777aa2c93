use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use returnctrl::pde::*;
use returnctrl::Scalar;
use std::f64::consts::PI;

fn profile(grid: &SpaceTimeGrid, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..grid.nx).map(|j| f(grid.x(j))).collect()
}

fn rand_field<S: Scalar>(grid: &SpaceTimeGrid, rng: &mut Xoshiro256PlusPlus) -> Field<S> {
    let mut f = Field::zeros(grid);
    for v in f.data.iter_mut() {
        *v = S::from_parts(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    f
}

fn rand_vec<S: Scalar>(n: usize, rng: &mut Xoshiro256PlusPlus) -> Vec<S> {
    (0..n)
        .map(|_| S::from_parts(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn heat_error(nx: usize, nt: usize) -> f64 {
    let g = SpaceTimeGrid::new(0.0, 1.0, nx, 0.1, nt, 0.5).unwrap();
    let c = CoefficientSet::<f64>::zeros(&g);
    let u0 = profile(&g, |x| (PI * x).sin());
    let z = vec![0.0; nx];
    let s = solve_forward(&g, &c, (&u0, &z), &Field::zeros(&g), (0.0, 1.0)).unwrap();
    let decay = (-PI * PI * 0.1f64).exp();
    let exact = profile(&g, |x| decay * (PI * x).sin());
    let err: Vec<f64> = s.first.row(nt).iter().zip(&exact).map(|(a, b)| a - b).collect();
    l2(&err, g.dx())
}

#[test]
fn heat_mode_decays_at_second_order() {
    let e1 = heat_error(19, 10);
    let e2 = heat_error(39, 20);
    let e3 = heat_error(79, 40);
    let o1 = (e1 / e2).log2();
    let o2 = (e2 / e3).log2();
    assert!(o1 > 1.9 && o2 > 1.9, "orders {o1} {o2}");
}

#[test]
fn adjoint_heat_mode_decays_backward() {
    let mut errs = vec![];
    for k in 0..3 {
        let nx = 20 * (1 << k) - 1;
        let nt = 10 * (1 << k);
        let g = SpaceTimeGrid::new(0.0, 1.0, nx, 0.1, nt, 0.5).unwrap();
        let c = CoefficientSet::<f64>::zeros(&g);
        let phi = profile(&g, |x| (PI * x).sin());
        let z = vec![0.0; nx];
        let a = solve_adjoint(&g, &c, (&phi, &z), false).unwrap();
        let decay = (-PI * PI * 0.1f64).exp();
        let err: Vec<f64> = a
            .state
            .first
            .row(0)
            .iter()
            .zip(&phi)
            .map(|(p, e)| p - decay * e)
            .collect();
        errs.push(l2(&err, g.dx()));
        assert!(a.state.second.is_zero());
    }
    assert!((errs[0] / errs[1]).log2() > 1.9);
    assert!((errs[1] / errs[2]).log2() > 1.9);
}

/// ζ₁ = e^t sin πx, ζ₂ = cos t · sin 2πx with variable coefficients.
fn mms_error(nx: usize, nt: usize, theta: f64) -> f64 {
    let tf = 0.5;
    let g = SpaceTimeGrid::new(0.0, 1.0, nx, tf, nt, theta).unwrap();
    let a11 = |t: f64, x: f64| (x + t).sin();
    let a12 = |_t: f64, x: f64| 1.0 + x;
    let a21 = |t: f64, _x: f64| 2.0 + t;
    let a22 = |_t: f64, _x: f64| -1.0;
    let z1 = |t: f64, x: f64| t.exp() * (PI * x).sin();
    let z2 = |t: f64, x: f64| t.cos() * (2.0 * PI * x).sin();
    let coeffs = CoefficientSet {
        a11: Field::from_fn(&g, a11),
        a12: Field::from_fn(&g, a12),
        a21: Field::from_fn(&g, a21),
        a22: Field::from_fn(&g, a22),
        m_bar: 10.0,
        window: None,
    };
    let f1 = |t: f64, x: f64| {
        z1(t, x) + PI * PI * z1(t, x) - a11(t, x) * z1(t, x) - a12(t, x) * z2(t, x)
    };
    let f2 = |t: f64, x: f64| {
        -t.sin() * (2.0 * PI * x).sin() + 4.0 * PI * PI * z2(t, x)
            - a21(t, x) * z1(t, x)
            - a22(t, x) * z2(t, x)
    };
    let forcing = FieldPair {
        first: Field::from_fn(&g, f1),
        second: Field::from_fn(&g, f2),
    };
    let i1 = profile(&g, |x| z1(0.0, x));
    let i2 = profile(&g, |x| z2(0.0, x));
    let s = solve_forward_forced(&g, &coeffs, (&i1, &i2), &forcing).unwrap();
    let e1: Vec<f64> = (0..nx).map(|j| s.first.at(nt, j) - z1(tf, g.x(j))).collect();
    let e2: Vec<f64> = (0..nx).map(|j| s.second.at(nt, j) - z2(tf, g.x(j))).collect();
    l2(&e1, g.dx()).hypot(l2(&e2, g.dx()))
}

#[test]
fn manufactured_solution_converges() {
    let e: Vec<f64> = (0..3).map(|k| mms_error(20 << k, 20 << k, 0.5)).collect();
    for w in e.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 1.85, "Crank-Nicolson order {order}, errors {e:?}");
    }
    // implicit Euler: first order in time with dt ~ dx
    let e: Vec<f64> = (0..3).map(|k| mms_error(20 << k, 20 << k, 1.0)).collect();
    for w in e.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 0.9, "implicit Euler order {order}");
    }
}

fn duality_gap<S: Scalar>(nx: usize, nt: usize, theta: f64, conj: bool, seed: u64) -> f64 {
    let g = SpaceTimeGrid::new(0.0, 1.0, nx, 0.5, nt, theta).unwrap();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let coeffs = CoefficientSet {
        a11: rand_field(&g, &mut rng),
        a12: rand_field(&g, &mut rng),
        a21: rand_field(&g, &mut rng),
        a22: rand_field(&g, &mut rng),
        m_bar: 2.0,
        window: None,
    };
    let omega = (0.3, 0.7);
    let h = rand_field::<S>(&g, &mut rng);
    let z0 = rand_vec::<S>(nx, &mut rng);
    let z1 = rand_vec::<S>(nx, &mut rng);
    let p1 = rand_vec::<S>(nx, &mut rng);
    let p2 = rand_vec::<S>(nx, &mut rng);
    let zeta = solve_forward(&g, &coeffs, (&z0, &z1), &h, omega).unwrap();
    let adj = solve_adjoint(&g, &coeffs, (&p1, &p2), conj).unwrap();
    let pair = |a: &[S], b: &[S]| -> S {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| x * if conj { y.conj() } else { y })
            .sum::<S>()
            .scale(g.dx())
    };
    let lhs = pair(zeta.first.row(nt), &p1) + pair(zeta.second.row(nt), &p2);
    let mask = omega_mask(&g, omega);
    let mut rhs = pair(&z0, adj.state.first.row(0)) + pair(&z1, adj.state.second.row(0));
    for m in 0..=nt {
        let hm: Vec<S> = (0..nx).map(|j| if mask[j] { h.at(m, j) } else { S::zero() }).collect();
        rhs += pair(&hm, adj.kernel.first.row(m)).scale(g.dt());
    }
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
}

#[test]
fn discrete_duality_is_exact() {
    for &(nx, nt) in &[(12, 16), (50, 80)] {
        for seed in 0..5 {
            for theta in [0.5, 1.0] {
                let r = duality_gap::<f64>(nx, nt, theta, false, seed);
                assert!(r < 1e-12, "real gap {r:e} on ({nx},{nt}) theta {theta}");
                let c = duality_gap::<Complex64>(nx, nt, theta, true, seed);
                assert!(c < 1e-12, "hermitian gap {c:e}");
                let b = duality_gap::<Complex64>(nx, nt, theta, false, seed);
                assert!(b < 1e-12, "bilinear gap {b:e}");
            }
        }
    }
}

#[test]
fn implicit_scheme_preserves_sign() {
    let g = SpaceTimeGrid::new(0.0, 1.0, 30, 1.0, 50, 1.0).unwrap();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
    let mut c = CoefficientSet::<f64>::zeros(&g);
    c.a11 = Field::from_fn(&g, |t, x| 2.0 * (3.0 * x + t).sin());
    let u0: Vec<f64> = (0..30).map(|_| rng.random_range(0.0..1.0)).collect();
    let mut h = Field::zeros(&g);
    for v in h.data.iter_mut() {
        *v = rng.random_range(0.0..1.0);
    }
    let z = vec![0.0; 30];
    let s = solve_forward(&g, &c, (&u0, &z), &h, (0.1, 0.9)).unwrap();
    assert!(s.first.data.iter().all(|&v| v >= 0.0));
}

#[test]
fn rejects_mismatched_shapes() {
    let g = SpaceTimeGrid::new(0.0, 1.0, 8, 1.0, 4, 0.5).unwrap();
    let c = CoefficientSet::<f64>::zeros(&g);
    let short = vec![0.0; 5];
    let h = Field::zeros(&g);
    assert!(solve_forward(&g, &c, (&short, &short), &h, (0.2, 0.4)).is_err());
    let ok = vec![0.0; 8];
    assert!(solve_forward(&g, &c, (&ok, &ok), &h, (0.2, 1.4)).is_err());
}
