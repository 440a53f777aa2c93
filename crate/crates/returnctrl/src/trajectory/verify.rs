//! Finite-difference certificate of `v̄_t − Δv̄ − ū^p − Rv̄ = 0`.
//!
//! Derivatives of `v̄` are taken with sixth-order central differences whose
//! steps follow the local length scales (`ρλ(τ)` in space, `ρ²(1−τ²)²` in
//! time), on a sample of the support and on the grid nodes inside it.

use rayon::prelude::*;
use serde::Serialize;

use super::assemble::{nodal_residual, DominationReport, ReferenceTrajectory, TrajectoryModel};
use crate::nonlinear::coupling::pow;
use crate::nonlinear::Coupling;
use crate::scalar::Scalar;
use crate::Kind;

const D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
const D2: [f64; 7] = [
    1.0 / 90.0,
    -3.0 / 20.0,
    3.0 / 2.0,
    -49.0 / 18.0,
    3.0 / 2.0,
    -3.0 / 20.0,
    1.0 / 90.0,
];

/// Relative steps of the refinement ladder.
pub const STEPS: [f64; 4] = [0.004, 0.002, 0.001, 0.0005];

#[derive(Debug, Clone, Serialize)]
pub struct RefinementRow {
    pub step: f64,
    pub max_defect: f64,
    pub rms_defect: f64,
    /// `log₂` of the ratio to the previous row
    pub order: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessRow {
    pub region: String,
    /// largest second difference of `K` at the coarse and halved spacing
    pub coarse: f64,
    pub fine: f64,
    pub bounded: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryReport {
    pub kind: Kind,
    pub epsilon: f64,
    pub certified: bool,
    pub sample_points: usize,
    /// finest-level defect of the `v̄` equation
    pub v_defect_max: f64,
    pub v_defect_rms: f64,
    /// `max |v̄_t|, |Δv̄|, |ū^p|` over the sample, the scale of the terms
    pub term_scale: f64,
    pub v_defect_relative: f64,
    /// order between the first two refinement levels
    pub observed_order: f64,
    pub refinement: Vec<RefinementRow>,
    /// nodal `ū` equation residual minus `h̄`
    pub u_defect_max: f64,
    pub u_defect_rms: f64,
    pub support_ok: bool,
    /// relative error of `(ΔV − V_t)(t, 0) = −2Nλ⁻²f₀ + 2t(1−t²)⁻²f₀`
    pub center_identity_error: f64,
    pub smoothness: Vec<SmoothnessRow>,
    pub domination: DominationReport,
}

/// Sample of `(τ, z)` reference coordinates covering the support.
fn reference_sample(nt: usize, nz: usize) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(nt * nz);
    for k in 1..nt {
        let tau = -1.0 + 2.0 * k as f64 / nt as f64;
        for j in 0..nz {
            pts.push((tau, j as f64 / nz as f64));
        }
    }
    pts
}

pub struct Defect {
    pub value: f64,
    pub scale: f64,
}

/// Defect at the offset `(s, d)` from the center with relative step `sigma`.
pub fn defect_at<S: Scalar>(m: &TrajectoryModel<S>, s: f64, d: f64, sigma: f64) -> Defect {
    let c = &m.config;
    let rho = c.rho_radius;
    let tau = s / (rho * rho);
    let q = (1.0 - tau * tau).max(0.0);
    let lam = m.time.lambda(tau).max(1e-300);
    let hx = sigma * rho * lam;
    let ht = sigma * rho * rho * q * q * 0.5;
    if hx == 0.0 || ht == 0.0 {
        return Defect { value: 0.0, scale: 0.0 };
    }
    let vb = |ss: f64, dd: f64| m.evaluate_local(ss, dd).1;
    let mut vt = S::zero();
    let mut vxx = S::zero();
    let mut vx = S::zero();
    for k in 0..7 {
        let o = k as f64 - 3.0;
        vt += vb(s + o * ht, d).scale(D1[k] / ht);
        let w = vb(s, d + o * hx);
        vxx += w.scale(D2[k] / (hx * hx));
        vx += w.scale(D1[k] / hx);
    }
    let r = d.abs();
    let n = c.dim as f64;
    let lap = if c.dim == 1 {
        vxx
    } else if r < 4.0 * hx {
        vxx.scale(n)
    } else {
        let sign = if d >= 0.0 { 1.0 } else { -1.0 };
        vxx + vx.scale(sign * (n - 1.0) / r)
    };
    let (u, v) = m.evaluate_local(s, d);
    let up = pow(u, m.power() as u32);
    let e = vt - lap - up - v.scale(c.reaction);
    Defect {
        value: e.abs(),
        scale: vt.abs().max(lap.abs()).max(up.abs()),
    }
}

/// Builds the residual report for an assembled trajectory.
pub fn verify_trajectory<S: Scalar>(
    traj: &ReferenceTrajectory<S>,
    g: &dyn Coupling<S>,
) -> TrajectoryReport {
    let m = traj.model.as_ref();
    let grid = traj.grid;
    let c = &m.config;
    let rho = c.rho_radius;
    let (ext_t, ext_x) = m.active_extent();
    let mut points: Vec<(f64, f64)> = reference_sample(64, 96)
        .into_iter()
        .map(|(tau, z)| (rho * rho * tau, rho * m.time.lambda(tau) * z))
        .collect();
    for n in 0..grid.levels() {
        let s = grid.t(n) - c.center_t;
        if s.abs() >= ext_t {
            continue;
        }
        for j in 0..grid.nx {
            let d = grid.x(j) - c.center_x;
            if d.abs() < ext_x {
                points.push((s, d));
            }
        }
    }

    let mut refinement: Vec<RefinementRow> = Vec::new();
    let mut term_scale = 0.0f64;
    for &sigma in STEPS.iter() {
        let d: Vec<Defect> = points
            .par_iter()
            .map(|&(s, d)| defect_at(m, s, d, sigma))
            .collect();
        let max = d.iter().map(|e| e.value).fold(0.0, f64::max);
        let rms = (d.iter().map(|e| e.value * e.value).sum::<f64>() / d.len() as f64).sqrt();
        term_scale = term_scale.max(d.iter().map(|e| e.scale).fold(0.0, f64::max));
        let order = refinement
            .last()
            .map(|p| (p.max_defect / max).log2());
        refinement.push(RefinementRow {
            step: sigma,
            max_defect: max,
            rms_defect: rms,
            order,
        });
    }
    let last = refinement.last().expect("nonempty ladder");

    let h = nodal_residual(&traj.u_bar, &traj.v_bar, g);
    let du: Vec<f64> = h
        .data
        .iter()
        .zip(&traj.h_bar.data)
        .map(|(&a, &b)| (a - b).abs())
        .collect();
    let u_defect_max = du.iter().cloned().fold(0.0, f64::max);
    let u_defect_rms = (du.iter().map(|e| e * e).sum::<f64>() / du.len() as f64).sqrt();

    let mut support_ok = true;
    for n in 0..grid.levels() {
        for j in 0..grid.nx {
            if !traj.support.contains(grid.t(n), grid.x(j))
                && (traj.u_bar.at(n, j) != S::zero()
                    || traj.v_bar.at(n, j) != S::zero()
                    || traj.h_bar.at(n, j) != S::zero())
            {
                support_ok = false;
            }
        }
    }

    TrajectoryReport {
        kind: m.kind,
        epsilon: m.epsilon,
        certified: m.domination.passed(),
        sample_points: points.len(),
        v_defect_max: last.max_defect,
        v_defect_rms: last.rms_defect,
        term_scale,
        v_defect_relative: if term_scale > 0.0 {
            last.max_defect / term_scale
        } else {
            0.0
        },
        observed_order: refinement.get(1).and_then(|r| r.order).unwrap_or(f64::NAN),
        refinement,
        u_defect_max,
        u_defect_rms,
        support_ok,
        center_identity_error: center_identity_error(m),
        smoothness: smoothness_proxy(m),
        domination: m.domination.clone(),
    }
}

/// Checks `(ΔV − V_t)(t, 0)` in reference coordinates against the closed form.
pub fn center_identity_error<S: Scalar>(m: &TrajectoryModel<S>) -> f64 {
    let n = m.config.dim as f64;
    let mut worst = 0.0f64;
    for k in 1..16 {
        let t = -0.9 + 1.8 * k as f64 / 16.0;
        let lam = m.time.lambda(t);
        let f0 = m.time.f0(t);
        let q = 1.0 - t * t;
        let expected = -2.0 * n * f0 / (lam * lam) + 2.0 * t * f0 / (q * q);
        let hr = 0.01 * lam;
        let ht = 0.01 * q * q;
        let v = |tt: f64, r: f64| m.reference_point(tt, r).0;
        let mut vt = S::zero();
        let mut vrr = S::zero();
        for j in 0..7 {
            let o = j as f64 - 3.0;
            vt += v(t + o * ht, 0.0).scale(D1[j] / ht);
            vrr += v(t, o * hr).scale(D2[j] / (hr * hr));
        }
        // radial Laplacian at the origin is N·V_rr
        let got = vrr.scale(n) - vt;
        worst = worst.max((got - S::from_f64(expected)).abs() / expected.abs());
    }
    worst
}

/// Second differences of `K` near the delicate places, at spacing `h` and
/// `h/2`; bounded growth is the numerical stand-in for smoothness.
pub fn smoothness_proxy<S: Scalar>(m: &TrajectoryModel<S>) -> Vec<SmoothnessRow> {
    let k = |t: f64, z: f64| m.reference_point(t, z * m.time.lambda(t)).1;
    let second_z = |t: f64, z: f64, h: f64| {
        (k(t, z + h) - k(t, z).scale(2.0) + k(t, (z - h).abs())).abs() / (h * h)
    };
    let second_t = |t: f64, z: f64, h: f64| {
        (k(t + h, z) - k(t, z).scale(2.0) + k(t - h, z)).abs() / (h * h)
    };
    // (label, sample points, expect bounded)
    #[allow(clippy::type_complexity)]
    let regions: [(&str, Vec<(f64, f64)>, bool); 4] = [
        (
            "z = 1/2",
            (0..=20)
                .flat_map(|i| {
                    let z = 0.49 + 0.001 * i as f64;
                    [(-0.5, z), (0.0, z), (0.5, z)]
                })
                .collect(),
            false,
        ),
        ("z = 0", (0..=20).map(|i| (0.2, 0.001 * i as f64)).collect(), false),
        ("z = 1", (0..=20).map(|i| (0.2, 0.97 + 0.0014 * i as f64)).collect(), false),
        (
            "t = ±1",
            (0..=20)
                .flat_map(|i| {
                    let t = 0.95 + 0.002 * i as f64;
                    [(t, 0.3), (-t, 0.3)]
                })
                .collect(),
            true,
        ),
    ];
    regions
        .into_iter()
        .map(|(name, pts, in_time)| {
            let h = 2e-3;
            let eval = |h: f64| {
                pts.iter()
                    .map(|&(t, z)| {
                        if in_time {
                            second_t(t, z, h)
                        } else {
                            second_z(t, z, h)
                        }
                    })
                    .fold(0.0, f64::max)
            };
            let coarse = eval(h);
            let fine = eval(0.5 * h);
            // rounding of K alone produces second differences of this size
            // and of the argument, through the slope
            let kmax = pts
                .iter()
                .map(|&(t, z)| {
                    let slope = if in_time {
                        t.abs() * (k(t + h, z) - k(t - h, z)).abs() / (2.0 * h)
                    } else {
                        z * (k(t, z + h) - k(t, (z - h).abs())).abs() / (2.0 * h)
                    };
                    k(t, z).abs().max(slope)
                })
                .fold(0.0, f64::max);
            let floor = 16.0 * f64::EPSILON * kmax / (0.25 * h * h);
            SmoothnessRow {
                region: name.to_string(),
                coarse,
                fine,
                bounded: fine <= 2.0 * coarse + floor + 1e-12 * (1.0 + coarse),
            }
        })
        .collect()
}

/// Constraints on the source `G` and the radial potential `g₀`.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileReport {
    pub moment_residual: f64,
    pub normalization_error: f64,
    pub sign_nodes: usize,
    pub sign_ok: bool,
    /// `max |g₀ − (1 − z²)|` and `max |g₀' + 2z|` on `(0, δ)`, quadrature form
    pub g0_core_error: f64,
    pub g0_core_slope_error: f64,
    /// `max |g₀ − e^{−1/(1−z²)}|` on `(1 − δ, 1)`, quadrature form
    pub g0_edge_error: f64,
    /// `max |g₀|` for `z ≥ 1`
    pub g0_outside: f64,
}

impl ProfileReport {
    pub fn passed(&self) -> bool {
        self.moment_residual <= 1e-10
            && self.normalization_error <= 1e-9
            && self.sign_ok
            && self.g0_core_error <= 1e-8
            && self.g0_core_slope_error <= 1e-8
            && self.g0_edge_error <= 1e-8
            && self.g0_outside == 0.0
    }
}

pub fn profile_constraints<S: Scalar>(m: &TrajectoryModel<S>) -> ProfileReport {
    let delta = m.config.delta;
    let r = m.source.report.clone();
    let (moment_residual, normalization_error, sign_nodes, sign_ok) = match &r {
        Some(r) => (r.moment_residual_fine, r.normalization_error_fine, r.sign_nodes, r.sign_ok),
        None => (f64::NAN, f64::NAN, 0, false),
    };
    let mut core = 0.0f64;
    let mut slope = 0.0f64;
    let mut edge = 0.0f64;
    for i in 1..=64 {
        let z = delta * i as f64 / 65.0;
        let (g, dg) = m.g0.quadrature_values(z);
        core = core.max((g - S::from_f64(1.0 - z * z)).abs());
        slope = slope.max((dg + S::from_f64(2.0 * z)).abs());
        let z = 1.0 - delta + delta * i as f64 / 65.0;
        let (g, _) = m.g0.quadrature_values(z);
        edge = edge.max((g - S::from_f64((-1.0 / (1.0 - z * z)).exp())).abs());
    }
    let outside = [1.0, 1.2, 2.0]
        .iter()
        .map(|&z| m.g0.value(z).abs())
        .fold(0.0, f64::max);
    ProfileReport {
        moment_residual,
        normalization_error,
        sign_nodes,
        sign_ok,
        g0_core_error: core,
        g0_core_slope_error: slope,
        g0_edge_error: edge,
        g0_outside: outside,
    }
}
