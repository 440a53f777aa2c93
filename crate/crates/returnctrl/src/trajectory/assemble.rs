//! Assembly of `V`, `K` and the rescaled trajectory on a space-time grid.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::bumps::{build_bump_profiles, BumpProfiles};
use super::profile::SampledProfile;
use super::radial::{solve_radial_ode, RadialProfile};
use super::smooth::promote;
use super::source::{construct_source_profile, SourceProfile};
use super::time::{build_time_profiles, CenterData, TimeJets, TimeProfiles};
use super::{BumpConfig, RemainderCheck};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::nonlinear::Coupling;
use crate::pde::{Field, SpaceTimeGrid};
use crate::scalar::Scalar;
use crate::Kind;

const EPSILON_MAX: f64 = 0.5;
const BISECTION_T_NODES: usize = 257;

/// Outcome of the remainder checks on the `(t, z)` profile grid.
///
/// `A = 𝒱 / f₀`; near `z = 1` everything is divided by `e^{-1/(1-z²)}` too.
#[derive(Debug, Clone, Serialize)]
pub struct DominationReport {
    pub epsilon: f64,
    pub epsilon_auto: bool,
    pub t_nodes: usize,
    pub z_nodes: usize,
    /// `min A_zzz` (cubic) or `min Re A_zz` (complex) on the band; must be ≥ 1
    pub band_min: f64,
    /// `min |A| / (|G|/2)` off the band; must exceed 1
    pub off_band_min_ratio: f64,
    /// smallest angle between `A` and the cut `iR⁺` (complex kind)
    pub min_angle_to_cut: Option<f64>,
    /// `max_t max_k |∂_z^k A(t, 1/2)| / max_z |A(t, ·)|`
    pub center_zero_max: f64,
    pub band_ok: bool,
    pub off_band_ok: bool,
    pub cut_ok: bool,
    pub center_ok: bool,
}

impl DominationReport {
    pub fn passed(&self) -> bool {
        self.band_ok && self.off_band_ok && self.cut_ok && self.center_ok
    }

    fn failure(&self) -> Option<(&'static str, String)> {
        if !self.band_ok {
            Some((
                "remainder domination",
                format!(
                    "band minimum {:.4} < 1 at epsilon = {}; use a smaller bump_epsilon",
                    self.band_min, self.epsilon
                ),
            ))
        } else if !self.off_band_ok {
            Some((
                "off-band nonvanishing",
                format!(
                    "min |A|/(|G|/2) = {:.4} at epsilon = {}; use a smaller bump_epsilon",
                    self.off_band_min_ratio, self.epsilon
                ),
            ))
        } else if !self.cut_ok {
            Some((
                "square-root cut",
                format!("A meets the cut iR+ at epsilon = {}", self.epsilon),
            ))
        } else if !self.center_ok {
            Some((
                "center zeros",
                format!("relative size {:.3e} at z = 1/2", self.center_zero_max),
            ))
        } else {
            None
        }
    }
}

/// All profiles of the construction, with `ε` fixed.
#[derive(Debug, Clone)]
pub struct TrajectoryModel<S: Scalar> {
    pub config: BumpConfig,
    pub kind: Kind,
    pub epsilon: f64,
    pub source: Arc<SourceProfile<S>>,
    pub g0: Arc<RadialProfile<S>>,
    pub bumps: BumpProfiles,
    pub time: TimeProfiles<S>,
    pub domination: DominationReport,
}

/// z-dependent factors of `A`, so that `A(t, z) = Σ c_k(t) P_k(z)`.
struct PieceTable<S: Scalar> {
    z: Vec<f64>,
    pieces: Vec<Vec<Jet<S>>>,
    /// `|G|`, or the edge prefactor where the row is divided by `e^{-1/(1-z²)}`
    g_abs: Vec<f64>,
    scaled: Vec<bool>,
    center: Vec<Jet<S>>,
}

/// Builds every profile and fixes `ε` (given or chosen by bisection).
pub fn build_model<S: Scalar>(cfg: &BumpConfig, kind: Kind) -> Result<TrajectoryModel<S>> {
    cfg.validate()?;
    let source = Arc::new(construct_source_profile::<S>(
        cfg.dim,
        cfg.delta,
        kind,
        cfg.z_grid_n,
    )?);
    let g0 = Arc::new(solve_radial_ode(source.clone())?);
    let bumps = build_bump_profiles(cfg.delta, kind)?;
    let cj = g0.jet(0.5, 4);
    let center = CenterData {
        d: [
            cj.derivative(0),
            cj.derivative(1),
            cj.derivative(2),
            cj.derivative(3),
        ],
    };
    let time = build_time_profiles(cfg.bump_epsilon.unwrap_or(EPSILON_MAX), cfg.dim, kind, center);
    let mut model = TrajectoryModel {
        config: *cfg,
        kind,
        epsilon: time.epsilon,
        source,
        g0,
        bumps,
        time,
        domination: empty_report(),
    };
    let table = model.piece_table();
    let report = match cfg.bump_epsilon {
        Some(eps) => model.check_domination(&table, eps, cfg.t_grid_n),
        None => {
            let eps = model.bisect_epsilon(&table)?;
            let mut r = model.check_domination(&table, eps, cfg.t_grid_n);
            r.epsilon_auto = true;
            r
        }
    };
    if let Some((constraint, detail)) = report.failure() {
        if cfg.remainder_check == RemainderCheck::Enforce {
            return Err(Error::construction(constraint, detail));
        }
    }
    model.epsilon = report.epsilon;
    model.time.epsilon = report.epsilon;
    model.domination = report;
    Ok(model)
}

fn empty_report() -> DominationReport {
    DominationReport {
        epsilon: 0.0,
        epsilon_auto: false,
        t_nodes: 0,
        z_nodes: 0,
        band_min: f64::NAN,
        off_band_min_ratio: f64::NAN,
        min_angle_to_cut: None,
        center_zero_max: f64::NAN,
        band_ok: false,
        off_band_ok: false,
        cut_ok: false,
        center_ok: false,
    }
}

/// Signed cube root of `w` (cubic), or `i·sign(z − 1/2)·√w` with the root
/// analytic off `iR⁺` (complex kind, where the square is `−w`).
pub fn kernel_root<S: Scalar>(w: S, z: f64, kind: Kind) -> S {
    match kind {
        Kind::Cubic => S::from_f64(w.re().cbrt()),
        Kind::QuadraticComplex => {
            let sign = if z > 0.5 {
                1.0
            } else if z < 0.5 {
                -1.0
            } else {
                0.0
            };
            let b = sqrt_cut(Complex64::new(w.re(), w.im())) * sign;
            let k = Complex64::i() * b;
            S::from_parts(k.re, k.im)
        }
    }
}

/// Square root with its branch cut on the nonnegative imaginary axis.
pub fn sqrt_cut(w: Complex64) -> Complex64 {
    (Complex64::i() * w).sqrt() * Complex64::from_polar(1.0, -FRAC_PI_4)
}

impl<S: Scalar> TrajectoryModel<S> {
    pub fn power(&self) -> i32 {
        self.kind.power()
    }

    /// `[G, z g₀', g₀, (L g_i, z g_i', g_i)…]` as jets with `n` coefficients.
    fn z_pieces(&self, z: f64, n: usize) -> Vec<Jet<S>> {
        let zj = Jet::<S>::var(S::from_f64(z), n);
        let g0 = self.g0.jet(z, n + 1);
        let mut out = vec![self.source.jet(z, n), zj * g0.deriv(), g0.truncate(n)];
        let nm1 = (self.config.dim - 1) as f64;
        for i in 1..=self.bumps.count {
            if (z - 0.5).abs() < 0.5 * self.bumps.delta {
                let b: Jet<S> = promote(&self.bumps.jet(i, z, n + 2));
                let d1 = b.deriv();
                let d2 = d1.deriv();
                out.push(d2 + d1 * nm1 / zj);
                out.push(zj * d1.truncate(n));
                out.push(b.truncate(n));
            } else {
                let zero = Jet::constant(S::zero(), n);
                out.extend([zero, zero, zero]);
            }
        }
        out
    }

    /// Time factors matching [`Self::z_pieces`].
    fn time_coeffs(tj: &TimeJets<S>) -> Vec<S> {
        let ll = (tj.lambda * tj.lambda_dot).value();
        let lam = tj.lambda.value();
        let l2 = lam * lam;
        let mut c = vec![S::one(), ll, -(l2 * tj.fdot[0].value())];
        for i in 1..tj.f.len() {
            let p = tj.f[i].value();
            c.extend([p, ll * p, -(l2 * tj.fdot[i].value())]);
        }
        c
    }

    fn piece_table(&self) -> PieceTable<S> {
        let nz = self.config.z_grid_n;
        let d = self.config.delta;
        let z: Vec<f64> = (0..nz - 1).map(|j| j as f64 / (nz - 1) as f64).collect();
        let rows: Vec<(Vec<Jet<S>>, f64, bool)> = z
            .par_iter()
            .map(|&z| {
                if z >= 1.0 - d {
                    let q = 1.0 - z * z;
                    let zj = Jet::<S>::var(S::from_f64(z), 1);
                    let pg = self.source.edge_prefactor(zj).value();
                    let mut row = vec![
                        Jet::constant(pg, 1),
                        Jet::constant(S::from_f64(-2.0 * z * z / (q * q)), 1),
                        Jet::constant(S::one(), 1),
                    ];
                    row.resize(3 + 3 * self.bumps.count, Jet::constant(S::zero(), 1));
                    (row, pg.abs(), true)
                } else {
                    let n = if (z - 0.5).abs() < d { 4 } else { 1 };
                    let row = self.z_pieces(z, n);
                    let ga = row[0].value().abs();
                    (row, ga, false)
                }
            })
            .collect();
        let mut t = PieceTable {
            z,
            pieces: Vec::with_capacity(rows.len()),
            g_abs: Vec::with_capacity(rows.len()),
            scaled: Vec::with_capacity(rows.len()),
            center: self.z_pieces(0.5, 3),
        };
        for (row, ga, sc) in rows {
            t.pieces.push(row);
            t.g_abs.push(ga);
            t.scaled.push(sc);
        }
        t
    }

    fn check_domination(&self, table: &PieceTable<S>, eps: f64, nt: usize) -> DominationReport {
        let mut time = self.time.clone();
        time.epsilon = eps;
        let d = self.config.delta;
        let complex = self.kind.is_complex();
        struct Partial {
            band: f64,
            off: f64,
            angle: f64,
            center: f64,
        }
        let partials: Vec<Partial> = (1..nt - 1)
            .into_par_iter()
            .map(|k| {
                let t = -1.0 + 2.0 * k as f64 / (nt - 1) as f64;
                let tj = time.jets(t, 1).expect("interior time node");
                let c = Self::time_coeffs(&tj);
                let mut p = Partial {
                    band: f64::INFINITY,
                    off: f64::INFINITY,
                    angle: f64::INFINITY,
                    center: 0.0,
                };
                let mut amax = 0.0f64;
                for (j, &z) in table.z.iter().enumerate() {
                    let row = &table.pieces[j];
                    let mut a = Jet::constant(S::zero(), row[0].order());
                    for (ck, pk) in c.iter().zip(row) {
                        a = a + pk.mul_scalar(*ck);
                    }
                    let v = a.value();
                    if !table.scaled[j] {
                        amax = amax.max(v.abs());
                    }
                    let dz = (z - 0.5).abs();
                    if dz < d && dz > 0.0 {
                        let b = if complex {
                            a.derivative(2).re()
                        } else {
                            a.derivative(3).re()
                        };
                        p.band = p.band.min(b);
                    }
                    if dz >= 0.5 * d {
                        p.off = p.off.min(v.abs() / (0.5 * table.g_abs[j]));
                    }
                    if complex && dz > 0.0 {
                        let mut ang = (v.im().atan2(v.re()) - FRAC_PI_2).abs();
                        if ang > PI {
                            ang = 2.0 * PI - ang;
                        }
                        if v.abs() == 0.0 {
                            ang = 0.0;
                        }
                        p.angle = p.angle.min(ang);
                    }
                }
                let mut a = Jet::constant(S::zero(), 3);
                for (ck, pk) in c.iter().zip(&table.center) {
                    a = a + pk.mul_scalar(*ck);
                }
                let kmax = if complex { 1 } else { 2 };
                let zmax = (0..=kmax).map(|k| a.derivative(k).abs()).fold(0.0, f64::max);
                p.center = if amax > 0.0 { zmax / amax } else { 0.0 };
                p
            })
            .collect();
        let band = partials.iter().map(|p| p.band).fold(f64::INFINITY, f64::min);
        let off = partials.iter().map(|p| p.off).fold(f64::INFINITY, f64::min);
        let angle = partials.iter().map(|p| p.angle).fold(f64::INFINITY, f64::min);
        let center = partials.iter().map(|p| p.center).fold(0.0, f64::max);
        DominationReport {
            epsilon: eps,
            epsilon_auto: false,
            t_nodes: nt,
            z_nodes: table.z.len(),
            band_min: band,
            off_band_min_ratio: off,
            min_angle_to_cut: complex.then_some(angle),
            center_zero_max: center,
            band_ok: band >= 1.0,
            off_band_ok: off > 1.0,
            cut_ok: !complex || angle > 0.0,
            center_ok: center <= 1e-10,
        }
    }

    /// Largest `ε ≤ 1/2` (to 1e-3 relative) passing the checks on a coarse
    /// time grid.
    fn bisect_epsilon(&self, table: &PieceTable<S>) -> Result<f64> {
        let ok = |e: f64| self.check_domination(table, e, BISECTION_T_NODES).passed();
        if ok(EPSILON_MAX) {
            return Ok(EPSILON_MAX);
        }
        let mut hi = EPSILON_MAX;
        let mut lo = hi;
        for _ in 0..30 {
            lo *= 0.5;
            if ok(lo) {
                break;
            }
            hi = lo;
        }
        if !ok(lo) {
            return Err(Error::construction(
                "remainder domination",
                "no admissible bump_epsilon found down to 1e-9",
            ));
        }
        while hi - lo > 1e-3 * lo {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // leave a margin for the finer final grid
        Ok(lo * 0.98)
    }

    /// `A = 𝒱/f₀` as a z-jet at `(t, z)`, `|t| < 1`.
    pub fn a_jet(&self, t: f64, z: f64, n: usize) -> Jet<S> {
        let Some(tj) = self.time.jets(t, 1) else {
            return Jet::constant(S::zero(), n);
        };
        let c = Self::time_coeffs(&tj);
        let mut a = Jet::constant(S::zero(), n);
        for (ck, pk) in c.iter().zip(self.z_pieces(z, n)) {
            a = a + pk.mul_scalar(*ck);
        }
        a
    }

    /// `(V, K)` at reference coordinates `(t, r)`.
    pub fn reference_point(&self, t: f64, r: f64) -> (S, S) {
        let zero = (S::zero(), S::zero());
        if t.abs() >= 1.0 {
            return zero;
        }
        let lam = self.time.lambda(t);
        let z = r.abs() / lam;
        if z >= 1.0 {
            return zero;
        }
        let tj = self.time.jets(t, 1).expect("interior time");
        let c = Self::time_coeffs(&tj);
        let pieces = self.z_pieces(z, 1);
        let mut a = S::zero();
        for (ck, pk) in c.iter().zip(&pieces) {
            a += *ck * pk.value();
        }
        let mut v = pieces[2].value();
        for i in 1..tj.f.len() {
            v += tj.f[i].value() * pieces[2 + 3 * i].value();
        }
        let v = v.scale(tj.f0);
        // λ⁻² f₀ without overflow as t → ±1
        let scale = (-1.0 / (1.0 - t * t) - 2.0 * lam.ln()).exp();
        let w = match self.kind {
            Kind::Cubic => -a.scale(scale),
            Kind::QuadraticComplex => a.scale(scale),
        };
        let k = kernel_root(w, z, self.kind);
        (v, k)
    }

    pub fn support_box(&self) -> SupportBox {
        let c = &self.config;
        SupportBox {
            t_lo: c.center_t - c.rho_radius,
            t_hi: c.center_t + c.rho_radius,
            x_lo: c.center_x - c.rho_radius,
            x_hi: c.center_x + c.rho_radius,
        }
    }

    /// `(ū, v̄)` at `(t, x)` after the R-transform, ρ-scaling and shift.
    pub fn evaluate(&self, t: f64, x: f64) -> (S, S) {
        self.evaluate_local(t - self.config.center_t, x - self.config.center_x)
    }

    /// Same as [`Self::evaluate`] with offsets `(s, d)` from the center, so
    /// that tiny stencil steps stay exactly representable.
    pub fn evaluate_local(&self, s: f64, d: f64) -> (S, S) {
        let c = &self.config;
        let rho = c.rho_radius;
        let tau = s / (rho * rho);
        let r = d.abs() / rho;
        if tau.abs() >= 1.0 || r >= self.epsilon {
            return (S::zero(), S::zero());
        }
        let (v, k) = self.reference_point(tau, r);
        let p = self.power() as f64;
        let u = k.scale((c.reaction * s / p).exp() * rho.powf(-2.0 / p));
        (u, v.scale((c.reaction * s).exp()))
    }

    /// True support half-widths `(ρ², ρε)` around the center.
    pub fn active_extent(&self) -> (f64, f64) {
        let rho = self.config.rho_radius;
        (rho * rho, rho * self.epsilon)
    }

    /// `G`, `g₀`, `g_i` on `[0, 1]`, then `λ`, `f₀…` on `[−1, 1]`.
    pub fn sample_profiles(&self) -> Vec<SampledProfile<S>> {
        let nz = self.config.z_grid_n;
        let nt = self.config.t_grid_n;
        let mut out = vec![
            SampledProfile::from_jets("G", 0.0, 1.0, nz, |z| self.source.jet(z, 3)),
            SampledProfile::from_jets("g0", 0.0, 1.0, nz, |z| self.g0.jet(z, 3)),
        ];
        for i in 1..=self.bumps.count {
            out.push(SampledProfile::from_jets(
                format!("g{i}"),
                0.0,
                1.0,
                nz,
                |z| promote(&self.bumps.jet(i, z, 3)),
            ));
        }
        let eps = self.epsilon;
        out.push(SampledProfile::from_jets("lambda", -1.0, 1.0, nt, |t| {
            let tj = Jet::<S>::var(S::from_f64(t), 3);
            let q = 1.0 - tj * tj;
            q * q * eps
        }));
        for i in 0..=self.bumps.count {
            out.push(SampledProfile::from_jets(format!("f{i}"), -1.0, 1.0, nt, |t| {
                match self.time.jets(t, 3) {
                    Some(j) => j.f[i].scale(j.f0).truncate(3),
                    None => Jet::constant(S::zero(), 3),
                }
            }));
        }
        out
    }
}

/// Space-time box `(t_lo, t_hi) × (x_lo, x_hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportBox {
    pub t_lo: f64,
    pub t_hi: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl SupportBox {
    /// Open-box membership.
    pub fn contains(&self, t: f64, x: f64) -> bool {
        t > self.t_lo && t < self.t_hi && x > self.x_lo && x < self.x_hi
    }
}

/// Grid samples of `(ū, v̄, h̄)` with their support box.
#[derive(Debug, Clone)]
pub struct ReferenceTrajectory<S: Scalar> {
    pub grid: SpaceTimeGrid,
    pub kind: Kind,
    pub u_bar: Field<S>,
    pub v_bar: Field<S>,
    pub h_bar: Field<S>,
    pub support: SupportBox,
    pub omega: (f64, f64),
    pub reaction: f64,
    pub coupling: String,
    pub model: Arc<TrajectoryModel<S>>,
}

/// Samples `ū, v̄` on `grid` and sets `h̄` to the nodal residual
/// `D_t ū − Δ_h ū − g(ū, v̄)`, so the first equation holds exactly at nodes.
pub fn assemble_trajectory<S: Scalar>(
    model: Arc<TrajectoryModel<S>>,
    grid: &SpaceTimeGrid,
    omega: (f64, f64),
    g: &dyn Coupling<S>,
) -> Result<ReferenceTrajectory<S>> {
    grid.validate()?;
    if g.g(S::zero(), S::zero()) != S::zero() {
        return Err(Error::Precondition("coupling must satisfy g(0, 0) = 0".into()));
    }
    let bx = model.support_box();
    let tf = grid.t_final;
    // the configured box must fit in time; in space only the active support
    // has to, so that a grid zoomed onto a thin support is accepted
    let (et, ex) = model.active_extent();
    let c = &model.config;
    let (ax_lo, ax_hi) = (c.center_x - ex, c.center_x + ex);
    if !(bx.t_lo > 0.0 && bx.t_hi < tf && ax_lo >= omega.0 && ax_hi <= omega.1 && c.center_t + et < tf) {
        return Err(Error::Geometry(format!(
            "support box ({:.4}, {:.4}) x ({:.6}, {:.6}) not inside (0, {tf}) x ({}, {})",
            bx.t_lo, bx.t_hi, ax_lo, ax_hi, omega.0, omega.1
        )));
    }
    if !(omega.0 >= grid.x_lo && omega.1 <= grid.x_hi) {
        return Err(Error::Geometry(format!(
            "omega ({}, {}) not inside ({}, {})",
            omega.0, omega.1, grid.x_lo, grid.x_hi
        )));
    }
    let nx = grid.nx;
    let rows: Vec<Vec<(S, S)>> = (0..grid.levels())
        .into_par_iter()
        .map(|n| {
            let t = grid.t(n);
            (0..nx).map(|j| model.evaluate(t, grid.x(j))).collect()
        })
        .collect();
    let mut u = Field::zeros(grid);
    let mut v = Field::zeros(grid);
    for (n, row) in rows.iter().enumerate() {
        for (j, &(a, b)) in row.iter().enumerate() {
            u.set(n, j, a);
            v.set(n, j, b);
        }
    }
    if u.is_zero() {
        return Err(Error::construction(
            "resolution",
            format!(
                "no grid node falls inside the support of u_bar (half-widths {:.3e} in t, {:.3e} in x); refine the grid or raise bump_epsilon",
                model.active_extent().0,
                model.active_extent().1
            ),
        ));
    }
    let h = nodal_residual(&u, &v, g);
    for n in 0..grid.levels() {
        for j in 0..nx {
            let outside = !bx.contains(grid.t(n), grid.x(j));
            if outside && (h.at(n, j) != S::zero() || u.at(n, j) != S::zero()) {
                return Err(Error::Geometry(format!(
                    "grid too coarse: trajectory leaks out of its box at t={}, x={}",
                    grid.t(n),
                    grid.x(j)
                )));
            }
        }
    }
    Ok(ReferenceTrajectory {
        grid: *grid,
        kind: model.kind,
        u_bar: u,
        v_bar: v,
        h_bar: h,
        support: bx,
        omega,
        reaction: model.config.reaction,
        coupling: g.name(),
        model,
    })
}

/// `D_t u − Δ_h u − g(u, v)` with centered differences and zero boundary
/// values.
pub fn nodal_residual<S: Scalar>(u: &Field<S>, v: &Field<S>, g: &dyn Coupling<S>) -> Field<S> {
    let grid = u.grid;
    let (dt, dx) = (grid.dt(), grid.dx());
    let nx = grid.nx;
    let nt = grid.nt;
    let mut h = Field::zeros(&grid);
    for n in 0..=nt {
        for j in 0..nx {
            let ut = if n == 0 {
                (u.at(1, j) - u.at(0, j)).scale(1.0 / dt)
            } else if n == nt {
                (u.at(nt, j) - u.at(nt - 1, j)).scale(1.0 / dt)
            } else {
                (u.at(n + 1, j) - u.at(n - 1, j)).scale(0.5 / dt)
            };
            let left = if j > 0 { u.at(n, j - 1) } else { S::zero() };
            let right = if j + 1 < nx { u.at(n, j + 1) } else { S::zero() };
            let lap = (left - u.at(n, j).scale(2.0) + right).scale(1.0 / (dx * dx));
            h.set(n, j, ut - lap - g.g(u.at(n, j), v.at(n, j)));
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cut_square_root_branch() {
        let w = Complex64::new(-4.0, 0.0);
        let r = sqrt_cut(w);
        assert!((r * r - w).norm() < 1e-14);
        // continuous across the negative real axis
        let a = sqrt_cut(Complex64::new(-1.0, 1e-12));
        let b = sqrt_cut(Complex64::new(-1.0, -1e-12));
        assert!((a - b).norm() < 1e-10);
        // jumps across iR⁺
        let a = sqrt_cut(Complex64::new(1e-12, 1.0));
        let b = sqrt_cut(Complex64::new(-1e-12, 1.0));
        assert!((a + b).norm() < 1e-10);
        assert!((sqrt_cut(Complex64::new(9.0, 0.0)) - 3.0).norm() < 1e-14);
    }

    #[test]
    fn signed_cube_root() {
        assert_eq!(kernel_root::<f64>(-8.0, 0.3, Kind::Cubic), -2.0);
        assert_eq!(kernel_root::<f64>(27.0, 0.3, Kind::Cubic), 3.0);
    }
}
