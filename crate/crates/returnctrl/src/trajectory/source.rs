//! The source profile `G` whose radial potential is `g₀`.
//!
//! `G` is pinned on four pieces (the core, the band around `z = 1/2`, the
//! boundary layer below `z = 1` and the exterior) and free on two segments.
//! On each free segment it is a C∞ blend of the neighbouring pinned pieces
//! plus six Bernstein modes under a polynomial bump. The twelve amplitudes are
//! fixed by a sign-constrained least-norm solve of the two moment conditions.

use super::smooth::{edge_profile, poly_bump, smoothstep};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quad;
use crate::scalar::Scalar;
use crate::Kind;
use serde::Serialize;

const MODES: usize = 6;
const BINOM5: [f64; 6] = [1.0, 5.0, 10.0, 10.0, 5.0, 1.0];

/// Imaginary amplitude of the left free segment in the complex kind.
pub const DEFAULT_IM_AMPLITUDE: f64 = 0.5;

#[derive(Debug, Clone, Serialize)]
pub struct SourceReport {
    /// `|∫ s^{N-1} G|` with the construction rule.
    pub moment_residual: f64,
    /// Normalization error `|∫ w G - target|`.
    pub normalization_error: f64,
    /// Same two quantities with a twice finer rule.
    pub moment_residual_fine: f64,
    pub normalization_error_fine: f64,
    pub sign_nodes: usize,
    pub sign_ok: bool,
    /// Smallest `sign(z-1/2)·G` (real) or margin of the relaxed complex
    /// conditions over the checked nodes.
    pub sign_margin: f64,
    /// Complex kind: whether `Re G > Im G > 0` also holds on the right segment.
    pub strict_right_condition: Option<bool>,
    /// Complex kind: smallest angle between `G` and the positive imaginary axis.
    pub min_angle_to_cut: Option<f64>,
    pub clamped_modes: usize,
    pub left_amplitudes: Vec<[f64; 2]>,
    pub right_amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone)]
pub struct SourceProfile<S: Scalar> {
    pub dim: usize,
    pub delta: f64,
    pub kind: Kind,
    left: [S; MODES],
    right: [S; MODES],
    pub report: Option<SourceReport>,
}

/// Builds `G` for the given dimension, band half-width and kind.
pub fn construct_source_profile<S: Scalar>(
    dim: usize,
    delta: f64,
    kind: Kind,
    z_grid_n: usize,
) -> Result<SourceProfile<S>> {
    if dim < 1 {
        return Err(Error::Parameter(format!("dimension must be ≥ 1, got {dim}")));
    }
    if !(delta > 0.0 && delta < 0.1) {
        return Err(Error::Parameter(format!(
            "delta must lie in (0, 1/10), got {delta}"
        )));
    }
    if S::COMPLEX != kind.is_complex() {
        return Err(Error::Parameter(format!(
            "scalar type does not match kind {kind}"
        )));
    }
    if z_grid_n < 16 {
        return Err(Error::Parameter("z grid needs at least 16 nodes".into()));
    }
    let mut g = SourceProfile {
        dim,
        delta,
        kind,
        left: [S::zero(); MODES],
        right: [S::zero(); MODES],
        report: None,
    };

    let (xs, ws) = g.quadrature(64);
    let rows = g.moment_rows(&xs, &ws);
    let (targets, forced) = g.forced_moments(&xs, &ws);
    let rhs = [targets[0] - forced[0], targets[1] - forced[1]];

    let signs: [f64; 2 * MODES] = match kind {
        Kind::Cubic => [-1., -1., -1., -1., -1., -1., 1., 1., 1., 1., 1., 1.],
        Kind::QuadraticComplex => [0., 0., 0., 0., 0., 0., 1., 1., 1., 1., 1., 1.],
    };
    let (re, clamped) = clamped_least_norm(&rows, rhs, &signs)?;
    let mut im = [0.0; 2 * MODES];
    if kind.is_complex() {
        let aim = DEFAULT_IM_AMPLITUDE;
        for v in im.iter_mut().take(MODES) {
            *v = -aim;
        }
        let mut r2 = [0.0; 2];
        for (r, row) in rows.iter().enumerate() {
            r2[r] = aim * row[..MODES].iter().sum::<f64>();
        }
        let sub: Vec<[f64; MODES]> = rows
            .iter()
            .map(|row| {
                let mut s = [0.0; MODES];
                s.copy_from_slice(&row[MODES..]);
                s
            })
            .collect();
        let (right_im, _) = clamped_least_norm(&sub, r2, &[0.0; MODES])?;
        im[MODES..].copy_from_slice(&right_im);
    }
    for k in 0..MODES {
        g.left[k] = S::from_parts(re[k], im[k]);
        g.right[k] = S::from_parts(re[MODES + k], im[MODES + k]);
    }

    let (m0, m1) = g.moments(&xs, &ws);
    let (xf, wf) = g.quadrature(128);
    let (f0, f1) = g.moments(&xf, &wf);
    let target = targets[1];
    let mut report = SourceReport {
        moment_residual: m0.abs(),
        normalization_error: (m1 - S::from_f64(target)).abs(),
        moment_residual_fine: f0.abs(),
        normalization_error_fine: (f1 - S::from_f64(target)).abs(),
        sign_nodes: 0,
        sign_ok: true,
        sign_margin: f64::INFINITY,
        strict_right_condition: None,
        min_angle_to_cut: None,
        clamped_modes: clamped,
        left_amplitudes: g.left.iter().map(|a| [a.re(), a.im()]).collect(),
        right_amplitudes: g.right.iter().map(|a| [a.re(), a.im()]).collect(),
    };
    g.check_signs(z_grid_n, &mut report);
    if report.moment_residual > 1e-10 {
        return Err(Error::construction(
            "moment",
            format!("|∫ s^(N-1) G| = {:.3e}", report.moment_residual),
        ));
    }
    if report.normalization_error > 1e-9 {
        return Err(Error::construction(
            "normalization",
            format!("g0(0+) normalization off by {:.3e}", report.normalization_error),
        ));
    }
    if !report.sign_ok {
        return Err(Error::construction(
            "sign",
            format!("sign condition fails, margin {:.3e}", report.sign_margin),
        ));
    }
    g.report = Some(report);
    Ok(g)
}

impl<S: Scalar> SourceProfile<S> {
    fn segments(&self) -> [(f64, f64); 2] {
        let d = self.delta;
        [(d, 0.5 - d), (0.5 + d, 1.0 - d)]
    }

    fn band(&self, z: Jet<S>) -> Jet<S> {
        (z - 0.5).powi(self.kind.power() as u32)
    }

    fn core(&self, z: Jet<S>) -> Jet<S> {
        z.lift_f64(-2.0 * self.dim as f64)
    }

    /// Polynomial factor of the boundary-layer piece; its sign is the sign of
    /// `G` on `(1-δ, 1)`.
    pub fn edge_prefactor(&self, z: Jet<S>) -> Jet<S> {
        let q = 1.0 - z * z;
        let z2 = z * z;
        -2.0 * self.dim as f64 / (q * q) - z2 * 8.0 / q.powi(3) + z2 * 4.0 / q.powi(4)
    }

    fn edge(&self, z: Jet<S>) -> Jet<S> {
        if z.value().re() >= 1.0 {
            return z.lift(S::zero());
        }
        self.edge_prefactor(z) * edge_profile(z)
    }

    fn blend(&self, z: Jet<S>, seg: usize) -> Jet<S> {
        let (a, b) = self.segments()[seg];
        let w = self.delta;
        let x = z.value().re();
        let mut r = z.lift(S::zero());
        if x < a + w {
            let lo = if seg == 0 { self.core(z) } else { self.band(z) };
            r = r + (1.0 - smoothstep((z - a) / w)) * lo;
        }
        if x > b - w {
            let hi = if seg == 0 { self.band(z) } else { self.edge(z) };
            r = r + smoothstep((z - (b - w)) / w) * hi;
        }
        r
    }

    fn modes(&self, z: Jet<S>, seg: usize) -> [Jet<S>; MODES] {
        let (a, b) = self.segments()[seg];
        let u = (z - a) / (b - a);
        let bump = poly_bump(u);
        let v = 1.0 - u;
        let mut out = [z.lift(S::zero()); MODES];
        for (k, o) in out.iter_mut().enumerate() {
            *o = bump * u.powi(k as u32) * v.powi((5 - k) as u32) * BINOM5[k];
        }
        out
    }

    fn segment_of(&self, x: f64) -> Option<usize> {
        self.segments()
            .iter()
            .position(|&(a, b)| x > a && x < b)
    }

    /// Pinned part of `G`, i.e. `G` with all amplitudes set to zero.
    fn forced(&self, z: Jet<S>) -> Jet<S> {
        let x = z.value().re();
        let d = self.delta;
        if x <= d {
            self.core(z)
        } else if x >= 0.5 - d && x <= 0.5 + d {
            self.band(z)
        } else if x >= 1.0 - d {
            self.edge(z)
        } else {
            let seg = if x < 0.5 { 0 } else { 1 };
            self.blend(z, seg)
        }
    }

    /// Taylor jet of `G` at `z` with `n` coefficients.
    pub fn jet(&self, z: f64, n: usize) -> Jet<S> {
        let zj = Jet::var(S::from_f64(z), n);
        let mut r = self.forced(zj);
        if let Some(seg) = self.segment_of(z) {
            let amp = if seg == 0 { &self.left } else { &self.right };
            for (m, &a) in self.modes(zj, seg).iter().zip(amp.iter()) {
                r = r + m.mul_scalar(a);
            }
        }
        r
    }

    pub fn value(&self, z: f64) -> S {
        self.jet(z, 1).value()
    }

    fn breaks(&self) -> Vec<f64> {
        let d = self.delta;
        let mut b = vec![
            0.0,
            d,
            2.0 * d,
            0.5 - 2.0 * d,
            0.5 - d,
            0.5 + d,
            0.5 + 2.0 * d,
            1.0 - 2.0 * d,
            1.0 - d,
            1.0,
        ];
        b.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        b
    }

    fn quadrature(&self, panels: usize) -> (Vec<f64>, Vec<f64>) {
        quad::composite(&self.breaks(), panels, 12)
    }

    fn weights(&self, y: f64) -> (f64, f64) {
        let n = self.dim as i32;
        let w0 = y.powi(n - 1);
        let w1 = if self.dim == 2 { y * y.ln() } else { y };
        (w0, w1)
    }

    fn moment_rows(&self, xs: &[f64], ws: &[f64]) -> Vec<[f64; 2 * MODES]> {
        let mut rows = vec![[0.0; 2 * MODES]; 2];
        for (&x, &w) in xs.iter().zip(ws) {
            if let Some(seg) = self.segment_of(x) {
                let zj = Jet::<f64>::var(x, 1);
                let (a, b) = self.segments()[seg];
                let u = (zj - a) / (b - a);
                let bump = poly_bump(u);
                let v = 1.0 - u;
                let (w0, w1) = self.weights(x);
                for k in 0..MODES {
                    let m = (bump * u.powi(k as u32) * v.powi((5 - k) as u32)).value()
                        * BINOM5[k];
                    rows[0][MODES * seg + k] += w * w0 * m;
                    rows[1][MODES * seg + k] += w * w1 * m;
                }
            }
        }
        rows
    }

    /// Targets and pinned-part contributions of the two moment conditions.
    fn forced_moments(&self, xs: &[f64], ws: &[f64]) -> ([f64; 2], [f64; 2]) {
        let target = if self.dim == 2 {
            1.0
        } else {
            2.0 - self.dim as f64
        };
        let mut f = [0.0; 2];
        for (&x, &w) in xs.iter().zip(ws) {
            let (w0, w1) = self.weights(x);
            let v = self.forced(Jet::var(S::from_f64(x), 1)).value().re();
            f[0] += w * w0 * v;
            f[1] += w * w1 * v;
        }
        ([0.0, target], f)
    }

    fn moments(&self, xs: &[f64], ws: &[f64]) -> (S, S) {
        let mut m = (S::zero(), S::zero());
        for (&x, &w) in xs.iter().zip(ws) {
            let (w0, w1) = self.weights(x);
            let v = self.value(x);
            m.0 += v.scale(w * w0);
            m.1 += v.scale(w * w1);
        }
        m
    }

    /// Moment `∫₀¹ s^{N-1} G` and normalization integral with a rule of
    /// `panels` panels per piece.
    pub fn moment_integrals(&self, panels: usize) -> (S, S) {
        let (xs, ws) = self.quadrature(panels);
        self.moments(&xs, &ws)
    }

    /// Target of the normalization integral.
    pub fn normalization_target(&self) -> f64 {
        if self.dim == 2 {
            1.0
        } else {
            2.0 - self.dim as f64
        }
    }

    fn check_signs(&self, n: usize, rep: &mut SourceReport) {
        let d = self.delta;
        let mut margin = f64::INFINITY;
        let mut ok = true;
        let mut count = 0;
        let mut strict = true;
        let mut min_angle = f64::INFINITY;
        for j in 1..n - 1 {
            let z = j as f64 / (n - 1) as f64;
            if (z - 0.5).abs() < 1e-14 {
                continue;
            }
            count += 1;
            let zj = Jet::var(S::from_f64(z), 1);
            let g = if z >= 1.0 - d {
                // the exponential factor underflows near z = 1
                self.edge_prefactor(zj).value()
            } else {
                self.value(z)
            };
            match self.kind {
                Kind::Cubic => {
                    let s = (z - 0.5).signum() * g.re();
                    margin = margin.min(s);
                    ok &= s > 0.0;
                }
                Kind::QuadraticComplex => {
                    if z > d && z < 0.5 - d {
                        margin = margin.min(-g.im());
                        ok &= g.im() < 0.0;
                    }
                    if z > 0.5 + d && z < 1.0 - d {
                        margin = margin.min(g.re());
                        ok &= g.re() > 0.0;
                        strict &= g.re() > g.im() && g.im() > 0.0;
                    }
                    let ang = (g.im().atan2(g.re()) - std::f64::consts::FRAC_PI_2).abs();
                    let ang = ang.min(2.0 * std::f64::consts::PI - ang);
                    min_angle = min_angle.min(ang);
                    ok &= g.abs() > 0.0 && ang > 0.0;
                }
            }
        }
        rep.sign_nodes = count;
        rep.sign_ok = ok;
        rep.sign_margin = margin;
        if self.kind.is_complex() {
            rep.strict_right_condition = Some(strict);
            rep.min_angle_to_cut = Some(min_angle);
        }
    }
}

/// Least-norm solution of `rows · c = rhs` with `signs[k]·c[k] ≥ 0` wherever
/// `signs[k] ≠ 0`. Violating modes are frozen at zero one at a time.
fn clamped_least_norm<const K: usize>(
    rows: &[[f64; K]],
    rhs: [f64; 2],
    signs: &[f64; K],
) -> Result<([f64; K], usize)> {
    let mut free = [true; K];
    loop {
        let mut gram = [[0.0; 2]; 2];
        for r in 0..2 {
            for s in 0..2 {
                gram[r][s] = (0..K)
                    .filter(|&k| free[k])
                    .map(|k| rows[r][k] * rows[s][k])
                    .sum();
            }
        }
        let det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
        let scale = gram[0][0].abs().max(gram[1][1].abs()).max(1e-300);
        if det.abs() <= 1e-14 * scale * scale {
            return Err(Error::construction(
                "moment",
                "free-segment modes cannot satisfy both moment conditions under the sign constraints",
            ));
        }
        let y0 = (rhs[0] * gram[1][1] - rhs[1] * gram[0][1]) / det;
        let y1 = (gram[0][0] * rhs[1] - gram[1][0] * rhs[0]) / det;
        let mut c = [0.0; K];
        for k in 0..K {
            if free[k] {
                c[k] = rows[0][k] * y0 + rows[1][k] * y1;
            }
        }
        let worst = (0..K)
            .filter(|&k| free[k] && signs[k] * c[k] < 0.0)
            .min_by(|&a, &b| (signs[a] * c[a]).total_cmp(&(signs[b] * c[b])));
        match worst {
            None => return Ok((c, free.iter().filter(|f| !**f).count())),
            Some(k) => free[k] = false,
        }
    }
}
