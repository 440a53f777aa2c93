//! Carleman-type weights `e^{∓sρ(x)η(t)}(sη)^{±7}` on the control window.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::pde::{Field, SpaceTimeGrid, Window};
use crate::trajectory::SampledProfile;

/// Exponent of `sη` in the weight pair.
pub const WEIGHT_POWER: i32 = 7;

#[derive(Debug, Clone, Serialize)]
pub struct WeightSummary {
    pub s: f64,
    pub kappa: f64,
    pub mu: f64,
    pub beta: f64,
    pub psi_max: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    /// `log` of the largest raw weight, divided out of [`CarlemanWeight::w`]
    pub log_scale: f64,
    pub retained_nodes: usize,
}

/// Weight `W = e^{−sρη}(sη)^7` on the control levels, divided by its maximum.
#[derive(Debug, Clone)]
pub struct CarlemanWeight {
    pub s: f64,
    pub kappa: f64,
    pub window: Window,
    pub rho_x: SampledProfile<f64>,
    /// normalized `W` on the grid, zero off the open window and off `ω₀`
    pub w: Field<f64>,
    pub summary: WeightSummary,
}

/// `ψ(x) = (x−a)(b−x)(1 + β(x−a))` with its maximum at `xc`.
pub fn psi_coefficient(a: f64, b: f64, xc: f64) -> Result<f64> {
    if !(xc > a && xc < b) {
        return Err(Error::Geometry(format!("critical point {xc} outside ({a}, {b})")));
    }
    let u = xc - a;
    let l = b - a;
    let beta = (2.0 * u - l) / (u * (2.0 * l - 3.0 * u));
    if !beta.is_finite() || 1.0 + beta * l <= 0.0 {
        return Err(Error::Geometry(format!(
            "no positive cubic weight with its peak at {xc} on ({a}, {b})"
        )));
    }
    Ok(beta)
}

/// `η(t) = 1/(t'(T − t'))` with `t'` the window time mapped onto `(0, T)` and
/// clamped to `[κT, (1−κ)T]`.
pub fn eta(t: f64, window: &Window, horizon: f64, kappa: f64) -> f64 {
    let tp = (t - window.t1) / (window.t2 - window.t1) * horizon;
    let tp = tp.clamp(kappa * horizon, (1.0 - kappa) * horizon);
    1.0 / (tp * (horizon - tp))
}

/// Builds the weight for strength `s`, observation set `omega1 ⊂ ω₀` and
/// clamping fraction `kappa`.
pub fn build_weights(
    grid: &SpaceTimeGrid,
    s: f64,
    window: Window,
    omega1: (f64, f64),
    kappa: f64,
) -> Result<CarlemanWeight> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Parameter(format!("s must be positive, got {s}")));
    }
    if !(kappa > 0.0 && kappa < 0.25) {
        return Err(Error::Parameter(format!("kappa must lie in (0, 1/4), got {kappa}")));
    }
    if !(window.t1 >= 0.0 && window.t1 < window.t2 && window.t2 <= grid.t_final) {
        return Err(Error::Geometry(format!(
            "window ({}, {}) not inside (0, {})",
            window.t1, window.t2, grid.t_final
        )));
    }
    if !(omega1.0 > window.x_lo && omega1.1 < window.x_hi && omega1.0 < omega1.1) {
        return Err(Error::Geometry(format!(
            "omega1 ({}, {}) is not strictly inside omega0 ({}, {})",
            omega1.0, omega1.1, window.x_lo, window.x_hi
        )));
    }
    let (a, b) = (grid.x_lo, grid.x_hi);
    let xc = 0.5 * (omega1.0 + omega1.1);
    let beta = psi_coefficient(a, b, xc)?;
    let psi = |x: Jet<f64>| (x - a) * (b - x) * (1.0 + (x - a) * beta);
    let psi_max = psi(Jet::constant(xc, 1)).value();
    let mu = 2.0 / psi_max;
    let rho_jet = |x: Jet<f64>| (psi(x) * mu).exp() * -1.0 + (2.0 * mu * psi_max).exp();
    let rho_x = SampledProfile::from_jets("rho", a, b, 4 * (grid.nx + 1) + 1, |x| {
        rho_jet(Jet::var(x, 3))
    });
    let rho_at = |x: f64| rho_jet(Jet::constant(x, 1)).value();

    let horizon = grid.t_final;
    let (n1, n2) = grid.level_range(window.t1, window.t2);
    let (j0, j1) = grid.node_range(window.x_lo, window.x_hi);
    let mut logw = Field::from_fn(grid, |_, _| f64::NEG_INFINITY);
    let mut top = f64::NEG_INFINITY;
    for n in n1 + 1..n2 {
        let e = eta(grid.t(n), &window, horizon, kappa);
        for j in j0..j1 {
            let l = -s * rho_at(grid.x(j)) * e + WEIGHT_POWER as f64 * (s * e).ln();
            logw.set(n, j, l);
            top = top.max(l);
        }
    }
    if !top.is_finite() {
        return Err(Error::WeightConfig(
            "control window contains no interior grid level or node".into(),
        ));
    }
    let w = logw.map(|l| if l.is_finite() { (l - top).exp() } else { 0.0 });
    let retained = w.data.iter().filter(|&&v| v > 0.0).count();
    if w.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::WeightConfig("non-finite weight".into()));
    }
    let rho_vals: Vec<f64> = (0..grid.nx).map(|j| rho_at(grid.x(j))).collect();
    if rho_vals.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::WeightConfig("rho(x) must be positive".into()));
    }
    let summary = WeightSummary {
        s,
        kappa,
        mu,
        beta,
        psi_max,
        rho_min: rho_vals.iter().cloned().fold(f64::INFINITY, f64::min),
        rho_max: rho_vals.iter().cloned().fold(0.0, f64::max),
        log_scale: top,
        retained_nodes: retained,
    };
    Ok(CarlemanWeight {
        s,
        kappa,
        window,
        rho_x,
        w,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> Window {
        Window {
            t1: 0.2,
            t2: 0.3,
            x_lo: 0.4,
            x_hi: 0.6,
        }
    }

    #[test]
    fn eta_at_the_window_center() {
        let horizon = 0.5;
        let e = eta(0.25, &window(), horizon, 0.05);
        assert!((e - 4.0 / (horizon * horizon)).abs() < 1e-12);
        // clamped near the ends
        assert_eq!(eta(0.2, &window(), horizon, 0.05), eta(0.2049, &window(), horizon, 0.05));
    }

    #[test]
    fn rho_is_positive_and_peaks_inside() {
        let g = SpaceTimeGrid::new(0.0, 1.0, 49, 0.5, 50, 0.5).unwrap();
        let w = build_weights(&g, 1.0, window(), (0.45, 0.55), 0.05).unwrap();
        for j in 0..g.nx {
            assert!(w.rho_x.value(g.x(j)) > 0.0);
        }
        // ψ peaks at the centre of ω₁, so ρ is smallest there
        let r = |x: f64| w.rho_x.value(x);
        assert!(r(0.5) < r(0.45) && r(0.5) < r(0.55));
        let off = psi_coefficient(0.0, 1.0, 0.4).unwrap();
        assert!(psi_coefficient(0.0, 1.0, 0.3).is_err());
        assert!(off != 0.0);
    }

    #[test]
    fn weight_decays_toward_the_window_ends() {
        let g = SpaceTimeGrid::new(0.0, 1.0, 49, 0.5, 200, 0.5).unwrap();
        let w = build_weights(&g, 1.0, window(), (0.45, 0.55), 0.05).unwrap();
        let j = 24;
        let mut prev = f64::INFINITY;
        // from the centre level down to t1
        for n in (81..=100).rev() {
            let v = w.w.at(n, j);
            assert!(v <= prev);
            prev = v;
        }
        assert_eq!(w.w.at(80, j), 0.0);
    }

    #[test]
    fn omega1_must_be_interior() {
        let g = SpaceTimeGrid::new(0.0, 1.0, 49, 0.5, 50, 0.5).unwrap();
        assert!(matches!(
            build_weights(&g, 1.0, window(), (0.35, 0.55), 0.05),
            Err(Error::Geometry(_))
        ));
    }
}
