//! Radial potential `g₀` solving `g₀'' + (N-1)/z g₀' = G`, `g₀(1) = g₀'(1) = 0`.
//!
//! Integrating twice from `z = 1` gives single integrals against `G`:
//! `g₀'(z) = -z^{1-N} ∫_z^1 s^{N-1} G`, and `g₀(z) = ∫_z^1 s^{N-1} G(s) Φ(z,s) ds`
//! with `Φ = (s^{2-N} - z^{2-N})/(2-N)` or `ln(s/z)` when `N = 2`. Both are
//! evaluated from right-anchored cumulative Gauss–Legendre tables plus an
//! in-cell rule, so `g₀(1) = g₀'(1) = 0` hold exactly.

use super::smooth::edge_profile;
use super::source::SourceProfile;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quad::MappedRule;
use crate::scalar::Scalar;
use std::sync::Arc;

const CELLS: usize = 2048;
const CELL_ORDER: usize = 16;

#[derive(Debug, Clone)]
pub struct RadialProfile<S: Scalar> {
    pub source: Arc<SourceProfile<S>>,
    dim: usize,
    delta: f64,
    /// `∫_{z_k}^1 s^{N-1} G`
    m0: Vec<S>,
    /// `∫_{z_k}^1 s G` (or `∫ s ln s G` when `N = 2`)
    m1: Vec<S>,
    rule: Arc<MappedRule>,
}

/// Solves the radial ODE for `g₀` by nested quadrature.
pub fn solve_radial_ode<S: Scalar>(source: Arc<SourceProfile<S>>) -> Result<RadialProfile<S>> {
    let dim = source.dim;
    let rule = Arc::new(MappedRule::new(CELL_ORDER));
    let mut p = RadialProfile {
        dim,
        delta: source.delta,
        m0: vec![S::zero(); CELLS + 1],
        m1: vec![S::zero(); CELLS + 1],
        rule,
        source,
    };
    for k in (0..CELLS).rev() {
        let (a, b) = (k as f64 / CELLS as f64, (k + 1) as f64 / CELLS as f64);
        let (i0, i1) = p.cell_integrals(a, b);
        p.m0[k] = p.m0[k + 1] + i0;
        p.m1[k] = p.m1[k + 1] + i1;
    }
    // g₀' would behave like z^{1-N} ∫₀^z … only if the total moment vanishes
    let total = p.m0[0].abs();
    if total > 1e-9 {
        return Err(Error::Consistency(format!(
            "∫₀¹ s^(N-1) G = {total:.3e}; g0' would blow up at the origin"
        )));
    }
    Ok(p)
}

impl<S: Scalar> RadialProfile<S> {
    fn w1(&self, s: f64) -> f64 {
        if self.dim == 2 {
            s * s.ln()
        } else {
            s
        }
    }

    fn cell_integrals(&self, a: f64, b: f64) -> (S, S) {
        let n = self.dim as i32;
        let mut i0 = S::zero();
        let mut i1 = S::zero();
        let h = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        let (xs, ws) = (gl_nodes(&self.rule), gl_weights(&self.rule));
        for (x, w) in xs.iter().zip(ws) {
            let s = m + h * x;
            let g = self.source.value(s);
            i0 += g.scale(h * w * s.powi(n - 1));
            i1 += g.scale(h * w * self.w1(s));
        }
        (i0, i1)
    }

    /// Right-anchored integrals `(∫_z^1 s^{N-1}G, ∫_z^1 w₁ G)`.
    fn tails(&self, z: f64) -> (S, S) {
        let k = ((z * CELLS as f64).floor() as usize).min(CELLS - 1);
        let b = (k + 1) as f64 / CELLS as f64;
        let (i0, i1) = self.cell_integrals(z, b);
        (self.m0[k + 1] + i0, self.m1[k + 1] + i1)
    }

    /// `(g₀, g₀')` from the quadrature formulas, without the closed form used
    /// near the origin.
    pub fn quadrature_values(&self, z: f64) -> (S, S) {
        if z >= 1.0 {
            return (S::zero(), S::zero());
        }
        let n = self.dim as i32;
        let (t0, t1) = self.tails(z);
        let dg = -t0.scale(z.powi(1 - n));
        let g = match self.dim {
            2 => t1 - t0.scale(z.ln()),
            _ => (t1 - t0.scale(z.powi(2 - n))).scale(1.0 / (2 - n) as f64),
        };
        (g, dg)
    }

    /// Taylor jet of `g₀` at `z` with `n` coefficients.
    pub fn jet(&self, z: f64, n: usize) -> Jet<S> {
        if z >= 1.0 {
            return Jet::constant(S::zero(), n);
        }
        if z < 0.5 * self.delta {
            // pinned core; the quadrature form cancels badly as z → 0 for N ≥ 2
            let zj = Jet::<S>::var(S::from_f64(z), n);
            return 1.0 - zj * zj;
        }
        if z > 1.0 - 0.5 * self.delta {
            // pinned boundary layer, where G is the exact second derivative
            return edge_profile(Jet::<S>::var(S::from_f64(z), n));
        }
        let (g, dg) = self.quadrature_values(z);
        if n == 1 {
            return Jet::constant(g, 1);
        }
        // y' = p, p' = G - (N-1) p / z, solved coefficient by coefficient
        let gj = self.source.jet(z, n - 1);
        let mut y = vec![S::zero(); n];
        let mut p = vec![S::zero(); n];
        let mut q = vec![S::zero(); n];
        y[0] = g;
        p[0] = dg;
        let nm1 = (self.dim - 1) as f64;
        for k in 0..n - 1 {
            q[k] = if k == 0 {
                p[0].scale(1.0 / z)
            } else {
                (p[k] - q[k - 1]).scale(1.0 / z)
            };
            y[k + 1] = p[k].scale(1.0 / (k + 1) as f64);
            if k + 1 < n {
                p[k + 1] = (gj.coeff(k) - q[k].scale(nm1)).scale(1.0 / (k + 1) as f64);
            }
        }
        Jet::from_coeffs(&y)
    }

    pub fn value(&self, z: f64) -> S {
        self.jet(z, 1).value()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

fn gl_nodes(r: &MappedRule) -> &[f64] {
    r.nodes()
}

fn gl_weights(r: &MappedRule) -> &[f64] {
    r.weights()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::source::construct_source_profile;
    use crate::Kind;

    fn profile(dim: usize) -> RadialProfile<f64> {
        let g = construct_source_profile::<f64>(dim, 0.05, Kind::Cubic, 513).unwrap();
        solve_radial_ode(Arc::new(g)).unwrap()
    }

    #[test]
    fn endpoint_identities() {
        for dim in 1..=3 {
            let p = profile(dim);
            let (g, dg) = p.quadrature_values(1e-3);
            assert!((g - (1.0 - 1e-6)).abs() < 1e-8, "dim {dim}: g0 = {g}");
            assert!((dg + 2e-3).abs() < 1e-8, "dim {dim}: g0' = {dg}");
            for &z in &[0.03, 0.045] {
                let (g, dg) = p.quadrature_values(z);
                assert!((dg + 2.0 * z).abs() < 1e-8);
                assert!((g - (1.0 - z * z)).abs() < 1e-8);
            }
            let z: f64 = 0.99;
            assert!((p.value(z) - (-1.0 / (1.0 - z * z)).exp()).abs() < 1e-8);
            assert_eq!(p.value(1.2), 0.0);
        }
    }

    #[test]
    fn jet_satisfies_the_ode() {
        let p = profile(3);
        let z = 0.37;
        let j = p.jet(z, 6);
        let g = p.source.jet(z, 4);
        let lhs = j.derivative(2) + 2.0 / z * j.derivative(1);
        assert!((lhs - g.value()).abs() < 1e-10);
        // compare second derivative with differences of the quadrature values
        let h = 1e-4;
        let fd = (p.value(z + h) - 2.0 * p.value(z) + p.value(z - h)) / (h * h);
        assert!((fd - j.derivative(2)).abs() < 1e-5);
    }
}
