//! Time profiles `λ`, `f₀…f₃`.

use crate::jet::Jet;
use crate::scalar::Scalar;
use crate::Kind;

/// Coefficients needed from `g₀` at `z = 1/2`: `g₀, g₀', g₀'', g₀'''`.
#[derive(Debug, Clone, Copy)]
pub struct CenterData<S: Scalar> {
    pub d: [S; 4],
}

#[derive(Debug, Clone)]
pub struct TimeProfiles<S: Scalar> {
    pub epsilon: f64,
    pub dim: usize,
    pub kind: Kind,
    pub center: CenterData<S>,
}

/// Time jets at one instant, with every `f_i` divided by `f₀(t)`.
#[derive(Debug, Clone)]
pub struct TimeJets<S: Scalar> {
    pub f0: f64,
    pub lambda: Jet<S>,
    pub lambda_dot: Jet<S>,
    /// `f_i / f₀(t)` for `i = 0..=m`
    pub f: Vec<Jet<S>>,
    /// `ḟ_i / f₀(t)`
    pub fdot: Vec<Jet<S>>,
}

/// Builds `λ, f₀, …` from `ε` and the center derivatives of `g₀`.
pub fn build_time_profiles<S: Scalar>(
    epsilon: f64,
    dim: usize,
    kind: Kind,
    center: CenterData<S>,
) -> TimeProfiles<S> {
    TimeProfiles {
        epsilon,
        dim,
        kind,
        center,
    }
}

impl<S: Scalar> TimeProfiles<S> {
    pub fn count(&self) -> usize {
        match self.kind {
            Kind::Cubic => 3,
            Kind::QuadraticComplex => 2,
        }
    }

    /// Jets of order `n` at `t`; `None` outside `(-1, 1)`.
    pub fn jets(&self, t: f64, n: usize) -> Option<TimeJets<S>> {
        if t.abs() >= 1.0 {
            return None;
        }
        let n = n + 3;
        let tj = Jet::<S>::var(S::from_f64(t), n.min(crate::jet::JMAX));
        let q = 1.0 - tj * tj;
        let phi = -1.0 / q;
        let phi0 = phi.value();
        let f0n = (phi - phi0.re()).exp();
        let f0 = phi0.re().exp();
        let lam = q * q * self.epsilon;
        let lam_dot = lam.deriv();
        let ll = lam * lam_dot;
        let l2 = lam * lam;
        let f0dot = f0n.deriv();
        let [d0, d1, d2, d3] = self.center.d;
        let nm1 = (self.dim - 1) as f64;

        let f1 = -(ll * f0n).mul_scalar(d1) * 0.5 + (l2 * f0dot).mul_scalar(d0);
        let f2 = -(f1 * (ll * 0.5 + 2.0 * nm1)
            + (ll * f0n).mul_scalar(d2) * 0.5
            + (ll * f0n - l2 * f0dot).mul_scalar(d1));
        let mut f = vec![f0n, f1, f2];
        if self.count() == 3 {
            let f1dot = f1.deriv();
            let f3 = -((ll * 0.5 + 2.0 * nm1) * f2 + (ll * 2.0 - 8.0 * nm1) * f1 - l2 * f1dot
                + (ll * f0n).mul_scalar(d3) * 0.5
                + (ll * f0n * 2.0 - l2 * f0dot).mul_scalar(d2));
            f.push(f3);
        }
        let fdot = f.iter().map(|j| j.deriv()).collect();
        Some(TimeJets {
            f0,
            lambda: lam,
            lambda_dot: lam_dot,
            f,
            fdot,
        })
    }

    pub fn lambda(&self, t: f64) -> f64 {
        if t.abs() >= 1.0 {
            0.0
        } else {
            self.epsilon * (1.0 - t * t).powi(2)
        }
    }

    pub fn f0(&self, t: f64) -> f64 {
        if t.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - t * t)).exp()
        }
    }

    /// `f_i(t)` (not normalized).
    pub fn f(&self, i: usize, t: f64) -> S {
        match self.jets(t, 1) {
            None => S::zero(),
            Some(j) => j.f[i].value().scale(j.f0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profiles(eps: f64) -> TimeProfiles<f64> {
        let center = CenterData {
            d: [0.3, -0.7, 0.2, 1.1],
        };
        build_time_profiles(eps, 1, Kind::Cubic, center)
    }

    #[test]
    fn values_at_the_origin() {
        let p = profiles(0.1);
        assert!((p.f0(0.0) - (-1f64).exp()).abs() < 1e-16);
        assert_eq!(p.f(1, 0.0), 0.0);
        assert_eq!(p.lambda(0.0), 0.1);
        assert_eq!(p.lambda(1.0), 0.0);
        assert_eq!(p.lambda(-1.0), 0.0);
        assert_eq!(p.f(2, 1.0), 0.0);
    }

    #[test]
    fn lambda_lambda_dot_identity() {
        let eps = 0.1;
        let t: f64 = 0.5;
        let j = profiles(eps).jets(t, 2).unwrap();
        let lhs = (j.lambda * j.lambda_dot).value() * j.f0;
        let rhs = -4.0 * eps * eps * t * (1.0 - t * t).powi(3) * j.f0;
        assert!((lhs - rhs).abs() < 1e-15);
        let f0dot = j.fdot[0].value() * j.f0;
        let expected = -2.0 * t * (1.0 - t * t).powi(-2) * j.f0;
        assert!((f0dot - expected).abs() < 1e-14);
    }

    #[test]
    fn f3_uses_the_derivative_of_f1() {
        let p = profiles(0.3);
        let t = 0.2;
        let h = 1e-5;
        let num = (p.f(1, t + h) - p.f(1, t - h)) / (2.0 * h);
        let j = p.jets(t, 2).unwrap();
        assert!((num - j.fdot[1].value() * j.f0).abs() < 1e-9);
    }
}
