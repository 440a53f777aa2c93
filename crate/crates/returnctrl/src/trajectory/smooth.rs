//! Smooth transition functions built from `exp(-1/x)` factors.

use crate::jet::Jet;
use crate::scalar::Scalar;

/// C∞ step equal to 0 for `u ≤ 0` and 1 for `u ≥ 1`.
pub fn smoothstep<S: Scalar>(u: Jet<S>) -> Jet<S> {
    let x = u.value().re();
    if x <= 0.0 {
        return u.lift(S::zero());
    }
    if x >= 1.0 {
        return u.lift(S::one());
    }
    if x > 0.5 {
        return 1.0 - smoothstep(1.0 - u);
    }
    let e = (1.0 / (1.0 - u) - 1.0 / u).exp();
    e / (e + 1.0)
}

/// Plateau equal to 1 for `|z - c| ≤ inner` and 0 for `|z - c| ≥ outer`.
pub fn plateau<S: Scalar>(z: Jet<S>, c: f64, inner: f64, outer: f64) -> Jet<S> {
    let d = if z.value().re() >= c { z - c } else { c - z };
    1.0 - smoothstep((d - inner) / (outer - inner))
}

/// Polynomial bump `(4u(1-u))^5` on `(0, 1)`, zero outside.
pub fn poly_bump<S: Scalar>(u: Jet<S>) -> Jet<S> {
    let x = u.value().re();
    if x <= 0.0 || x >= 1.0 {
        return u.lift(S::zero());
    }
    (u * (1.0 - u) * 4.0).powi(5)
}

/// `exp(-1/(1-z²))` for `|z| < 1`, zero otherwise.
pub fn edge_profile<S: Scalar>(z: Jet<S>) -> Jet<S> {
    if z.value().re().abs() >= 1.0 {
        return z.lift(S::zero());
    }
    (-1.0 / (1.0 - z * z)).exp()
}

/// Copies a real jet into another scalar type.
pub fn promote<S: Scalar>(j: &Jet<f64>) -> Jet<S> {
    let c: Vec<S> = j.coeffs().iter().map(|&v| S::from_f64(v)).collect();
    Jet::from_coeffs(&c)
}
