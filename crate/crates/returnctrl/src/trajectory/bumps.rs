//! Band profiles `g_i = (z - 1/2)^{j_i} / j_i! · P(z)` with a flat plateau `P`.

use super::smooth::plateau;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::Kind;

#[derive(Debug, Clone, Copy)]
pub struct BumpProfiles {
    pub delta: f64,
    /// Number of band profiles: 3 (cubic) or 2 (complex quadratic).
    pub count: usize,
}

/// Builds `g₁…g₃` (cubic) or `g₁, g₂` (complex quadratic).
pub fn build_bump_profiles(delta: f64, kind: Kind) -> Result<BumpProfiles> {
    if !(delta > 0.0 && delta < 0.1) {
        return Err(Error::Parameter(format!(
            "delta must lie in (0, 1/10), got {delta}"
        )));
    }
    let count = match kind {
        Kind::Cubic => 3,
        Kind::QuadraticComplex => 2,
    };
    Ok(BumpProfiles { delta, count })
}

impl BumpProfiles {
    /// Jet of `g_i` (`i` is 1-based) at `z` with `n` coefficients.
    pub fn jet(&self, i: usize, z: f64, n: usize) -> Jet<f64> {
        assert!(i >= 1 && i <= self.count, "band profile index {i} out of range");
        let outer = 0.5 * self.delta;
        if (z - 0.5).abs() >= outer {
            return Jet::constant(0.0, n);
        }
        let zj = Jet::var(z, n);
        let j = (i + 1) as u32;
        let fact: f64 = (1..=j).map(|k| k as f64).product();
        (zj - 0.5).powi(j) * plateau(zj, 0.5, 0.25 * self.delta, outer) / fact
    }

    pub fn value(&self, i: usize, z: f64) -> f64 {
        self.jet(i, z, 1).value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_tables_at_the_center() {
        let b = build_bump_profiles(0.05, Kind::Cubic).unwrap();
        let jets: Vec<_> = (1..=3).map(|i| b.jet(i, 0.5, 6)).collect();
        for (i, j) in jets.iter().enumerate() {
            for k in 0..=4 {
                let expected = if k == i + 2 { 1.0 } else { 0.0 };
                assert_eq!(j.derivative(k), expected, "g_{}^({k})(1/2)", i + 1);
            }
        }
        assert_eq!(b.value(1, 0.40), 0.0);
        assert_eq!(b.value(2, 0.526), 0.0);
    }
}
