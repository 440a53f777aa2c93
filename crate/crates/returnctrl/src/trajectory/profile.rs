//! Uniformly sampled profiles with quintic Hermite interpolation.

use crate::jet::Jet;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct SampledProfile<S: Scalar> {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<S>,
    pub d1: Vec<S>,
    pub d2: Vec<S>,
}

impl<S: Scalar> SampledProfile<S> {
    /// Samples `f` (given as a jet with at least three coefficients) on `n`
    /// uniform nodes of `[lo, hi]`.
    pub fn from_jets<F: Fn(f64) -> Jet<S>>(
        name: impl Into<String>,
        lo: f64,
        hi: f64,
        n: usize,
        f: F,
    ) -> Self {
        assert!(n >= 2 && hi > lo);
        let mut values = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        for k in 0..n {
            let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let j = f(x);
            values.push(j.value());
            d1.push(j.derivative(1));
            d2.push(j.derivative(2));
        }
        SampledProfile {
            name: name.into(),
            lo,
            hi,
            values,
            d1,
            d2,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.len() - 1) as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        self.lo + self.step() * k as f64
    }

    /// `k`-th derivative of the interpolant at `x` (`k ≤ 5`); zero outside.
    pub fn eval(&self, x: f64, k: usize) -> S {
        if x < self.lo || x > self.hi || k > 5 {
            return S::zero();
        }
        let h = self.step();
        let i = (((x - self.lo) / h).floor() as usize).min(self.len() - 2);
        let u = (x - self.node(i)) / h;
        if k <= 2 && (u == 0.0 || u == 1.0) {
            let m = if u == 0.0 { i } else { i + 1 };
            return [self.values[m], self.d1[m], self.d2[m]][k];
        }
        let a = self.cell_coeffs(i);
        // derivative of Σ a_m u^m, then rescale
        let mut s = S::zero();
        for m in k..6 {
            let falling: f64 = (0..k).map(|r| (m - r) as f64).product();
            s += a[m].scale(falling * u.powi((m - k) as i32));
        }
        s.scale(h.powi(-(k as i32)))
    }

    pub fn value(&self, x: f64) -> S {
        self.eval(x, 0)
    }

    fn cell_coeffs(&self, i: usize) -> [S; 6] {
        let h = self.step();
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (p0, p1) = (self.d1[i].scale(h), self.d1[i + 1].scale(h));
        let (s0, s1) = (self.d2[i].scale(h * h), self.d2[i + 1].scale(h * h));
        let a0 = y0;
        let a1 = p0;
        let a2 = s0.scale(0.5);
        let r0 = y1 - a0 - a1 - a2;
        let r1 = p1 - a1 - a2.scale(2.0);
        let r2 = s1 - a2.scale(2.0);
        let a3 = r0.scale(10.0) - r1.scale(4.0) + r2.scale(0.5);
        let a4 = r0.scale(-15.0) + r1.scale(7.0) - r2;
        let a5 = r0.scale(6.0) - r1.scale(3.0) + r2.scale(0.5);
        [a0, a1, a2, a3, a4, a5]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_smooth_functions() {
        let p = SampledProfile::<f64>::from_jets("exp", 0.0, 1.0, 33, |x| {
            Jet::var(x, 3).exp()
        });
        for k in 0..p.len() {
            assert_eq!(p.value(p.node(k)), p.values[k]);
        }
        let x: f64 = 0.4137;
        assert!((p.value(x) - x.exp()).abs() < 1e-11);
        assert!((p.eval(x, 1) - x.exp()).abs() < 1e-8);
        assert!((p.eval(x, 2) - x.exp()).abs() < 1e-5);
    }

    #[test]
    fn derivatives_match_divided_differences_of_the_interpolant() {
        let p = SampledProfile::<f64>::from_jets("sin", 0.0, 2.0, 17, |x| {
            let j = Jet::var(x, 3);
            j.compose(&[x.sin(), x.cos(), -x.sin()])
        });
        let x = 0.77;
        let h = 1e-6;
        for k in 0..4 {
            let dd = (p.eval(x + h, k) - p.eval(x - h, k)) / (2.0 * h);
            assert!((dd - p.eval(x, k + 1)).abs() < 1e-5 * (1.0 + dd.abs()), "order {k}");
        }
    }
}
