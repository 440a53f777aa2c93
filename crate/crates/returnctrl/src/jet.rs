//! Truncated Taylor series in one variable.
//!
//! A `Jet` stores `c[k] = f^(k)(x₀)/k!` for `k < n`. Arithmetic propagates the
//! coefficients exactly, so derivatives of closed-form profiles are obtained
//! without finite differences.

use crate::scalar::Scalar;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Maximum number of stored coefficients (derivative orders 0..JMAX-1).
pub const JMAX: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<S: Scalar> {
    n: usize,
    c: [S; JMAX],
}

impl<S: Scalar> Jet<S> {
    pub fn constant(x: S, n: usize) -> Self {
        assert!((1..=JMAX).contains(&n), "jet order {n} out of range");
        let mut c = [S::zero(); JMAX];
        c[0] = x;
        Jet { n, c }
    }

    /// Independent variable at `x`.
    pub fn var(x: S, n: usize) -> Self {
        let mut j = Self::constant(x, n);
        if n > 1 {
            j.c[1] = S::one();
        }
        j
    }

    pub fn from_coeffs(c: &[S]) -> Self {
        let mut j = Self::constant(c[0], c.len());
        j.c[..c.len()].copy_from_slice(c);
        j
    }

    /// Constant with the same truncation order as `self`.
    pub fn lift(&self, x: S) -> Self {
        Self::constant(x, self.n)
    }

    pub fn lift_f64(&self, x: f64) -> Self {
        Self::constant(S::from_f64(x), self.n)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> S {
        self.c[0]
    }

    pub fn coeff(&self, k: usize) -> S {
        if k < self.n {
            self.c[k]
        } else {
            S::zero()
        }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c[..self.n]
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> S {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.coeff(k).scale(fact)
    }

    /// Jet of the derivative; loses one order.
    pub fn deriv(&self) -> Self {
        let n = self.n.saturating_sub(1).max(1);
        let mut c = [S::zero(); JMAX];
        for k in 0..self.n - 1 {
            c[k] = self.c[k + 1].scale((k + 1) as f64);
        }
        Jet { n, c }
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut j = *self;
        j.n = n.min(self.n).max(1);
        for k in j.n..JMAX {
            j.c[k] = S::zero();
        }
        j
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut j = *self;
        for v in j.c[..j.n].iter_mut() {
            *v = v.scale(k);
        }
        j
    }

    pub fn mul_scalar(&self, k: S) -> Self {
        let mut j = *self;
        for v in j.c[..j.n].iter_mut() {
            *v *= k;
        }
        j
    }

    pub fn recip(&self) -> Self {
        let n = self.n;
        let mut b = [S::zero(); JMAX];
        let inv = S::one() / self.c[0];
        b[0] = inv;
        for k in 1..n {
            let mut s = S::zero();
            for j in 1..=k {
                s += self.c[j] * b[k - j];
            }
            b[k] = -(s * inv);
        }
        Jet { n, c: b }
    }

    pub fn exp(&self) -> Self {
        let n = self.n;
        let mut b = [S::zero(); JMAX];
        b[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = S::zero();
            for j in 1..=k {
                s += (self.c[j] * b[k - j]).scale(j as f64);
            }
            b[k] = s.scale(1.0 / k as f64);
        }
        Jet { n, c: b }
    }

    pub fn powi(&self, m: u32) -> Self {
        let mut r = self.lift(S::one());
        for _ in 0..m {
            r = r * *self;
        }
        r
    }

    /// `f ∘ self` where `f` is given by its derivatives at `self.value()`.
    pub fn compose(&self, f_derivs: &[S]) -> Self {
        let n = self.n;
        let mut h = *self;
        h.c[0] = S::zero();
        let mut out = self.lift(S::zero());
        let mut power = self.lift(S::one());
        let mut fact = 1.0;
        for (k, &d) in f_derivs.iter().enumerate().take(n) {
            if k > 0 {
                power = power * h;
                fact *= k as f64;
            }
            out = out + power.mul_scalar(d.scale(1.0 / fact));
        }
        out
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.n.min(o.n);
        let mut c = [S::zero(); JMAX];
        for k in 0..n {
            c[k] = self.c[k] + o.c[k];
        }
        Jet { n, c }
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let n = self.n.min(o.n);
        let mut c = [S::zero(); JMAX];
        for k in 0..n {
            c[k] = self.c[k] - o.c[k];
        }
        Jet { n, c }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let n = self.n.min(o.n);
        let mut c = [S::zero(); JMAX];
        for k in 0..n {
            let mut s = S::zero();
            for j in 0..=k {
                s += self.c[j] * o.c[k - j];
            }
            c[k] = s;
        }
        Jet { n, c }
    }
}

impl<S: Scalar> Div for Jet<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = self.n.min(o.n);
        let mut q = [S::zero(); JMAX];
        let inv = S::one() / o.c[0];
        for k in 0..n {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= o.c[j] * q[k - j];
            }
            q[k] = s * inv;
        }
        Jet { n, c: q }
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<S: Scalar> Add<f64> for Jet<S> {
    type Output = Self;
    fn add(mut self, o: f64) -> Self {
        self.c[0] += S::from_f64(o);
        self
    }
}

impl<S: Scalar> Sub<f64> for Jet<S> {
    type Output = Self;
    fn sub(mut self, o: f64) -> Self {
        self.c[0] -= S::from_f64(o);
        self
    }
}

impl<S: Scalar> Mul<f64> for Jet<S> {
    type Output = Self;
    fn mul(self, o: f64) -> Self {
        self.scale(o)
    }
}

impl<S: Scalar> Div<f64> for Jet<S> {
    type Output = Self;
    fn div(self, o: f64) -> Self {
        self.scale(1.0 / o)
    }
}

impl<S: Scalar> Add<Jet<S>> for f64 {
    type Output = Jet<S>;
    fn add(self, o: Jet<S>) -> Jet<S> {
        o + self
    }
}

impl<S: Scalar> Sub<Jet<S>> for f64 {
    type Output = Jet<S>;
    fn sub(self, o: Jet<S>) -> Jet<S> {
        -o + self
    }
}

impl<S: Scalar> Mul<Jet<S>> for f64 {
    type Output = Jet<S>;
    fn mul(self, o: Jet<S>) -> Jet<S> {
        o.scale(self)
    }
}

impl<S: Scalar> Div<Jet<S>> for f64 {
    type Output = Jet<S>;
    fn div(self, o: Jet<S>) -> Jet<S> {
        o.recip().scale(self)
    }
}
