use crate::scalar::Scalar;

/// Coupling `g(u, v)` of the first equation with its partial derivatives.
pub trait Coupling<S: Scalar>: Send + Sync {
    fn g(&self, u: S, v: S) -> S;
    fn dg_du(&self, u: S, v: S) -> S;
    fn dg_dv(&self, u: S, v: S) -> S;
    fn name(&self) -> String;
}

/// `g(u, v) = −c (u^p − v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reaction {
    pub c: f64,
    pub power: u32,
}

impl Reaction {
    pub fn new(c: f64, power: u32) -> Self {
        Reaction { c, power }
    }
}

impl<S: Scalar> Coupling<S> for Reaction {
    fn g(&self, u: S, v: S) -> S {
        (pow(u, self.power) - v).scale(-self.c)
    }
    fn dg_du(&self, u: S, _v: S) -> S {
        pow(u, self.power - 1).scale(-self.c * self.power as f64)
    }
    fn dg_dv(&self, _u: S, _v: S) -> S {
        S::from_f64(self.c)
    }
    fn name(&self) -> String {
        format!("-{}*(u^{} - v)", self.c, self.power)
    }
}

/// `g(u, v) = −c u^p`, independent of `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Damping {
    pub c: f64,
    pub power: u32,
}

impl<S: Scalar> Coupling<S> for Damping {
    fn g(&self, u: S, _v: S) -> S {
        pow(u, self.power).scale(-self.c)
    }
    fn dg_du(&self, u: S, _v: S) -> S {
        pow(u, self.power - 1).scale(-self.c * self.power as f64)
    }
    fn dg_dv(&self, _u: S, _v: S) -> S {
        S::zero()
    }
    fn name(&self) -> String {
        format!("-{}*u^{}", self.c, self.power)
    }
}

/// `g(u, v) = u·v`
#[derive(Debug, Clone, Copy, Default)]
pub struct Product;

impl<S: Scalar> Coupling<S> for Product {
    fn g(&self, u: S, v: S) -> S {
        u * v
    }
    fn dg_du(&self, _u: S, v: S) -> S {
        v
    }
    fn dg_dv(&self, u: S, _v: S) -> S {
        u
    }
    fn name(&self) -> String {
        "u*v".into()
    }
}

/// Coupling built from three closures.
pub struct FnCoupling<G, Gu, Gv> {
    pub g: G,
    pub du: Gu,
    pub dv: Gv,
    pub label: String,
}

impl<S, G, Gu, Gv> Coupling<S> for FnCoupling<G, Gu, Gv>
where
    S: Scalar,
    G: Fn(S, S) -> S + Send + Sync,
    Gu: Fn(S, S) -> S + Send + Sync,
    Gv: Fn(S, S) -> S + Send + Sync,
{
    fn g(&self, u: S, v: S) -> S {
        (self.g)(u, v)
    }
    fn dg_du(&self, u: S, v: S) -> S {
        (self.du)(u, v)
    }
    fn dg_dv(&self, u: S, v: S) -> S {
        (self.dv)(u, v)
    }
    fn name(&self) -> String {
        self.label.clone()
    }
}

pub(crate) fn pow<S: Scalar>(u: S, p: u32) -> S {
    let mut r = S::one();
    for _ in 0..p {
        r *= u;
    }
    r
}
