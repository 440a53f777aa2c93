//! The penalized dual problem on the control window.
//!
//! With `Λφ = ζ(t2)` for the state started from zero at `t1` and driven by
//! `h = W Φ₁[φ]`, the minimizer of
//! `J(φ) = ½⟨Λφ, φ⟩ + ε/2 ‖φ‖² + Re⟨b, φ⟩` (with `b` the free state at `t2`)
//! gives the control whose state satisfies `ζ(t2) = −εφ`. The discrete
//! duality of the θ-scheme makes `Λ` self-adjoint and nonnegative for the
//! `dx`-weighted inner product, so plain conjugate gradient applies.

use crate::error::{Error, Result};
use crate::hum::weights::CarlemanWeight;
use crate::pde::{CoefficientSet, Field, FieldPair, SpaceTimeGrid, Stepper};
use crate::scalar::Scalar;

/// Attainable residual per unit `‖φ‖` with `‖Λ‖ = 1`.
pub const ROUNDING_FLOOR: f64 = 8.0 * f64::EPSILON;

#[derive(Debug, Clone)]
pub struct CgOutcome<S: Scalar> {
    pub phi: Vec<S>,
    pub iterations: usize,
    /// final relative residual `‖(Λ+ε)φ + b‖ / ‖b‖`
    pub residual: f64,
    /// stopped at the rounding floor `ROUNDING_FLOOR·‖φ‖` above `tol·‖b‖`
    pub floor_limited: bool,
    pub history: Vec<f64>,
}

/// `Λ` on a fixed grid, coefficient set and weight. Vectors stack the two
/// components: `[φ₁; φ₂]`, length `2·nx`.
#[derive(Debug, Clone)]
pub struct DualOperator<S: Scalar> {
    stepper: Stepper<S>,
    weight: Field<f64>,
    mask: Vec<bool>,
    pub n1: usize,
    pub n2: usize,
    conj: bool,
    /// factor applied to the weight so that `‖Λ‖ = 1`
    pub scale: f64,
    state: FieldPair<S>,
    kernel: FieldPair<S>,
    fwd: FieldPair<S>,
}

impl<S: Scalar> DualOperator<S> {
    /// Builds the operator with unit weight scale; see [`Self::normalize`].
    pub fn new(grid: &SpaceTimeGrid, coeffs: &CoefficientSet<S>, weight: &CarlemanWeight) -> Result<Self> {
        coeffs.validate()?;
        if weight.w.grid != *grid {
            return Err(Error::Parameter("weight lives on another grid".into()));
        }
        let (n1, n2) = grid.level_range(weight.window.t1, weight.window.t2);
        if n2 < n1 + 2 {
            return Err(Error::Geometry(format!(
                "control window ({}, {}) holds no interior time level",
                weight.window.t1, weight.window.t2
            )));
        }
        Ok(DualOperator {
            stepper: Stepper::new(grid, coeffs)?,
            weight: weight.w.clone(),
            mask: vec![true; grid.nx],
            n1,
            n2,
            conj: S::COMPLEX,
            scale: 1.0,
            state: FieldPair::zeros(grid),
            kernel: FieldPair::zeros(grid),
            fwd: FieldPair::zeros(grid),
        })
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.stepper.grid
    }

    pub fn dim(&self) -> usize {
        2 * self.grid().nx
    }

    pub fn stepper(&self) -> &Stepper<S> {
        &self.stepper
    }

    /// `Re⟨a, b⟩` over both components.
    pub fn dot(&self, a: &[S], b: &[S]) -> f64 {
        let dx = self.grid().dx();
        a.iter().zip(b).map(|(x, y)| (*x * y.conj()).re()).sum::<f64>() * dx
    }

    pub fn norm(&self, a: &[S]) -> f64 {
        self.dot(a, a).sqrt()
    }

    /// Control `h = scale·W·Φ₁[φ]`, zero off the open window.
    pub fn control(&mut self, phi: &[S]) -> Field<S> {
        let nx = self.grid().nx;
        self.stepper.adjoint_range(
            self.n1,
            self.n2,
            (&phi[..nx], &phi[nx..]),
            self.conj,
            &mut self.state,
            &mut self.kernel,
        );
        let mut h = Field::zeros(self.grid());
        for n in self.n1 + 1..self.n2 {
            for j in 0..nx {
                let w = self.weight.at(n, j);
                if w > 0.0 {
                    h.set(n, j, self.kernel.first.at(n, j).scale(self.scale * w));
                }
            }
        }
        h
    }

    /// `Λφ`.
    pub fn apply(&mut self, phi: &[S]) -> Vec<S> {
        let nx = self.grid().nx;
        let h = self.control(phi);
        let zero = vec![S::zero(); nx];
        self.stepper.forward_range(
            self.n1,
            self.n2,
            (&zero, &zero),
            Some((&h, &self.mask)),
            None,
            &mut self.fwd,
        );
        let mut out = self.fwd.first.row(self.n2).to_vec();
        out.extend_from_slice(self.fwd.second.row(self.n2));
        out
    }

    /// Rescales the weight so that the largest eigenvalue of `Λ` is one.
    /// Returns the eigenvalue found for the previous scale.
    pub fn normalize(&mut self) -> Result<f64> {
        let nx = self.grid().nx;
        let mut v: Vec<S> = (0..2 * nx)
            .map(|k| S::from_f64(1.0 + 0.25 * ((k % nx) as f64 * 0.7).sin()))
            .collect();
        let n0 = self.norm(&v);
        v.iter_mut().for_each(|x| *x = x.scale(1.0 / n0));
        let mut lam = 0.0;
        for it in 0..200 {
            let w = self.apply(&v);
            let next = self.dot(&w, &v);
            let nw = self.norm(&w);
            if !(nw > 0.0) || !nw.is_finite() {
                return Err(Error::WeightConfig(
                    "dual operator vanishes: the weighted window sees no control".into(),
                ));
            }
            v = w.into_iter().map(|x| x.scale(1.0 / nw)).collect();
            if it > 3 && (next - lam).abs() <= 1e-12 * next {
                lam = next;
                break;
            }
            lam = next;
        }
        if !(lam > 0.0) {
            return Err(Error::WeightConfig("dual operator has no positive spectrum".into()));
        }
        self.scale /= lam;
        Ok(lam)
    }

    /// `(Λ + ε)φ + b`.
    pub fn gradient(&mut self, phi: &[S], b: &[S], eps: f64) -> Vec<S> {
        let lp = self.apply(phi);
        lp.iter()
            .zip(phi)
            .zip(b)
            .map(|((l, p), b)| *l + p.scale(eps) + *b)
            .collect()
    }

    pub fn objective(&mut self, phi: &[S], b: &[S], eps: f64) -> f64 {
        let lp = self.apply(phi);
        0.5 * self.dot(&lp, phi) + 0.5 * eps * self.dot(phi, phi) + self.dot(b, phi)
    }

    /// Conjugate gradient on `(Λ + ε)φ = −b`, restarted from the true
    /// residual when the recurrence drifts. Stops at `‖r‖ ≤ tol·‖b‖`, or at
    /// the rounding floor `ROUNDING_FLOOR·‖φ‖` when that is larger: applying
    /// `Λ` to `φ ~ b/ε` loses about `u‖φ‖` (`u` the unit roundoff), so for
    /// small `ε` the relative residual cannot reach `tol`. Assumes `‖Λ‖ = 1`,
    /// see [`Self::normalize`].
    pub fn solve(&mut self, b: &[S], eps: f64, tol: f64, max_iter: usize) -> Result<CgOutcome<S>> {
        self.solve_from(b, eps, tol, max_iter, None)
    }

    /// As [`Self::solve`], starting from `guess`.
    pub fn solve_from(
        &mut self,
        b: &[S],
        eps: f64,
        tol: f64,
        max_iter: usize,
        guess: Option<&[S]>,
    ) -> Result<CgOutcome<S>> {
        let dim = self.dim();
        let bn = self.norm(b);
        let mut phi = vec![S::zero(); dim];
        if bn == 0.0 {
            return Ok(CgOutcome {
                phi,
                iterations: 0,
                residual: 0.0,
                floor_limited: false,
                history: vec![0.0],
            });
        }
        let mut r: Vec<S> = match guess {
            Some(g) if g.len() == dim => {
                phi.copy_from_slice(g);
                self.gradient(&phi, b, eps).into_iter().map(|x| -x).collect()
            }
            _ => b.iter().map(|x| -*x).collect(),
        };
        let mut history = vec![self.norm(&r) / bn];
        let mut it = 0;
        for _restart in 0..4 {
            let mut p = r.clone();
            let mut rr = self.dot(&r, &r);
            while rr.sqrt() > (tol * bn).max(ROUNDING_FLOOR * self.norm(&phi)) {
                if it >= max_iter {
                    return Err(Error::Convergence {
                        iterations: it,
                        residual: rr.sqrt() / bn,
                        history,
                    });
                }
                let mut ap = self.apply(&p);
                ap.iter_mut().zip(&p).for_each(|(a, x)| *a += x.scale(eps));
                let pap = self.dot(&ap, &p);
                if !(pap > 0.0) || !pap.is_finite() {
                    return Err(Error::Convergence {
                        iterations: it,
                        residual: rr.sqrt() / bn,
                        history,
                    });
                }
                let alpha = rr / pap;
                for k in 0..dim {
                    phi[k] += p[k].scale(alpha);
                    r[k] -= ap[k].scale(alpha);
                }
                let next = self.dot(&r, &r);
                let beta = next / rr;
                for k in 0..dim {
                    p[k] = r[k] + p[k].scale(beta);
                }
                rr = next;
                it += 1;
                history.push(rr.sqrt() / bn);
            }
            let g = self.gradient(&phi, b, eps);
            let rn = self.norm(&g);
            let pn = self.norm(&phi);
            if rn <= (tol * bn).max(ROUNDING_FLOOR * pn) {
                return Ok(CgOutcome {
                    phi,
                    iterations: it,
                    residual: rn / bn,
                    floor_limited: rn > tol * bn,
                    history,
                });
            }
            r = g.into_iter().map(|x| -x).collect();
        }
        let g = self.gradient(&phi, b, eps);
        Err(Error::Convergence {
            iterations: it,
            residual: self.norm(&g) / bn,
            history,
        })
    }

    /// Dense matrix of `Λ` in the nodal basis, column by column
    /// (`out[k]` is `Λe_k`).
    pub fn dense(&mut self) -> Vec<Vec<S>> {
        let dim = self.dim();
        (0..dim)
            .map(|k| {
                let mut e = vec![S::zero(); dim];
                e[k] = S::one();
                self.apply(&e)
            })
            .collect()
    }
}
