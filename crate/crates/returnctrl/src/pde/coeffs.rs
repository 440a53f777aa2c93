use serde::Serialize;

use super::field::Field;
use super::grid::SpaceTimeGrid;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Control window `(t1, t2) × ω₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct Window {
    pub t1: f64,
    pub t2: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl Window {
    pub fn omega0(&self) -> (f64, f64) {
        (self.x_lo, self.x_hi)
    }
}

/// Coefficients `a_ij(t, x)` of the linear system.
#[derive(Debug, Clone)]
pub struct CoefficientSet<S: Scalar> {
    pub a11: Field<S>,
    pub a12: Field<S>,
    pub a21: Field<S>,
    pub a22: Field<S>,
    pub m_bar: f64,
    pub window: Option<Window>,
}

impl<S: Scalar> CoefficientSet<S> {
    pub fn zeros(grid: &SpaceTimeGrid) -> Self {
        CoefficientSet {
            a11: Field::zeros(grid),
            a12: Field::zeros(grid),
            a21: Field::zeros(grid),
            a22: Field::zeros(grid),
            m_bar: 1.0,
            window: None,
        }
    }

    /// Constant coefficients.
    pub fn constant(grid: &SpaceTimeGrid, a: [[S; 2]; 2]) -> Self {
        let f = |v: S| Field::from_fn(grid, |_, _| v);
        let m = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        CoefficientSet {
            a11: f(a[0][0]),
            a12: f(a[0][1]),
            a21: f(a[1][0]),
            a22: f(a[1][1]),
            m_bar: m.max(1.0),
            window: None,
        }
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.a11.grid
    }

    /// `[a11, a12, a21, a22]` at level `n`, node `j`.
    #[inline]
    pub fn block(&self, n: usize, j: usize) -> [S; 4] {
        [
            self.a11.at(n, j),
            self.a12.at(n, j),
            self.a21.at(n, j),
            self.a22.at(n, j),
        ]
    }

    pub fn sup_norm(&self) -> f64 {
        [&self.a11, &self.a12, &self.a21, &self.a22]
            .iter()
            .map(|f| f.sup_norm())
            .fold(0.0, f64::max)
    }

    /// Lower bound of `a21` (real) or `|Im a21|` (complex) on the window.
    pub fn window_lower_bound(&self) -> Option<f64> {
        let w = self.window?;
        let g = self.grid();
        let (n0, n1) = g.level_range(w.t1, w.t2);
        let (j0, j1) = g.node_range(w.x_lo, w.x_hi);
        let mut lo = f64::INFINITY;
        for n in n0..=n1 {
            for j in j0..j1 {
                let a = self.a21.at(n, j);
                let v = if S::COMPLEX { a.im().abs() } else { a.re() };
                lo = lo.min(v);
            }
        }
        Some(lo)
    }

    /// Checks `|a_ij| ≤ M̄` and the window bound `≥ 1/M̄`.
    pub fn validate(&self) -> Result<()> {
        let g = *self.grid();
        for f in [&self.a12, &self.a21, &self.a22] {
            if f.grid != g {
                return Err(Error::Parameter("coefficient fields on different grids".into()));
            }
        }
        let sup = self.sup_norm();
        if !(sup <= self.m_bar) {
            return Err(Error::Consistency(format!(
                "coefficient bound violated: max |a_ij| = {sup:.4e} > M_bar = {:.4e}",
                self.m_bar
            )));
        }
        if let Some(lo) = self.window_lower_bound() {
            if !(lo >= 1.0 / self.m_bar) {
                return Err(Error::CouplingDegeneracy(format!(
                    "a21 lower bound {lo:.4e} on the window is below 1/M_bar = {:.4e}",
                    1.0 / self.m_bar
                )));
            }
        }
        Ok(())
    }
}
