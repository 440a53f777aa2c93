use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::grid::SpaceTimeGrid;

/// Grid function with `(nt + 1) × nx` samples, row-major in time.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<S: Scalar> {
    pub grid: SpaceTimeGrid,
    pub data: Vec<S>,
}

impl<S: Scalar> Field<S> {
    pub fn zeros(grid: &SpaceTimeGrid) -> Self {
        Field {
            grid: *grid,
            data: vec![S::zero(); grid.levels() * grid.nx],
        }
    }

    pub fn from_fn<F: Fn(f64, f64) -> S>(grid: &SpaceTimeGrid, f: F) -> Self {
        let mut out = Self::zeros(grid);
        for n in 0..grid.levels() {
            let t = grid.t(n);
            for j in 0..grid.nx {
                out.data[n * grid.nx + j] = f(t, grid.x(j));
            }
        }
        out
    }

    pub fn from_data(grid: &SpaceTimeGrid, data: Vec<S>) -> Result<Self> {
        if data.len() != grid.levels() * grid.nx {
            return Err(Error::Parameter(format!(
                "field has {} samples, grid needs {}",
                data.len(),
                grid.levels() * grid.nx
            )));
        }
        Ok(Field { grid: *grid, data })
    }

    pub fn nx(&self) -> usize {
        self.grid.nx
    }

    pub fn at(&self, n: usize, j: usize) -> S {
        self.data[n * self.grid.nx + j]
    }

    pub fn set(&mut self, n: usize, j: usize, v: S) {
        let nx = self.grid.nx;
        self.data[n * nx + j] = v;
    }

    pub fn row(&self, n: usize) -> &[S] {
        let nx = self.grid.nx;
        &self.data[n * nx..(n + 1) * nx]
    }

    pub fn row_mut(&mut self, n: usize) -> &mut [S] {
        let nx = self.grid.nx;
        &mut self.data[n * nx..(n + 1) * nx]
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Space-time `L²` norm with weight `dt·dx`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.data.iter().map(|v| v.norm_sqr()).sum();
        (s * self.grid.dt() * self.grid.dx()).sqrt()
    }

    /// `L²(Ω)` norm of level `n`.
    pub fn level_norm(&self, n: usize) -> f64 {
        l2(self.row(n), self.grid.dx())
    }

    pub fn map<F: Fn(S) -> S>(&self, f: F) -> Self {
        Field {
            grid: self.grid,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map<F: Fn(S, S) -> S>(&self, other: &Self, f: F) -> Self {
        assert_eq!(self.data.len(), other.data.len());
        Field {
            grid: self.grid,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == S::zero())
    }
}

/// Two-component field `(ζ₁, ζ₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPair<S: Scalar> {
    pub first: Field<S>,
    pub second: Field<S>,
}

impl<S: Scalar> FieldPair<S> {
    pub fn zeros(grid: &SpaceTimeGrid) -> Self {
        FieldPair {
            first: Field::zeros(grid),
            second: Field::zeros(grid),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.first.sup_norm().max(self.second.sup_norm())
    }

    /// `‖(ζ₁, ζ₂)(t_n)‖_{L²}`
    pub fn level_norm(&self, n: usize) -> f64 {
        self.first.level_norm(n).hypot(self.second.level_norm(n))
    }

    pub fn final_norm(&self) -> f64 {
        self.level_norm(self.first.grid.nt)
    }

    pub fn diff_sup(&self, other: &Self) -> f64 {
        let d = |a: &Field<S>, b: &Field<S>| {
            a.data
                .iter()
                .zip(&b.data)
                .fold(0.0f64, |m, (&x, &y)| m.max((x - y).abs()))
        };
        d(&self.first, &other.first).max(d(&self.second, &other.second))
    }
}

/// Discrete `L²` norm with node weight `dx`.
pub fn l2<S: Scalar>(v: &[S], dx: f64) -> f64 {
    (v.iter().map(|x| x.norm_sqr()).sum::<f64>() * dx).sqrt()
}

/// `Σ a_j · conj(b_j) · dx`
pub fn inner<S: Scalar>(a: &[S], b: &[S], dx: f64) -> S {
    a.iter().zip(b).map(|(&x, &y)| x * y.conj()).sum::<S>().scale(dx)
}
