use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform space-time grid on `(0, T) × (x_lo, x_hi)` with `nx` interior
/// nodes and `nt` time steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub nx: usize,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub nt: usize,
    pub theta: f64,
}

impl SpaceTimeGrid {
    pub fn new(x_lo: f64, x_hi: f64, nx: usize, t_final: f64, nt: usize, theta: f64) -> Result<Self> {
        let g = SpaceTimeGrid {
            x_lo,
            x_hi,
            nx,
            t_final,
            nt,
            theta,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 3 || self.nt < 2 {
            return Err(Error::Parameter(format!(
                "grid needs nx >= 3 and nt >= 2, got nx={} nt={}",
                self.nx, self.nt
            )));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::Parameter(format!("horizon must be positive, got {}", self.t_final)));
        }
        if !(self.x_lo < self.x_hi) {
            return Err(Error::Parameter(format!(
                "empty interval ({}, {})",
                self.x_lo, self.x_hi
            )));
        }
        if !(0.5..=1.0).contains(&self.theta) {
            return Err(Error::Parameter(format!("theta must lie in [1/2, 1], got {}", self.theta)));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.nx + 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.nt as f64
    }

    /// Interior node `j = 0..nx`.
    pub fn x(&self, j: usize) -> f64 {
        self.x_lo + (j + 1) as f64 * self.dx()
    }

    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dt()
    }

    pub fn levels(&self) -> usize {
        self.nt + 1
    }

    /// Node range `[j0, j1)` of the interior nodes inside `[a, b]`, with
    /// endpoints snapped to the nearest node.
    pub fn node_range(&self, a: f64, b: f64) -> (usize, usize) {
        let dx = self.dx();
        let lo = ((a - self.x_lo) / dx).round() as i64 - 1;
        let hi = ((b - self.x_lo) / dx).round() as i64 - 1;
        let lo = lo.clamp(0, self.nx as i64) as usize;
        let hi = (hi + 1).clamp(0, self.nx as i64) as usize;
        (lo, hi.max(lo))
    }

    /// Step range `[n0, n1]` of the levels inside `[a, b]`, snapped.
    pub fn level_range(&self, a: f64, b: f64) -> (usize, usize) {
        let dt = self.dt();
        let n0 = ((a / dt).round() as i64).clamp(0, self.nt as i64) as usize;
        let n1 = ((b / dt).round() as i64).clamp(0, self.nt as i64) as usize;
        (n0, n1.max(n0))
    }
}
