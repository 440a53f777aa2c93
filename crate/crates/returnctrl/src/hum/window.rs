//! Control window selection from a nonnegative indicator field.

use crate::error::{Error, Result};
use crate::pde::{Field, SpaceTimeGrid, Window};

/// Default threshold of [`select_window`], relative to the field maximum.
pub const WINDOW_LEVEL: f64 = 1e-3;

/// Largest grid-aligned box `[t(n0), t(n1)] × [x(j0), x(j1)]` inside
/// `{F ≥ level·max F}`, by area in grid cells.
pub fn select_window(f: &Field<f64>, level: f64) -> Result<Window> {
    let g: SpaceTimeGrid = f.grid;
    let best = f.data.iter().cloned().fold(0.0f64, f64::max);
    if !(best > 0.0) {
        return Err(Error::CouplingDegeneracy(
            "window indicator vanishes on the grid".into(),
        ));
    }
    let thr = level * best;
    // largest rectangle of admissible nodes, histogram sweep over levels
    let nx = g.nx;
    let mut height = vec![0usize; nx];
    let mut pick = (0usize, 0usize, 0usize, 0usize);
    let mut area = 0usize;
    for n in 0..g.levels() {
        for j in 0..nx {
            height[j] = if f.at(n, j) >= thr { height[j] + 1 } else { 0 };
        }
        let mut stack: Vec<usize> = Vec::new();
        for j in 0..=nx {
            let hj = if j < nx { height[j] } else { 0 };
            while let Some(&top) = stack.last() {
                if height[top] < hj {
                    break;
                }
                stack.pop();
                let h = height[top];
                let left = stack.last().map_or(0, |&l| l + 1);
                // cells between nodes: (h − 1) steps by (j − left − 1) gaps
                let a = h.saturating_sub(1) * (j - left).saturating_sub(1);
                if h > 0 && a > area {
                    area = a;
                    pick = (n + 1 - h, n, left, j - 1);
                }
            }
            stack.push(j);
        }
    }
    let (n0, n1, lo, hi) = pick;
    if area == 0 || n1 < n0 + 2 {
        return Err(Error::CouplingDegeneracy(format!(
            "no admissible window with an interior level and two nodes at level {level}"
        )));
    }
    // node_range rounds, so a quarter-cell pad keeps the end nodes
    let q = 0.25 * g.dx();
    Ok(Window {
        t1: g.t(n0),
        t2: g.t(n1),
        x_lo: g.x(lo) - q,
        x_hi: g.x(hi) + q,
    })
}
