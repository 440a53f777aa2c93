//! θ-scheme for `ζ_t − Δζ = A ζ + (h 1_ω, 0)` and its exact discrete adjoint.
//!
//! One step reads `M_{n+1} ζ^{n+1} = P_n ζ^n + dt·B(θh^{n+1} + (1−θ)h^n)` with
//! `M_{n+1} = I − θdt(Δ_h + A^{n+1})` and `P_n = I + (1−θ)dt(Δ_h + A^n)`.
//! The adjoint runs `χ^{n+½} = M_{n+1}^{-*} ψ^{n+1}`, `ψ^n = P_n^* χ^{n+½}`, so
//! `⟨ζ^{nt}, ψ^{nt}⟩ = ⟨ζ^0, ψ^0⟩ + dt Σ_m ⟨h^m, Φ₁^m⟩_ω` holds exactly with
//! the kernel `Φ^m = θχ^{m−½} + (1−θ)χ^{m+½}`.

use super::coeffs::CoefficientSet;
use super::field::{Field, FieldPair};
use super::grid::SpaceTimeGrid;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

type Block<S> = [S; 4];

#[inline]
fn inv2<S: Scalar>(m: Block<S>) -> Block<S> {
    let det = m[0] * m[3] - m[1] * m[2];
    let r = S::one() / det;
    [m[3] * r, -(m[1] * r), -(m[2] * r), m[0] * r]
}

#[inline]
fn mulv<S: Scalar>(m: &Block<S>, a: S, b: S) -> (S, S) {
    (m[0] * a + m[1] * b, m[2] * a + m[3] * b)
}

/// `mᵀ` applied, conjugated when `conj`.
#[inline]
fn mulv_t<S: Scalar>(m: &Block<S>, a: S, b: S, conj: bool) -> (S, S) {
    let c = |x: S| if conj { x.conj() } else { x };
    (c(m[0]) * a + c(m[2]) * b, c(m[1]) * a + c(m[3]) * b)
}

/// Per-step factorizations of `M_{n+1}` on a fixed grid.
#[derive(Debug, Clone)]
pub struct Stepper<S: Scalar> {
    pub grid: SpaceTimeGrid,
    coeffs: CoefficientSet<S>,
    /// `D'_j⁻¹` of the block Thomas elimination for every step
    dinv: Vec<Block<S>>,
    off: f64,
}

/// Adjoint levels `ψ^n` and the control kernel `Φ^m`.
#[derive(Debug, Clone)]
pub struct AdjointSolution<S: Scalar> {
    pub state: FieldPair<S>,
    pub kernel: FieldPair<S>,
}

/// Nodal mask of the grid nodes inside `omega`.
pub fn omega_mask(grid: &SpaceTimeGrid, omega: (f64, f64)) -> Vec<bool> {
    let (j0, j1) = grid.node_range(omega.0, omega.1);
    (0..grid.nx).map(|j| j >= j0 && j < j1).collect()
}

impl<S: Scalar> Stepper<S> {
    pub fn new(grid: &SpaceTimeGrid, coeffs: &CoefficientSet<S>) -> Result<Self> {
        grid.validate()?;
        if coeffs.grid() != grid {
            return Err(Error::Parameter("coefficients live on another grid".into()));
        }
        let (nx, nt) = (grid.nx, grid.nt);
        let dt = grid.dt();
        let dx = grid.dx();
        let th = grid.theta;
        let off = -th * dt / (dx * dx);
        let diag = 1.0 + 2.0 * th * dt / (dx * dx);
        let mut dinv = vec![[S::zero(); 4]; nt * nx];
        for n in 0..nt {
            let mut prev: Option<Block<S>> = None;
            for j in 0..nx {
                let a = coeffs.block(n + 1, j);
                let mut d = [
                    S::from_f64(diag) - a[0].scale(th * dt),
                    -a[1].scale(th * dt),
                    -a[2].scale(th * dt),
                    S::from_f64(diag) - a[3].scale(th * dt),
                ];
                if let Some(p) = prev {
                    for k in 0..4 {
                        d[k] -= p[k].scale(off * off);
                    }
                }
                let di = inv2(d);
                if !di.iter().all(|v| v.is_finite()) {
                    return Err(Error::Consistency(format!(
                        "singular step matrix at level {} node {j}",
                        n + 1
                    )));
                }
                dinv[n * nx + j] = di;
                prev = Some(di);
            }
        }
        Ok(Stepper {
            grid: *grid,
            coeffs: coeffs.clone(),
            dinv,
            off,
        })
    }

    pub fn coeffs(&self) -> &CoefficientSet<S> {
        &self.coeffs
    }

    /// Solves `M_{n+1} x = r` in place.
    fn solve_m(&self, n: usize, r1: &mut [S], r2: &mut [S]) {
        let nx = self.grid.nx;
        let c = self.off;
        let dinv = &self.dinv[n * nx..(n + 1) * nx];
        for j in 1..nx {
            let (a, b) = mulv(&dinv[j - 1], r1[j - 1], r2[j - 1]);
            r1[j] -= a.scale(c);
            r2[j] -= b.scale(c);
        }
        let (a, b) = mulv(&dinv[nx - 1], r1[nx - 1], r2[nx - 1]);
        r1[nx - 1] = a;
        r2[nx - 1] = b;
        for j in (0..nx - 1).rev() {
            let (a, b) = mulv(
                &dinv[j],
                r1[j] - r1[j + 1].scale(c),
                r2[j] - r2[j + 1].scale(c),
            );
            r1[j] = a;
            r2[j] = b;
        }
    }

    /// Solves `M_{n+1}ᵀ x = r` (or `M^*` when `conj`) in place.
    fn solve_mt(&self, n: usize, r1: &mut [S], r2: &mut [S], conj: bool) {
        let nx = self.grid.nx;
        let c = self.off;
        let dinv = &self.dinv[n * nx..(n + 1) * nx];
        for j in 1..nx {
            let (a, b) = mulv_t(&dinv[j - 1], r1[j - 1], r2[j - 1], conj);
            r1[j] -= a.scale(c);
            r2[j] -= b.scale(c);
        }
        let (a, b) = mulv_t(&dinv[nx - 1], r1[nx - 1], r2[nx - 1], conj);
        r1[nx - 1] = a;
        r2[nx - 1] = b;
        for j in (0..nx - 1).rev() {
            let (a, b) = mulv_t(
                &dinv[j],
                r1[j] - r1[j + 1].scale(c),
                r2[j] - r2[j + 1].scale(c),
                conj,
            );
            r1[j] = a;
            r2[j] = b;
        }
    }

    /// `out = P_n z` (or `P_n^*` / `P_nᵀ` when `adjoint`).
    fn apply_p(&self, n: usize, z1: &[S], z2: &[S], adjoint: Option<bool>) -> (Vec<S>, Vec<S>) {
        let nx = self.grid.nx;
        let w = (1.0 - self.grid.theta) * self.grid.dt();
        let mut o1 = z1.to_vec();
        let mut o2 = z2.to_vec();
        if w == 0.0 {
            return (o1, o2);
        }
        let k = w / (self.grid.dx() * self.grid.dx());
        for j in 0..nx {
            let l1 = if j > 0 { z1[j - 1] } else { S::zero() };
            let r1 = if j + 1 < nx { z1[j + 1] } else { S::zero() };
            let l2 = if j > 0 { z2[j - 1] } else { S::zero() };
            let r2 = if j + 1 < nx { z2[j + 1] } else { S::zero() };
            let a = self.coeffs.block(n, j);
            let (c1, c2) = match adjoint {
                None => mulv(&a, z1[j], z2[j]),
                Some(conj) => mulv_t(&a, z1[j], z2[j], conj),
            };
            o1[j] += (l1 + r1 - z1[j].scale(2.0)).scale(k) + c1.scale(w);
            o2[j] += (l2 + r2 - z2[j].scale(2.0)).scale(k) + c2.scale(w);
        }
        (o1, o2)
    }

    /// Runs levels `n0 → n1` from `init`. `h` (first component, masked) and
    /// `f` (both components, unmasked) enter at the θ-weighted level.
    pub fn forward_range(
        &self,
        n0: usize,
        n1: usize,
        init: (&[S], &[S]),
        h: Option<(&Field<S>, &[bool])>,
        f: Option<&FieldPair<S>>,
        out: &mut FieldPair<S>,
    ) {
        let nx = self.grid.nx;
        let dt = self.grid.dt();
        let th = self.grid.theta;
        out.first.row_mut(n0).copy_from_slice(init.0);
        out.second.row_mut(n0).copy_from_slice(init.1);
        for n in n0..n1 {
            let (mut r1, mut r2) = self.apply_p(n, out.first.row(n), out.second.row(n), None);
            if let Some((h, mask)) = h {
                for j in 0..nx {
                    if mask[j] {
                        r1[j] += (h.at(n + 1, j).scale(th) + h.at(n, j).scale(1.0 - th)).scale(dt);
                    }
                }
            }
            if let Some(f) = f {
                for j in 0..nx {
                    r1[j] += (f.first.at(n + 1, j).scale(th) + f.first.at(n, j).scale(1.0 - th))
                        .scale(dt);
                    r2[j] += (f.second.at(n + 1, j).scale(th) + f.second.at(n, j).scale(1.0 - th))
                        .scale(dt);
                }
            }
            self.solve_m(n, &mut r1, &mut r2);
            out.first.row_mut(n + 1).copy_from_slice(&r1);
            out.second.row_mut(n + 1).copy_from_slice(&r2);
        }
    }

    /// Runs the adjoint from `ψ^{n1} = fin` down to `n0`; fills `state` on
    /// levels `n0..=n1` and `kernel` on the same levels.
    pub fn adjoint_range(
        &self,
        n0: usize,
        n1: usize,
        fin: (&[S], &[S]),
        conj: bool,
        state: &mut FieldPair<S>,
        kernel: &mut FieldPair<S>,
    ) {
        let th = self.grid.theta;
        state.first.row_mut(n1).copy_from_slice(fin.0);
        state.second.row_mut(n1).copy_from_slice(fin.1);
        for v in kernel.first.row_mut(n1).iter_mut() {
            *v = S::zero();
        }
        for v in kernel.second.row_mut(n1).iter_mut() {
            *v = S::zero();
        }
        let nx = self.grid.nx;
        for n in (n0..n1).rev() {
            let mut c1 = state.first.row(n + 1).to_vec();
            let mut c2 = state.second.row(n + 1).to_vec();
            self.solve_mt(n, &mut c1, &mut c2, conj);
            // χ^{n+½} feeds Φ^{n+1} with weight θ and Φ^n with weight 1−θ
            for j in 0..nx {
                let k1 = kernel.first.at(n + 1, j) + c1[j].scale(th);
                let k2 = kernel.second.at(n + 1, j) + c2[j].scale(th);
                kernel.first.set(n + 1, j, k1);
                kernel.second.set(n + 1, j, k2);
                kernel.first.set(n, j, c1[j].scale(1.0 - th));
                kernel.second.set(n, j, c2[j].scale(1.0 - th));
            }
            let (p1, p2) = self.apply_p(n, &c1, &c2, Some(conj));
            state.first.row_mut(n).copy_from_slice(&p1);
            state.second.row_mut(n).copy_from_slice(&p2);
        }
    }
}

fn check_profiles<S: Scalar>(grid: &SpaceTimeGrid, a: &[S], b: &[S]) -> Result<()> {
    if a.len() != grid.nx || b.len() != grid.nx {
        return Err(Error::Parameter(format!(
            "profiles need {} interior values, got {} and {}",
            grid.nx,
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Forward solve on the whole horizon.
pub fn solve_forward<S: Scalar>(
    grid: &SpaceTimeGrid,
    coeffs: &CoefficientSet<S>,
    initial: (&[S], &[S]),
    source_h: &Field<S>,
    omega: (f64, f64),
) -> Result<FieldPair<S>> {
    check_profiles(grid, initial.0, initial.1)?;
    if source_h.grid != *grid {
        return Err(Error::Parameter("source lives on another grid".into()));
    }
    if !(omega.0 >= grid.x_lo && omega.1 <= grid.x_hi && omega.0 < omega.1) {
        return Err(Error::Geometry(format!(
            "omega ({}, {}) not inside ({}, {})",
            omega.0, omega.1, grid.x_lo, grid.x_hi
        )));
    }
    let st = Stepper::new(grid, coeffs)?;
    let mask = omega_mask(grid, omega);
    let mut out = FieldPair::zeros(grid);
    st.forward_range(0, grid.nt, initial, Some((source_h, &mask)), None, &mut out);
    Ok(out)
}

/// Forward solve with a full two-component forcing (no mask).
pub fn solve_forward_forced<S: Scalar>(
    grid: &SpaceTimeGrid,
    coeffs: &CoefficientSet<S>,
    initial: (&[S], &[S]),
    forcing: &FieldPair<S>,
) -> Result<FieldPair<S>> {
    check_profiles(grid, initial.0, initial.1)?;
    let st = Stepper::new(grid, coeffs)?;
    let mut out = FieldPair::zeros(grid);
    st.forward_range(0, grid.nt, initial, None, Some(forcing), &mut out);
    Ok(out)
}

/// Backward adjoint solve on the whole horizon.
pub fn solve_adjoint<S: Scalar>(
    grid: &SpaceTimeGrid,
    coeffs: &CoefficientSet<S>,
    final_data: (&[S], &[S]),
    conjugate: bool,
) -> Result<AdjointSolution<S>> {
    check_profiles(grid, final_data.0, final_data.1)?;
    if conjugate && !S::COMPLEX {
        return Err(Error::Precondition(
            "conjugated adjoint requested with real scalars".into(),
        ));
    }
    let st = Stepper::new(grid, coeffs)?;
    let mut state = FieldPair::zeros(grid);
    let mut kernel = FieldPair::zeros(grid);
    st.adjoint_range(0, grid.nt, final_data, conjugate, &mut state, &mut kernel);
    Ok(AdjointSolution { state, kernel })
}
