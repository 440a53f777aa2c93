//! Empirical observability ratios `‖φ(0)‖² / ∬_{(0,T)×ω₀} |φ₁|²`.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pde::{omega_mask, CoefficientSet, FieldPair, SpaceTimeGrid, Stepper};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize)]
pub struct ObservabilityReport {
    pub n_samples: usize,
    pub seed: u64,
    pub omega0: (f64, f64),
    /// per-sample ratios in sample order; `+∞` when nothing is observed
    pub ratios: Vec<f64>,
    pub max: f64,
    pub min: f64,
    pub median: f64,
    pub infinite_count: usize,
    /// some final datum is invisible on `ω₀`
    pub diverged: bool,
}

/// Ratio for one final datum. Zero data is rejected.
pub fn observability_ratio<S: Scalar>(
    stepper: &Stepper<S>,
    omega0: (f64, f64),
    final_data: (&[S], &[S]),
) -> Result<f64> {
    let g = stepper.grid;
    let dx = g.dx();
    let e: f64 = final_data
        .0
        .iter()
        .chain(final_data.1)
        .map(|v| v.norm_sqr())
        .sum::<f64>()
        * dx;
    if !(e > 0.0) {
        return Err(Error::Precondition("zero adjoint final datum (ratio 0/0)".into()));
    }
    let mut state = FieldPair::zeros(&g);
    let mut kernel = FieldPair::zeros(&g);
    stepper.adjoint_range(0, g.nt, final_data, S::COMPLEX, &mut state, &mut kernel);
    let mask = omega_mask(&g, omega0);
    let num: f64 = state
        .first
        .row(0)
        .iter()
        .chain(state.second.row(0))
        .map(|v| v.norm_sqr())
        .sum::<f64>()
        * dx;
    // trapezoid in time over the adjoint levels
    let mut den = 0.0;
    for n in 0..=g.nt {
        let w = if n == 0 || n == g.nt { 0.5 } else { 1.0 };
        let row: f64 = state
            .first
            .row(n)
            .iter()
            .zip(&mask)
            .filter(|(_, m)| **m)
            .map(|(v, _)| v.norm_sqr())
            .sum();
        den += w * row;
    }
    den *= g.dt() * dx;
    Ok(if den > 0.0 { num / den } else { f64::INFINITY })
}

fn sample<S: Scalar>(nx: usize, dx: f64, seed: u64, index: usize) -> (Vec<S>, Vec<S>) {
    let mut rng =
        Xoshiro256PlusPlus::seed_from_u64(seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
    let mut draw = || {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = if S::COMPLEX { StandardNormal.sample(&mut rng) } else { 0.0 };
        S::from_parts(re, im)
    };
    let mut a: Vec<S> = (0..nx).map(|_| draw()).collect();
    let b: Vec<S> = (0..nx).map(|_| draw()).collect();
    // odd samples carry only the second component, the one seen through
    // the coupling alone
    if index % 2 == 1 {
        a.iter_mut().for_each(|v| *v = S::zero());
    }
    let n = (a.iter().chain(&b).map(|v| v.norm_sqr()).sum::<f64>() * dx).sqrt();
    let k = 1.0 / n;
    (
        a.into_iter().map(|v| v.scale(k)).collect(),
        b.into_iter().map(|v| v.scale(k)).collect(),
    )
}

/// Ratios for `n_samples` seeded unit final data. Sample `i` depends only on
/// `(seed, i)`, so a larger run extends a smaller one.
pub fn estimate_observability<S: Scalar>(
    grid: &SpaceTimeGrid,
    coeffs: &CoefficientSet<S>,
    omega0: (f64, f64),
    n_samples: usize,
    seed: u64,
) -> Result<ObservabilityReport> {
    if n_samples == 0 {
        return Err(Error::Parameter("n_samples must be at least 1".into()));
    }
    if !(omega0.0 >= grid.x_lo && omega0.1 <= grid.x_hi && omega0.0 < omega0.1) {
        return Err(Error::Geometry(format!(
            "omega0 ({}, {}) not inside ({}, {})",
            omega0.0, omega0.1, grid.x_lo, grid.x_hi
        )));
    }
    let st = Stepper::new(grid, coeffs)?;
    let ratios: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let (a, b) = sample::<S>(grid.nx, grid.dx(), seed, i);
            observability_ratio(&st, omega0, (&a, &b))
        })
        .collect::<Result<_>>()?;
    let mut sorted = ratios.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let infinite_count = ratios.iter().filter(|r| r.is_infinite()).count();
    Ok(ObservabilityReport {
        n_samples,
        seed,
        omega0,
        max: *sorted.last().unwrap(),
        min: sorted[0],
        median: sorted[sorted.len() / 2],
        infinite_count,
        diverged: infinite_count > 0,
        ratios,
    })
}
