//! Finite-difference eigenvalue oracle.
//!
//! `-psi'' + V psi = E psi` is discretized with the three-point Laplacian on
//! `N` interior nodes of `[-a, a]` (`h = 2a / (N + 1)`, Dirichlet walls).
//! Each node carries the average of `V` over its cell, and grid sizes are
//! nudged so that `-b`, `0` and `b` fall on nodes; with both, the scheme is
//! second order even though `V` jumps. Eigenvalues come from Sturm-sequence
//! bisection and are Richardson-extrapolated over a halving ladder.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{PotentialGeometry, SpectrumResult};

pub const MIN_GRID_POINTS: usize = 16;
/// Bisection stops at this absolute width (or when the midpoint stops moving).
pub const BISECTION_WIDTH: f64 = 1e-10;
/// Default analytic/oracle partner tolerance.
pub const PARTNER_TOLERANCE: f64 = 1e-3;
/// Largest upward nudge tried when aligning a grid.
const MAX_ALIGN_SHIFT: usize = 100_000;

/// Symmetric tridiagonal matrix with constant off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub offdiag: f64,
    pub h: f64,
    pub n_points: usize,
}

impl TridiagonalOperator {
    /// Gershgorin interval containing every eigenvalue.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.offdiag.abs();
        let lo = self.diag.iter().copied().fold(f64::INFINITY, f64::min) - r;
        let hi = self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max) + r;
        (lo, hi)
    }
}

/// Mean of `V` over `[lo, hi]` (inside the walls).
fn cell_average(lo: f64, hi: f64, geom: &PotentialGeometry) -> f64 {
    let overlap = |a: f64, b: f64| (hi.min(b) - lo.max(a)).max(0.0);
    let b = geom.b();
    geom.v0() * (overlap(0.0, b) - overlap(-b, 0.0)) / (hi - lo)
}

pub fn build_operator(geom: &PotentialGeometry, n: usize) -> Result<TridiagonalOperator> {
    if n < MIN_GRID_POINTS {
        return Err(Error::GridTooSmall { n, min: MIN_GRID_POINTS });
    }
    let a = geom.a();
    let h = 2.0 * a / (n + 1) as f64;
    let inv_h2 = 1.0 / (h * h);
    let diag = (1..=n)
        .map(|i| {
            let x = -a + i as f64 * h;
            2.0 * inv_h2 + cell_average(x - 0.5 * h, x + 0.5 * h, geom)
        })
        .collect();
    Ok(TridiagonalOperator { diag, offdiag: -inv_h2, h, n_points: n })
}

fn is_near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0)
}

/// Smallest `N' >= n` whose grid has nodes at `-b`, `0` and `b`; `n` itself
/// when no such size exists within reach (incommensurate `a`, `b`).
pub fn aligned_grid_size(geom: &PotentialGeometry, n: usize) -> usize {
    let (a, d) = (geom.a(), geom.d());
    (n..n + MAX_ALIGN_SHIFT)
        .find(|&m| {
            let cells_per_unit = (m + 1) as f64 / (2.0 * a);
            is_near_integer(a * cells_per_unit) && is_near_integer(d * cells_per_unit)
        })
        .unwrap_or(n)
}

/// `levels` aligned sizes with `h` halving at each step, the finest one
/// close to `finest`.
pub fn aligned_ladder(geom: &PotentialGeometry, finest: usize, levels: usize) -> Vec<usize> {
    let levels = levels.max(1);
    let coarse_target = (finest >> (levels - 1)).max(MIN_GRID_POINTS);
    let mut n = aligned_grid_size(geom, coarse_target);
    let mut out = vec![n];
    for _ in 1..levels {
        n = 2 * (n + 1) - 1;
        out.push(n);
    }
    out
}

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(op: &TridiagonalOperator, x: f64) -> usize {
    let e2 = op.offdiag * op.offdiag;
    let tiny = f64::MIN_POSITIVE.sqrt() * (op.offdiag.abs() + 1.0);
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in op.diag.iter().enumerate() {
        q = if i == 0 { d - x } else { d - x - e2 / q };
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest eigenvalue (from 0) by bisection on the Sturm count.
fn kth_eigenvalue(op: &TridiagonalOperator, k: usize, bounds: (f64, f64)) -> f64 {
    let (mut lo, mut hi) = bounds;
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(op, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn lowest_eigenvalues(op: &TridiagonalOperator, count: usize) -> Vec<f64> {
    lowest_eigenvalues_with(op, count, Execution::default())
}

/// Independent bisections per index, run under `exec`.
pub fn lowest_eigenvalues_with(op: &TridiagonalOperator, count: usize, exec: Execution) -> Vec<f64> {
    let bounds = op.spectral_bounds();
    exec.map_range(count.min(op.n_points), |k| kth_eigenvalue(op, k, bounds))
}

/// `(4 E_fine - E_coarse) / 3` for a halving of `h`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub grid_sizes: Vec<usize>,
    /// One row per grid, ascending eigenvalues.
    pub eigenvalues_per_grid: Vec<Vec<f64>>,
    /// Richardson values from the two finest grids.
    pub extrapolated: Vec<f64>,
    /// `(E_1 - E_2) / (E_2 - E_3)` over the three finest grids, per state.
    pub convergence_ratios: Vec<f64>,
    pub analytic: Vec<f64>,
    /// Analytic minus partnered oracle value (`None` if unpartnered).
    pub deviations: Vec<Option<f64>>,
    pub unpartnered_analytic: Vec<f64>,
    pub unpartnered_oracle: Vec<f64>,
    pub tolerance: f64,
}

impl OracleReport {
    pub fn is_consistent(&self) -> bool {
        self.unpartnered_analytic.is_empty() && self.unpartnered_oracle.is_empty()
    }

    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().map(|d| d.map_or(f64::INFINITY, f64::abs)).fold(0.0, f64::max)
    }
}

/// Compare an analytic spectrum against the oracle on `grids` (ascending,
/// each halving `h`). One extra oracle level is computed so that a state
/// missing from the analytic list shows up as an unpartnered oracle value.
pub fn cross_validate(
    spectrum: &SpectrumResult,
    grids: &[usize],
    tolerance: f64,
    exec: Execution,
) -> Result<OracleReport> {
    if grids.is_empty() {
        return Err(Error::InvalidRequest("no grids given".into()));
    }
    let analytic = spectrum.energies();
    let count = analytic.len() + 1;
    let ops = grids.iter().map(|&n| build_operator(&spectrum.geometry, n)).collect::<Result<Vec<_>>>()?;
    let eigenvalues_per_grid: Vec<Vec<f64>> =
        ops.iter().map(|op| lowest_eigenvalues_with(op, count, exec)).collect();

    let finest = eigenvalues_per_grid.last().unwrap();
    let extrapolated: Vec<f64> = if grids.len() >= 2 {
        let coarse = &eigenvalues_per_grid[grids.len() - 2];
        coarse.iter().zip(finest).map(|(&c, &f)| richardson(c, f)).collect()
    } else {
        finest.clone()
    };
    let convergence_ratios = if grids.len() >= 3 {
        let m = grids.len();
        let (e1, e2, e3) =
            (&eigenvalues_per_grid[m - 3], &eigenvalues_per_grid[m - 2], &eigenvalues_per_grid[m - 1]);
        (0..e3.len()).map(|i| (e1[i] - e2[i]) / (e2[i] - e3[i])).collect()
    } else {
        Vec::new()
    };

    let mut used = vec![false; extrapolated.len()];
    let mut deviations = Vec::with_capacity(analytic.len());
    let mut unpartnered_analytic = Vec::new();
    for &e in &analytic {
        let best = extrapolated
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|a, b| (a.1 - e).abs().total_cmp(&(b.1 - e).abs()));
        match best {
            Some((j, &o)) if (o - e).abs() <= tolerance => {
                used[j] = true;
                deviations.push(Some(e - o));
            }
            _ => {
                deviations.push(None);
                unpartnered_analytic.push(e);
            }
        }
    }
    let ceiling = analytic.iter().copied().fold(f64::NEG_INFINITY, f64::max) + tolerance;
    let unpartnered_oracle =
        extrapolated.iter().zip(&used).filter(|(o, u)| !**u && **o <= ceiling).map(|(o, _)| *o).collect();

    Ok(OracleReport {
        grid_sizes: grids.to_vec(),
        eigenvalues_per_grid,
        extrapolated,
        convergence_ratios,
        analytic,
        deviations,
        unpartnered_analytic,
        unpartnered_oracle,
        tolerance,
    })
}
