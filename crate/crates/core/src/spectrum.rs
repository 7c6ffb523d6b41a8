//! Labeled spectrum assembly, normalization and diagnostics, plus the
//! catalogs of potential strengths that carry a seam state.

use std::f64::consts::PI;

use crate::characteristic::{
    build_wavefunction, char_scaled, coefficients_for, f_zero_energy, f_zero_energy_scale, g_barrier_top,
    g_barrier_top_scale, origin_mismatch,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{Eigenstate, PiecewiseWavefunction, PotentialGeometry, SpectrumResult, StateKind};
use crate::quadrature::SplitRule;
use crate::rootfind::{roots_in_range, RootResult, Tolerances};

/// `|f|` or `|g|` below this fraction of the function scale makes a seam state.
pub const SEAM_CONDITION_TOLERANCE: f64 = 1e-9;
/// Simultaneous-root acceptance for [`doubly_special_v0`].
pub const DOUBLY_SPECIAL_TOLERANCE: f64 = 1e-8;
/// Default upper end of the `v0` search for simultaneous roots.
pub const DEFAULT_V0_CEILING: f64 = 30.0;
/// Step of the `v0` scans for the seam conditions.
pub const V0_SCAN_STEP: f64 = 0.005;
/// Width of one `v0` scan window.
const V0_WINDOW: f64 = 5.0;
/// Hard stop for open-ended `v0` scans.
const V0_SCAN_LIMIT: f64 = 1e4;
/// Hard stop for open-ended energy scans, in windows.
const MAX_ENERGY_WINDOWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSelection {
    /// The lowest `n` states.
    Count(usize),
    /// Every state with `E <= e_max`.
    MaxEnergy(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRequest {
    pub geometry: PotentialGeometry,
    pub selection: StateSelection,
    pub execution: Execution,
}

impl SpectrumRequest {
    pub fn count(geometry: PotentialGeometry, n: usize) -> Self {
        Self { geometry, selection: StateSelection::Count(n), execution: Execution::default() }
    }

    pub fn max_energy(geometry: PotentialGeometry, e_max: f64) -> Self {
        Self { geometry, selection: StateSelection::MaxEnergy(e_max), execution: Execution::default() }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticsReport {
    /// `<psi_i|psi_j>` for the normalized states.
    pub overlap_matrix: Vec<Vec<f64>>,
    pub node_counts: Vec<usize>,
    pub uncertainty_products: Vec<f64>,
    /// Relative seam mismatch of value and slope, per state.
    pub c1_residuals: Vec<f64>,
}

impl DiagnosticsReport {
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.overlap_matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }

    pub fn max_norm_error(&self) -> f64 {
        self.overlap_matrix.iter().enumerate().map(|(i, row)| (row[i] - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Default energy scan step for a geometry.
pub fn energy_step(geom: &PotentialGeometry) -> f64 {
    0.01f64.min(PI * PI / (8.0 * geom.a() * geom.a()))
}

fn energy_window(geom: &PotentialGeometry) -> f64 {
    10.0 * PI * PI / (2.0 * geom.a()).powi(2)
}

fn seam_condition_holds(kind: StateKind, geom: &PotentialGeometry) -> bool {
    let v0 = geom.v0();
    if v0 <= 0.0 {
        return false;
    }
    match kind {
        StateKind::ZeroEnergy => {
            let f = f_zero_energy(v0, geom).unwrap_or(f64::INFINITY);
            f.abs() <= SEAM_CONDITION_TOLERANCE * f_zero_energy_scale(v0, geom)
        }
        StateKind::BarrierTop => {
            let g = g_barrier_top(v0, geom).unwrap_or(f64::INFINITY);
            g.abs() <= SEAM_CONDITION_TOLERANCE * g_barrier_top_scale(v0, geom)
        }
        StateKind::Generic => false,
    }
}

/// Snap near-seam roots onto the seam and make sure a seam state exists
/// whenever its condition holds. `scanned_to` limits the insertion to the
/// part of the axis that was actually searched.
fn apply_seams(
    roots: &[RootResult],
    geom: &PotentialGeometry,
    scanned_to: f64,
    step: f64,
) -> Vec<(f64, StateKind)> {
    let v0 = geom.v0();
    let tol = geom.seam_tolerance();
    let mut out: Vec<(f64, StateKind)> = roots
        .iter()
        .filter(|r| !r.suspected_double)
        .map(|r| {
            if v0 > 0.0 && r.root.abs() <= tol {
                (0.0, StateKind::ZeroEnergy)
            } else if v0 > 0.0 && (r.root - v0).abs() <= tol {
                (v0, StateKind::BarrierTop)
            } else {
                (r.root, StateKind::Generic)
            }
        })
        .collect();
    for (seam, kind) in [(0.0, StateKind::ZeroEnergy), (v0, StateKind::BarrierTop)] {
        if seam > scanned_to || !seam_condition_holds(kind, geom) || out.iter().any(|s| s.1 == kind) {
            continue;
        }
        // the seam root drifted past the snap tolerance: take the nearest one
        let nearest = out
            .iter()
            .enumerate()
            .filter(|(_, s)| s.1 == StateKind::Generic && (s.0 - seam).abs() < step)
            .min_by(|a, b| (a.1 .0 - seam).abs().total_cmp(&(b.1 .0 - seam).abs()))
            .map(|(i, _)| i);
        match nearest {
            Some(i) => out[i] = (seam, kind),
            None => out.push((seam, kind)),
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    out
}

/// Energies and kinds of the selected states, in ascending order.
fn locate_energies(
    geom: &PotentialGeometry,
    selection: StateSelection,
    step: f64,
    exec: Execution,
) -> Result<Vec<(f64, StateKind)>> {
    let f = |e: f64| char_scaled(e, geom).unwrap_or(f64::NAN);
    let tol = Tolerances::default();
    let window = energy_window(geom);
    let mut lo = -geom.v0();
    let mut roots: Vec<RootResult> = Vec::new();
    for _ in 0..MAX_ENERGY_WINDOWS {
        let hi = match selection {
            StateSelection::MaxEnergy(e) => (lo + window).min(e),
            StateSelection::Count(_) => lo + window,
        };
        if hi > lo {
            roots.extend(roots_in_range(&f, lo, hi, step, &tol, exec)?);
        }
        let seamed = apply_seams(&roots, geom, hi, step);
        match selection {
            StateSelection::Count(n) if seamed.len() >= n => {
                return Ok(seamed.into_iter().take(n).collect());
            }
            StateSelection::MaxEnergy(e) if hi >= e => {
                return Ok(seamed.into_iter().filter(|s| s.0 <= e).collect());
            }
            _ => {}
        }
        lo = hi;
    }
    Err(Error::InvalidRequest(format!("energy scan exceeded {MAX_ENERGY_WINDOWS} windows")))
}

fn validate(req: &SpectrumRequest) -> Result<()> {
    match req.selection {
        StateSelection::Count(0) => Err(Error::InvalidRequest("n_states must be at least 1".into())),
        StateSelection::MaxEnergy(e) if !e.is_finite() || e <= -req.geometry.v0() => {
            Err(Error::InvalidRequest(format!("e_max {e} is not above the potential floor")))
        }
        _ => Ok(()),
    }
}

/// Bisect the origin Wronskian down to adjacent floats.
///
/// States confined behind the barrier couple to the rest only through an
/// exponentially small tail, so a root good to 1e-13 can still leave a
/// visible slope jump at the origin. Falls back to `energy` if no sign
/// change turns up nearby or the bracket would reach a seam.
fn polish_energy(energy: f64, geom: &PotentialGeometry) -> f64 {
    const START: f64 = 1e-13;
    const EXPANSIONS: usize = 8;
    let w = |e: f64| origin_mismatch(e, geom);
    let w0 = w(energy);
    if w0 == 0.0 || !w0.is_finite() {
        return energy;
    }
    let guard = geom.seam_tolerance();
    let off_seam = |e: f64| e > -geom.v0() && e.abs() > guard && (e - geom.v0()).abs() > guard;
    let mut delta = START * energy.abs().max(1.0);
    let mut bracket = None;
    for _ in 0..EXPANSIONS {
        let (lo, hi) = (energy - delta, energy + delta);
        if !off_seam(lo) || !off_seam(hi) || (lo < 0.0) != (hi < 0.0) || (lo < geom.v0()) != (hi < geom.v0())
        {
            return energy;
        }
        let (wl, wh) = (w(lo), w(hi));
        if (wl < 0.0) != (w0 < 0.0) {
            bracket = Some((lo, energy, wl));
            break;
        }
        if (wh < 0.0) != (w0 < 0.0) {
            bracket = Some((energy, hi, w0));
            break;
        }
        delta *= 4.0;
    }
    let Some((mut lo, mut hi, mut wl)) = bracket else {
        return energy;
    };
    let mut wh = w(hi);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let wm = w(mid);
        if wm == 0.0 {
            return mid;
        }
        if (wm < 0.0) == (wl < 0.0) {
            lo = mid;
            wl = wm;
        } else {
            hi = mid;
            wh = wm;
        }
    }
    if wl.abs() <= wh.abs() {
        lo
    } else {
        hi
    }
}

/// Build one normalized eigenstate.
pub fn build_state(
    index: usize,
    energy: f64,
    kind: StateKind,
    geom: &PotentialGeometry,
) -> Result<Eigenstate> {
    let energy = match kind {
        StateKind::Generic => polish_energy(energy, geom),
        _ => energy,
    };
    let coefficients = coefficients_for(kind, energy, geom)?;
    let raw = build_wavefunction(energy, geom, &coefficients)?;
    let wavefunction = normalize(&raw)?;
    Ok(Eigenstate { index, energy, kind, coefficients, wavefunction })
}

fn solve_with_step(req: &SpectrumRequest, step: f64) -> Result<SpectrumResult> {
    let geom = req.geometry;
    let exec = req.execution;
    let located = locate_energies(&geom, req.selection, step, exec)?;
    let indexed: Vec<(usize, (f64, StateKind))> = located.into_iter().enumerate().collect();
    let states = exec
        .map(indexed, |(i, (e, kind))| build_state(i, e, kind, &geom))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let rule = SplitRule::new(geom.a(), geom.b(), crate::quadrature::PANELS_PER_SEGMENT);
    let samples = exec.map(states.iter().collect(), |s| rule.sample(&s.wavefunction));
    let n = states.len();
    let overlap_matrix =
        exec.map_range(n, |i| (0..n).map(|j| rule.inner(&samples[i].0, &samples[j].0)).collect::<Vec<f64>>());
    let node_counts: Vec<usize> = exec.map(states.iter().collect(), |s| count_nodes(&s.wavefunction));
    let uncertainty_products: Vec<f64> =
        samples.iter().map(|(v, dv)| uncertainty_from_samples(&rule, v, dv)).collect();
    let c1_residuals = states.iter().map(|s| s.wavefunction.seam_residual()).collect();

    for (i, &nodes) in node_counts.iter().enumerate() {
        if nodes != i {
            let lower = if i == 0 { -geom.v0() } else { states[i - 1].energy };
            return Err(Error::MissedState { index: i, nodes, lower, upper: states[i].energy });
        }
    }
    Ok(SpectrumResult {
        geometry: geom,
        states,
        diagnostics: DiagnosticsReport { overlap_matrix, node_counts, uncertainty_products, c1_residuals },
    })
}

/// Full labeled spectrum with diagnostics.
///
/// Seam states are included whenever the zero-energy or barrier-top
/// condition holds at the requested `v0`. If the node audit finds a gap,
/// the scan is repeated once at a quarter of the step before failing with
/// [`Error::MissedState`].
pub fn solve_spectrum(req: &SpectrumRequest) -> Result<SpectrumResult> {
    validate(req)?;
    let step = energy_step(&req.geometry);
    match solve_with_step(req, step) {
        Err(Error::MissedState { .. }) => solve_with_step(req, step / 4.0),
        other => other,
    }
}

/// Scale `psi` to unit L2 norm.
pub fn normalize(psi: &PiecewiseWavefunction) -> Result<PiecewiseWavefunction> {
    let rule = SplitRule::for_wavefunction(psi);
    let (v, _) = rule.sample(psi);
    let norm2 = rule.inner(&v, &v);
    if !(norm2 > 0.0 && norm2.is_finite()) {
        return Err(Error::ZeroNorm);
    }
    Ok(psi.divided_by(norm2.sqrt()))
}

/// Relative amplitude below which a linear piece counts as lying on the axis.
pub const NODE_THRESHOLD: f64 = 1e-9;
const NODE_SAMPLES_PER_SEGMENT: usize = 4096;

/// Interior sign changes on `(-a, a)`.
///
/// Linear pieces are represented by their endpoints only, and when their
/// amplitude is below [`NODE_THRESHOLD`] times `max |psi|` they are skipped
/// entirely, so a piece lying on the axis adds no spurious nodes.
pub fn count_nodes(psi: &PiecewiseWavefunction) -> usize {
    use crate::model::SegmentBasis;
    let floor = NODE_THRESHOLD * psi.max_abs();
    let mut last_sign = 0i8;
    let mut nodes = 0;
    let mut visit = |v: f64| {
        if v == 0.0 {
            return;
        }
        let s = if v > 0.0 { 1 } else { -1 };
        if last_sign != 0 && s != last_sign {
            nodes += 1;
        }
        last_sign = s;
    };
    for seg in psi.segments() {
        if seg.basis == SegmentBasis::Linear {
            let (l, r) = (seg.value(seg.lo), seg.value(seg.hi));
            if l.abs().max(r.abs()) > floor {
                visit(l);
                visit(r);
            }
            continue;
        }
        let h = (seg.hi - seg.lo) / NODE_SAMPLES_PER_SEGMENT as f64;
        for i in 0..=NODE_SAMPLES_PER_SEGMENT {
            let x = if i == NODE_SAMPLES_PER_SEGMENT { seg.hi } else { seg.lo + i as f64 * h };
            if x.abs() >= psi.half_width() {
                continue;
            }
            visit(seg.value(x));
        }
    }
    nodes
}

/// `<psi_i|psi_j>` by the split Simpson rule.
pub fn overlap(psi_i: &PiecewiseWavefunction, psi_j: &PiecewiseWavefunction) -> Result<f64> {
    if !psi_i.same_domain(psi_j) {
        return Err(Error::GeometryMismatch);
    }
    let rule = SplitRule::for_wavefunction(psi_i);
    let (u, _) = rule.sample(psi_i);
    let (v, _) = rule.sample(psi_j);
    Ok(rule.inner(&u, &v))
}

fn uncertainty_from_samples(rule: &SplitRule, v: &[f64], dv: &[f64]) -> f64 {
    let norm = rule.inner(v, v);
    let mut x1 = 0.0;
    let mut x2 = 0.0;
    for ((w, x), y) in rule.weights.iter().zip(&rule.nodes).zip(v) {
        let p = w * y * y;
        x1 += p * x;
        x2 += p * x * x;
    }
    let (x1, x2) = (x1 / norm, x2 / norm);
    let p2 = rule.inner(dv, dv) / norm;
    ((x2 - x1 * x1).max(0.0) * p2).sqrt()
}

/// `U = dx * dp` with `<p> = 0` and `<p^2> = integral of psi'^2`.
pub fn uncertainty_product(psi: &PiecewiseWavefunction) -> f64 {
    let rule = SplitRule::for_wavefunction(psi);
    let (v, dv) = rule.sample(psi);
    uncertainty_from_samples(&rule, &v, &dv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialCondition {
    /// Zero-energy state (`f(v0) = 0`).
    FZero,
    /// Barrier-top state (`g(v0) = 0`).
    GTop,
    /// Both at once.
    Both,
}

impl SpecialCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecialCondition::FZero => "f",
            SpecialCondition::GTop => "g",
            SpecialCondition::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialRoot {
    pub condition: SpecialCondition,
    pub v0: f64,
    /// Index of the seam state: the zero-energy one for `FZero` and `Both`,
    /// the barrier-top one for `GTop`.
    pub state_index: usize,
    /// Barrier-top index for `Both`.
    pub top_index: Option<usize>,
    /// `|f(v0)|` relative to its scale.
    pub f_residual: f64,
    /// `|g(v0)|` relative to its scale.
    pub g_residual: f64,
}

fn relative_residuals(v0: f64, geom: &PotentialGeometry) -> (f64, f64) {
    let f = f_zero_energy(v0, geom).map(f64::abs).unwrap_or(f64::NAN);
    let g = g_barrier_top(v0, geom).map(f64::abs).unwrap_or(f64::NAN);
    (f / f_zero_energy_scale(v0, geom), g / g_barrier_top_scale(v0, geom))
}

/// Index of the seam state of `kind` in the spectrum at `geom`.
pub fn seam_state_index(kind: StateKind, geom: &PotentialGeometry) -> Result<Option<usize>> {
    let seam = match kind {
        StateKind::ZeroEnergy => 0.0,
        StateKind::BarrierTop => geom.v0(),
        StateKind::Generic => return Ok(None),
    };
    let located = locate_energies(
        geom,
        StateSelection::MaxEnergy(seam + energy_step(geom)),
        energy_step(geom),
        Execution::Sequential,
    )?;
    Ok(located.iter().position(|s| s.1 == kind))
}

/// Roots of `f` or `g` in `v0`, ascending, from `v0 = 0` upward.
fn condition_roots(
    cond: SpecialCondition,
    count: usize,
    geom: &PotentialGeometry,
    ceiling: f64,
    exec: Execution,
) -> Result<Vec<f64>> {
    let func = |v0: f64| match cond {
        SpecialCondition::FZero => f_zero_energy(v0, geom).unwrap_or(f64::NAN),
        _ => g_barrier_top(v0, geom).unwrap_or(f64::NAN),
    };
    let tol = Tolerances::default();
    let mut out: Vec<f64> = Vec::new();
    let mut lo = 0.0;
    while out.len() < count && lo < ceiling {
        let hi = (lo + V0_WINDOW).min(ceiling);
        out.extend(
            roots_in_range(&func, lo, hi, V0_SCAN_STEP, &tol, exec)?
                .into_iter()
                .filter(|r| !r.suspected_double)
                .map(|r| r.root),
        );
        lo = hi;
    }
    out.truncate(count);
    Ok(out)
}

fn annotate(cond: SpecialCondition, v0: f64, geom: &PotentialGeometry) -> Result<SpecialRoot> {
    let g = geom.with_v0(v0)?;
    let kind = match cond {
        SpecialCondition::GTop => StateKind::BarrierTop,
        _ => StateKind::ZeroEnergy,
    };
    let state_index = seam_state_index(kind, &g)?
        .ok_or_else(|| Error::InvalidRequest(format!("no {kind} state found at v0 = {v0}")))?;
    let top_index = match cond {
        SpecialCondition::Both => seam_state_index(StateKind::BarrierTop, &g)?,
        _ => None,
    };
    let (f_residual, g_residual) = relative_residuals(v0, geom);
    Ok(SpecialRoot { condition: cond, v0, state_index, top_index, f_residual, g_residual })
}

/// First `count` potential strengths (q = 0 excluded) at which the
/// condition holds, each annotated with the index of its seam state.
/// `Both` searches up to [`DEFAULT_V0_CEILING`].
pub fn special_v0_catalog(
    cond: SpecialCondition,
    count: usize,
    geom: &PotentialGeometry,
) -> Result<Vec<SpecialRoot>> {
    special_v0_catalog_with(cond, count, geom, Execution::default())
}

pub fn special_v0_catalog_with(
    cond: SpecialCondition,
    count: usize,
    geom: &PotentialGeometry,
    exec: Execution,
) -> Result<Vec<SpecialRoot>> {
    if count == 0 {
        return Err(Error::InvalidRequest("count must be at least 1".into()));
    }
    if cond == SpecialCondition::Both {
        return doubly_special_v0(count, geom, DEFAULT_V0_CEILING);
    }
    let roots = condition_roots(cond, count, geom, V0_SCAN_LIMIT, exec)?;
    exec.map(roots, |v0| annotate(cond, v0, geom)).into_iter().collect()
}

/// Potential strengths below `v0_max` carrying both a zero-energy and a
/// barrier-top state: roots of `f` at which `|g|` is also below
/// [`DOUBLY_SPECIAL_TOLERANCE`] of its scale. Equality `f = g` alone is not
/// enough and is not searched for.
pub fn doubly_special_v0(count: usize, geom: &PotentialGeometry, v0_max: f64) -> Result<Vec<SpecialRoot>> {
    let f_roots = condition_roots(SpecialCondition::FZero, usize::MAX, geom, v0_max, Execution::default())?;
    let mut out = Vec::new();
    for v0 in f_roots {
        let (fr, gr) = relative_residuals(v0, geom);
        if fr <= DOUBLY_SPECIAL_TOLERANCE && gr <= DOUBLY_SPECIAL_TOLERANCE {
            out.push(annotate(SpecialCondition::Both, v0, geom)?);
            if out.len() == count {
                break;
            }
        }
    }
    Ok(out)
}

/// A root of `f` paired with the nearest root of `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearCoincidence {
    pub zero: SpecialRoot,
    pub top: SpecialRoot,
    pub gap: f64,
}

/// For each of the first `count` roots of `f`, the nearest root of `g`.
pub fn near_coincidences(count: usize, geom: &PotentialGeometry) -> Result<Vec<NearCoincidence>> {
    let exec = Execution::default();
    let f_roots = condition_roots(SpecialCondition::FZero, count, geom, V0_SCAN_LIMIT, exec)?;
    let ceiling = f_roots.last().copied().unwrap_or(0.0) + 1.0;
    let g_roots = condition_roots(SpecialCondition::GTop, usize::MAX, geom, ceiling, exec)?;
    let pairs: Vec<(f64, f64)> = f_roots
        .iter()
        .filter_map(|&vf| {
            g_roots
                .iter()
                .copied()
                .min_by(|a, b| (a - vf).abs().total_cmp(&(b - vf).abs()))
                .map(|vg| (vf, vg))
        })
        .collect();
    exec.map(pairs, |(vf, vg)| {
        Ok(NearCoincidence {
            zero: annotate(SpecialCondition::FZero, vf, geom)?,
            top: annotate(SpecialCondition::GTop, vg, geom)?,
            gap: vg - vf,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristic::f_zero_energy;
    use crate::rootfind::{refine, Bracket};

    fn geom(v0: f64) -> PotentialGeometry {
        PotentialGeometry::reference(v0).unwrap()
    }

    fn solve(v0: f64, n: usize) -> SpectrumResult {
        solve_spectrum(&SpectrumRequest::count(geom(v0), n)).unwrap()
    }

    fn f_root_near(v: f64) -> f64 {
        let g = geom(1.0);
        let f = |x: f64| f_zero_energy(x, &g).unwrap();
        let br = Bracket::new(v * 0.99, v * 1.01, f(v * 0.99), f(v * 1.01)).unwrap();
        refine(&f, &br, &Tolerances::default()).unwrap().root
    }

    fn g_root_near(v: f64) -> f64 {
        let g = geom(1.0);
        let f = |x: f64| g_barrier_top(x, &g).unwrap();
        let br = Bracket::new(v * 0.99, v * 1.01, f(v * 0.99), f(v * 1.01)).unwrap();
        refine(&f, &br, &Tolerances::default()).unwrap().root
    }

    #[test]
    fn reference_row_v0_5() {
        let s = solve(5.0, 6);
        let want = [-3.733845, -0.4354, 0.4972, 0.7227, 1.9639, 2.3852];
        for (st, w) in s.states.iter().zip(want) {
            assert!((st.energy - w).abs() < 1e-4, "{} vs {w}", st.energy);
            assert_eq!(st.kind, StateKind::Generic);
        }
        assert_eq!(s.diagnostics.node_counts, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn nearly_free_box() {
        let s = solve(1e-8, 6);
        for (n, st) in s.states.iter().enumerate() {
            let e = ((n + 1) * (n + 1)) as f64 * PI * PI / 144.0;
            assert!((st.energy - e).abs() < 1e-6);
        }
    }

    #[test]
    fn free_box_normalization_amplitude() {
        let s = solve(0.0, 2);
        let psi = &s.states[0].wavefunction;
        // sin(pi (x + a) / 2a) / sqrt(a), peak at x = 0
        let peak = psi.evaluate(0.0).unwrap().abs();
        assert!((peak - 1.0 / 6f64.sqrt()).abs() < 1e-10);
        assert!(s.diagnostics.max_off_diagonal() < 1e-10);
        let u = s.diagnostics.uncertainty_products[0];
        assert!((u - (PI * PI / 3.0 - 2.0).sqrt() / 2.0).abs() < 1e-8);
    }

    #[test]
    fn zero_energy_spectrum() {
        let v = f_root_near(12.7396);
        let s = solve(v, 13);
        assert_eq!(s.states[2].energy, 0.0);
        assert_eq!(s.states[2].kind, StateKind::ZeroEnergy);
        assert!(s.state_of_kind(StateKind::BarrierTop).is_none());
        assert!(s.diagnostics.max_off_diagonal() < 1e-6);
        assert_eq!(count_nodes(&s.states[2].wavefunction), 2);
    }

    #[test]
    fn barrier_top_spectrum() {
        let v = g_root_near(0.0655);
        let s = solve(v, 6);
        assert_eq!(s.states[0].energy, v);
        assert_eq!(s.states[0].kind, StateKind::BarrierTop);
        assert!((s.diagnostics.uncertainty_products[0] - 0.5696).abs() < 1e-3);
    }

    #[test]
    fn zero_energy_uncertainty() {
        let v = f_root_near(0.3333);
        let s = solve(v, 6);
        assert_eq!(s.states[0].kind, StateKind::ZeroEnergy);
        assert!((s.diagnostics.uncertainty_products[0] - 0.5647).abs() < 1e-3);
        assert!(s.diagnostics.uncertainty_products.iter().all(|&u| u >= 0.5));
        let psi = &s.states[0].wavefunction;
        let norm = psi.norm();
        assert!(norm.is_finite() && norm > 0.0);
    }

    #[test]
    fn normalization_and_self_overlap() {
        let s = solve(4.0998, 8);
        for st in &s.states {
            let o = overlap(&st.wavefunction, &st.wavefunction).unwrap();
            assert!((o - 1.0).abs() < 1e-10);
        }
        assert!(s.diagnostics.max_norm_error() < 1e-10);
    }

    #[test]
    fn overlap_rejects_other_geometry() {
        let a = solve(1.0, 1);
        let other = PotentialGeometry::new(5.0, 2.0, 1.0).unwrap();
        let b = solve_spectrum(&SpectrumRequest::count(other, 1)).unwrap();
        assert_eq!(
            overlap(&a.states[0].wavefunction, &b.states[0].wavefunction),
            Err(Error::GeometryMismatch)
        );
    }

    #[test]
    fn ground_state_monotone_in_depth() {
        let e0: Vec<f64> =
            [0.1, 1.0, 5.0, 10.0, 20.0].iter().map(|&v| solve(v, 1).states[0].energy).collect();
        for w in e0.windows(2) {
            assert!(w[1] <= w[0], "{e0:?}");
        }
    }

    #[test]
    fn max_energy_selection() {
        let g = geom(5.0);
        let s = solve_spectrum(&SpectrumRequest::max_energy(g, 1.0)).unwrap();
        assert_eq!(s.states.len(), 4);
        assert!(solve_spectrum(&SpectrumRequest::max_energy(g, -6.0)).is_err());
        assert!(solve_spectrum(&SpectrumRequest::count(g, 0)).is_err());
    }

    #[test]
    fn sequential_matches_parallel() {
        let g = geom(26.31113);
        let a = solve_spectrum(&SpectrumRequest::count(g, 8).with_execution(Execution::Sequential)).unwrap();
        let b = solve_spectrum(&SpectrumRequest::count(g, 8).with_execution(Execution::Parallel)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn catalogs_with_indices() {
        let g = geom(1.0);
        let f = special_v0_catalog(SpecialCondition::FZero, 4, &g).unwrap();
        let want = [(0.3333, 0), (4.09982, 1), (12.7396, 2), (26.31113, 3)];
        for (r, (v, n)) in f.iter().zip(want) {
            assert!((r.v0 - v).abs() < 1e-4);
            assert_eq!(r.state_index, n);
            assert!(r.f_residual <= 1e-9);
        }
        let gs = special_v0_catalog(SpecialCondition::GTop, 4, &g).unwrap();
        let want = [(0.0655, 0), (0.2981, 1), (0.5816, 2), (1.3322, 3)];
        for (r, (v, n)) in gs.iter().zip(want) {
            assert!((r.v0 - v).abs() < 1e-4);
            assert_eq!(r.state_index, n);
            assert!(r.g_residual <= 1e-9);
        }
    }

    #[test]
    fn special_root_resolves_at_annotated_index() {
        let g = geom(1.0);
        for r in special_v0_catalog(SpecialCondition::GTop, 3, &g).unwrap() {
            let s = solve(r.v0, r.state_index + 2);
            assert_eq!(s.states[r.state_index].kind, StateKind::BarrierTop);
        }
    }

    #[test]
    fn no_simultaneous_roots_at_reference_geometry() {
        assert!(doubly_special_v0(1, &geom(1.0), DEFAULT_V0_CEILING).unwrap().is_empty());
    }

    #[test]
    fn near_coincidence_indices() {
        let pairs = near_coincidences(2, &geom(1.0)).unwrap();
        assert_eq!(pairs[0].zero.state_index, 0);
        assert_eq!(pairs[0].top.state_index, 1);
        assert_eq!(pairs[1].zero.state_index, 1);
        assert_eq!(pairs[1].top.state_index, 6);
        assert!(pairs.iter().all(|p| p.gap.abs() > 1e-3));
    }

    #[test]
    fn tunnelling_states_join_cleanly_at_origin() {
        // right-box states with exponentially weak coupling to the well
        let s = solve(28.466429, 10);
        let worst = s.diagnostics.c1_residuals.iter().copied().fold(0.0, f64::max);
        assert!(worst <= 1e-10, "{worst:e}");
        for st in &s.states {
            assert!(origin_mismatch(st.energy, &s.geometry).is_finite());
        }
    }
}
