//! Bracketing scan and Brent refinement for scalar characteristic functions.
//!
//! The scan samples `F` on a uniform grid, keeps every sign change and
//! re-samples any interval where `|F|` has a local minimum without a sign
//! change, so that two roots closer than the grid step are not lost.

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Halvings applied around a dip of `|F|` before giving up on it.
pub const MAX_DIP_HALVINGS: usize = 6;
/// A dip that never crosses zero is flagged if `|F|` falls below this
/// fraction of the neighbouring samples.
pub const DIP_RATIO: f64 = 1e-3;
/// Roots closer than this (relative to `max(1, |root|)`) are merged.
pub const MERGE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if lo < hi && f_lo.is_finite() && f_hi.is_finite() && f_lo * f_hi < 0.0 {
            Ok(Self { lo, hi, f_lo, f_hi })
        } else {
            Err(Error::InvalidBracket { lo, hi })
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Target final bracket width is `width_tol * max(1, |root|)`.
    pub width_tol: f64,
    pub max_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { width_tol: 1e-13, max_iterations: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    /// `F(root)`.
    pub residual: f64,
    pub iterations: usize,
    pub bracket_width_final: f64,
    /// Set for a grazing minimum of `|F|` that never produced a sign change.
    pub suspected_double: bool,
}

/// Brent's method (inverse quadratic interpolation safeguarded by bisection).
pub fn refine<F>(f: &F, bracket: &Bracket, tol: &Tolerances) -> Result<RootResult>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);

    for iter in 1..=tol.max_iterations {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let target = tol.width_tol * b.abs().max(1.0);
        let tol1 = 0.25 * target;
        let xm = 0.5 * (c - b);
        if fb == 0.0 || (c - b).abs() <= target {
            return Ok(RootResult {
                root: b,
                residual: fb,
                iterations: iter,
                bracket_width_final: if fb == 0.0 { 0.0 } else { (c - b).abs() },
                suspected_double: false,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::InvalidBracket { lo: a, hi: b });
        }
    }
    Err(Error::NoConvergence { iterations: tol.max_iterations, lo: b.min(c), hi: b.max(c) })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanOutcome {
    pub brackets: Vec<Bracket>,
    /// Grid points where `F` is exactly zero.
    pub exact_roots: Vec<f64>,
    /// Grazing minima that never crossed zero after all halvings.
    pub suspected_doubles: Vec<f64>,
}

/// Sign changes of `f` on the uniform grid `lo, lo + step, ..., hi`.
///
/// The lower end is open: a zero or non-finite value at `lo` carries no
/// sign, so no bracket or root is reported there.
pub fn bracket_scan<F>(f: &F, lo: f64, hi: f64, step: f64, exec: Execution) -> ScanOutcome
where
    F: Fn(f64) -> f64 + Sync + ?Sized,
{
    let mut out = ScanOutcome::default();
    if lo.is_nan() || hi.is_nan() || lo >= hi || step.is_nan() || step <= 0.0 {
        return out;
    }
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let xs: Vec<f64> = (0..=n).map(|i| if i == n { hi } else { lo + i as f64 * step }).collect();
    let ys = exec.map(xs.clone(), f);
    let usable = |i: usize| i > 0 || (ys[0].is_finite() && ys[0] != 0.0);

    for i in 1..=n {
        if ys[i] == 0.0 {
            out.exact_roots.push(xs[i]);
            continue;
        }
        if !usable(i - 1) || ys[i - 1] == 0.0 || !ys[i].is_finite() || !ys[i - 1].is_finite() {
            continue;
        }
        if ys[i - 1] * ys[i] < 0.0 {
            out.brackets.push(Bracket { lo: xs[i - 1], hi: xs[i], f_lo: ys[i - 1], f_hi: ys[i] });
        }
    }

    // local minima of |F| with no sign change on either side
    for i in 1..n {
        if !usable(i - 1) {
            continue;
        }
        let (l, m, r) = (ys[i - 1], ys[i], ys[i + 1]);
        if !(l.is_finite() && m.is_finite() && r.is_finite()) || l == 0.0 || m == 0.0 || r == 0.0 {
            continue;
        }
        let same_sign = (l > 0.0) == (m > 0.0) && (m > 0.0) == (r > 0.0);
        if same_sign && m.abs() < l.abs() && m.abs() < r.abs() {
            resolve_dip(f, xs[i - 1], xs[i + 1], l.abs().max(r.abs()), &mut out);
        }
    }
    out.brackets.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    out.exact_roots.sort_by(f64::total_cmp);
    out
}

fn resolve_dip<F>(f: &F, lo: f64, hi: f64, local_scale: f64, out: &mut ScanOutcome)
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let mut min_seen = (f64::INFINITY, lo);
    for halving in 1..=MAX_DIP_HALVINGS {
        let m = 2usize.pow(halving as u32 + 1);
        let h = (hi - lo) / m as f64;
        let xs: Vec<f64> = (0..=m).map(|j| lo + j as f64 * h).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let mut found = false;
        for j in 1..=m {
            if ys[j] == 0.0 && j < m {
                out.exact_roots.push(xs[j]);
                found = true;
            } else if ys[j - 1] * ys[j] < 0.0 {
                out.brackets.push(Bracket { lo: xs[j - 1], hi: xs[j], f_lo: ys[j - 1], f_hi: ys[j] });
                found = true;
            }
            if ys[j].abs() < min_seen.0 {
                min_seen = (ys[j].abs(), xs[j]);
            }
        }
        if found {
            return;
        }
    }
    if min_seen.0 <= DIP_RATIO * local_scale {
        out.suspected_doubles.push(min_seen.1);
    }
}

/// Scan plus refinement. Results are sorted and merged; brackets are
/// refined independently under `exec`.
pub fn roots_in_range<F>(
    f: &F,
    lo: f64,
    hi: f64,
    step: f64,
    tol: &Tolerances,
    exec: Execution,
) -> Result<Vec<RootResult>>
where
    F: Fn(f64) -> f64 + Sync + ?Sized,
{
    let scan = bracket_scan(f, lo, hi, step, exec);
    let refined = exec.map(scan.brackets, |br| refine(f, &br, tol));
    let mut roots = refined.into_iter().collect::<Result<Vec<_>>>()?;
    roots.extend(scan.exact_roots.into_iter().map(|x| RootResult {
        root: x,
        residual: 0.0,
        iterations: 0,
        bracket_width_final: 0.0,
        suspected_double: false,
    }));
    roots.extend(scan.suspected_doubles.into_iter().map(|x| RootResult {
        root: x,
        residual: f(x),
        iterations: 0,
        bracket_width_final: 0.0,
        suspected_double: true,
    }));
    Ok(merge_roots(roots))
}

/// Sort ascending and drop roots within [`MERGE_TOLERANCE`] of the previous one.
pub fn merge_roots(mut roots: Vec<RootResult>) -> Vec<RootResult> {
    roots.sort_by(|a, b| a.root.total_cmp(&b.root));
    let mut out: Vec<RootResult> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last() {
            Some(prev) if (r.root - prev.root).abs() <= MERGE_TOLERANCE * r.root.abs().max(1.0) => {}
            _ => out.push(r),
        }
    }
    out
}
