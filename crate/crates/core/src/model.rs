//! Potential geometry, energy branches and the closed-form piecewise
//! wavefunction shared by all solvers.
//!
//! Units: `2m = 1`, `hbar = 1`, so `hbar^2 / 2m = 1` and a free wave of
//! energy `E` has wavenumber `k = sqrt(E)`. Nothing here converts units.

use std::fmt;

use crate::characteristic::CoefficientSet;
use crate::error::{Error, Result};
use crate::spectrum::DiagnosticsReport;

/// Wall half-width of the reference geometry.
pub const REFERENCE_A: f64 = 6.0;
/// Well/barrier half-width of the reference geometry.
pub const REFERENCE_B: f64 = 2.0;

/// Walls at `±a`, well on `[-b, 0]`, barrier on `(0, b]`, both of strength `v0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialGeometry {
    a: f64,
    b: f64,
    v0: f64,
}

impl PotentialGeometry {
    pub fn new(a: f64, b: f64, v0: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && v0.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "non-finite parameter (a = {a}, b = {b}, v0 = {v0})"
            )));
        }
        if !(b > 0.0 && b < a) {
            return Err(Error::InvalidGeometry(format!("need 0 < b < a, got a = {a}, b = {b}")));
        }
        if v0 < 0.0 {
            return Err(Error::InvalidGeometry(format!("need v0 >= 0, got {v0}")));
        }
        Ok(Self { a, b, v0 })
    }

    /// `a = 6`, `b = 2` (so `d = 4`).
    pub fn reference(v0: f64) -> Result<Self> {
        Self::new(REFERENCE_A, REFERENCE_B, v0)
    }

    pub fn with_v0(&self, v0: f64) -> Result<Self> {
        Self::new(self.a, self.b, v0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// Width of each zero-potential gap, `a - b`.
    pub fn d(&self) -> f64 {
        self.a - self.b
    }

    /// Distance from a seam energy (0 or v0) below which a root is
    /// reclassified as the seam state.
    pub fn seam_tolerance(&self) -> f64 {
        1e-9 * self.v0.max(1.0)
    }

    /// Ground-state energy of the empty box of width `2a`.
    pub fn box_ground_energy(&self) -> f64 {
        let w = std::f64::consts::PI / (2.0 * self.a);
        w * w
    }

    /// Same walls and block width (v0 may differ).
    pub fn same_shape(&self, other: &PotentialGeometry) -> bool {
        self.a == other.a && self.b == other.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialValue {
    Finite(f64),
    Wall,
}

/// `V(x)`; the point `x = 0` belongs to the well.
pub fn potential_at(x: f64, geom: &PotentialGeometry) -> PotentialValue {
    if x.abs() >= geom.a {
        PotentialValue::Wall
    } else if x >= -geom.b && x <= 0.0 {
        PotentialValue::Finite(-geom.v0)
    } else if x > 0.0 && x <= geom.b {
        PotentialValue::Finite(geom.v0)
    } else {
        PotentialValue::Finite(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergyBranch {
    /// `-v0 < E < 0`
    BelowZero,
    /// `0 < E < v0`
    MidBand,
    /// `E > v0`
    AboveBarrier,
    /// `E = 0`
    SeamZero,
    /// `E = v0`
    SeamTop,
}

impl EnergyBranch {
    /// Seams are matched exactly; near-seam energies stay on their open branch.
    pub fn classify(energy: f64, v0: f64) -> Result<Self> {
        if !energy.is_finite() {
            return Err(Error::InvalidParameter(format!("energy {energy}")));
        }
        if energy <= -v0 {
            return Err(Error::BelowPotentialMinimum { energy, floor: -v0 });
        }
        Ok(if energy == 0.0 {
            EnergyBranch::SeamZero
        } else if energy == v0 {
            EnergyBranch::SeamTop
        } else if energy < 0.0 {
            EnergyBranch::BelowZero
        } else if energy < v0 {
            EnergyBranch::MidBand
        } else {
            EnergyBranch::AboveBarrier
        })
    }

    pub fn is_seam(self) -> bool {
        matches!(self, EnergyBranch::SeamZero | EnergyBranch::SeamTop)
    }
}

/// A local wavenumber whose square may have either sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wavenumber {
    /// `sqrt(lambda)` for `lambda > 0`
    Oscillatory(f64),
    /// `sqrt(-lambda)` for `lambda < 0`
    Evanescent(f64),
    Zero,
}

impl Wavenumber {
    /// From the signed square `lambda = E - V`.
    pub fn from_signed_square(lambda: f64) -> Self {
        if lambda > 0.0 {
            Wavenumber::Oscillatory(lambda.sqrt())
        } else if lambda < 0.0 {
            Wavenumber::Evanescent((-lambda).sqrt())
        } else {
            Wavenumber::Zero
        }
    }

    pub fn magnitude(self) -> f64 {
        match self {
            Wavenumber::Oscillatory(w) | Wavenumber::Evanescent(w) => w,
            Wavenumber::Zero => 0.0,
        }
    }

    pub fn signed_square(self) -> f64 {
        match self {
            Wavenumber::Oscillatory(w) => w * w,
            Wavenumber::Evanescent(w) => -w * w,
            Wavenumber::Zero => 0.0,
        }
    }
}

/// Branch-resolved wave parameters at energy `E`.
///
/// `k` is the outer-region wavenumber (`kappa` when evanescent), `p` the
/// well wavenumber, `r` the barrier decay constant (`rho` when the barrier
/// region is classically allowed). `q = sqrt(v0)` and `s = sqrt(2 v0)` are
/// the seam-case wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    pub branch: EnergyBranch,
    pub k: Wavenumber,
    pub p: f64,
    pub r: Wavenumber,
    pub q: f64,
    pub s: f64,
}

pub fn wavenumbers(energy: f64, geom: &PotentialGeometry) -> Result<WaveParams> {
    let v0 = geom.v0;
    let branch = EnergyBranch::classify(energy, v0)?;
    // r is a decay constant below the barrier top: sign flipped relative to k.
    let r = match Wavenumber::from_signed_square(v0 - energy) {
        Wavenumber::Oscillatory(w) => Wavenumber::Evanescent(w),
        Wavenumber::Evanescent(w) => Wavenumber::Oscillatory(w),
        Wavenumber::Zero => Wavenumber::Zero,
    };
    let q = v0.sqrt();
    Ok(WaveParams {
        branch,
        k: Wavenumber::from_signed_square(energy),
        p: (energy + v0).sqrt(),
        r,
        q,
        s: (2.0 * v0).sqrt(),
    })
}

/// Solution of `u'' = -lambda u` with `u(0) = 0`, `u'(0) = 1`.
pub(crate) fn gsin(lambda: f64, y: f64) -> f64 {
    if lambda > 0.0 {
        let w = lambda.sqrt();
        (w * y).sin() / w
    } else if lambda < 0.0 {
        let w = (-lambda).sqrt();
        (w * y).sinh() / w
    } else {
        y
    }
}

/// Solution of `u'' = -lambda u` with `u(0) = 1`, `u'(0) = 0`.
pub(crate) fn gcos(lambda: f64, y: f64) -> f64 {
    if lambda > 0.0 {
        (lambda.sqrt() * y).cos()
    } else if lambda < 0.0 {
        ((-lambda).sqrt() * y).cosh()
    } else {
        1.0
    }
}

/// Carry `(u, u')` across a constant-potential interval of length `len`.
pub(crate) fn propagate(lambda: f64, len: f64, value: f64, slope: f64) -> (f64, f64) {
    let sn = gsin(lambda, len);
    let cs = gcos(lambda, len);
    (value * cs + slope * sn, -lambda * value * sn + slope * cs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentBasis {
    /// `c_sin sin(w y) + c_cos cos(w y)`
    Trig,
    /// `c_sin sinh(w y) + c_cos cosh(w y)`
    Hyperbolic,
    /// `c_sin y + c_cos`
    Linear,
}

/// One constant-potential piece of a wavefunction, expanded about `origin`
/// (`y = x - origin`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub origin: f64,
    pub basis: SegmentBasis,
    pub wavenumber: f64,
    pub c_sin: f64,
    pub c_cos: f64,
}

impl Segment {
    /// Segment on `[lo, hi]` with local `E - V = lambda`, fixed by the value
    /// and slope at `origin`.
    pub fn from_local_data(lo: f64, hi: f64, origin: f64, lambda: f64, value: f64, slope: f64) -> Self {
        let (basis, w) = match Wavenumber::from_signed_square(lambda) {
            Wavenumber::Oscillatory(w) => (SegmentBasis::Trig, w),
            Wavenumber::Evanescent(w) => (SegmentBasis::Hyperbolic, w),
            Wavenumber::Zero => (SegmentBasis::Linear, 0.0),
        };
        let c_sin = if w > 0.0 { slope / w } else { slope };
        Segment { lo, hi, origin, basis, wavenumber: w, c_sin, c_cos: value }
    }

    pub fn value(&self, x: f64) -> f64 {
        let y = x - self.origin;
        let w = self.wavenumber;
        match self.basis {
            SegmentBasis::Trig => self.c_sin * (w * y).sin() + self.c_cos * (w * y).cos(),
            SegmentBasis::Hyperbolic => self.c_sin * (w * y).sinh() + self.c_cos * (w * y).cosh(),
            SegmentBasis::Linear => self.c_sin * y + self.c_cos,
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let y = x - self.origin;
        let w = self.wavenumber;
        match self.basis {
            SegmentBasis::Trig => w * (self.c_sin * (w * y).cos() - self.c_cos * (w * y).sin()),
            SegmentBasis::Hyperbolic => w * (self.c_sin * (w * y).cosh() + self.c_cos * (w * y).sinh()),
            SegmentBasis::Linear => self.c_sin,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Largest `|c_sin S| + |c_cos C|` over the segment, times `max(1, w)`
    /// to cover the slope. Rounding error in `value`/`derivative` is about
    /// `EPSILON` times this, which is large when the two terms cancel.
    pub fn term_bound(&self) -> f64 {
        let w = self.wavenumber;
        let at = |x: f64| {
            let y = x - self.origin;
            match self.basis {
                SegmentBasis::Trig => self.c_sin.abs() + self.c_cos.abs(),
                SegmentBasis::Hyperbolic => {
                    (self.c_sin * (w * y).sinh()).abs() + (self.c_cos * (w * y).cosh()).abs()
                }
                SegmentBasis::Linear => (self.c_sin * y).abs() + self.c_cos.abs(),
            }
        };
        at(self.lo).max(at(self.hi)) * w.max(1.0)
    }

    fn scaled(&self, factor: f64) -> Segment {
        Segment { c_sin: self.c_sin * factor, c_cos: self.c_cos * factor, ..*self }
    }
}

/// Closed-form wavefunction on `[-a, a]`, four segments split at `-b, 0, b`.
///
/// `norm` is the L2 norm of the seed solution (slope 1 at the left wall)
/// divided out so far; multiplying values by it recovers the un-normalized
/// eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseWavefunction {
    a: f64,
    b: f64,
    segments: [Segment; 4],
    norm: f64,
}

impl PiecewiseWavefunction {
    pub fn new(a: f64, b: f64, segments: [Segment; 4]) -> Result<Self> {
        let expected = [-a, -b, 0.0, b, a];
        for (i, seg) in segments.iter().enumerate() {
            if seg.lo != expected[i] || seg.hi != expected[i + 1] {
                return Err(Error::InvalidParameter(format!(
                    "segment {i} spans [{}, {}], expected [{}, {}]",
                    seg.lo,
                    seg.hi,
                    expected[i],
                    expected[i + 1]
                )));
            }
        }
        Ok(Self { a, b, segments, norm: 1.0 })
    }

    pub fn segments(&self) -> &[Segment; 4] {
        &self.segments
    }

    pub fn half_width(&self) -> f64 {
        self.a
    }

    pub fn block_half_width(&self) -> f64 {
        self.b
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn breakpoints(&self) -> [f64; 3] {
        [-self.b, 0.0, self.b]
    }

    pub fn same_domain(&self, other: &PiecewiseWavefunction) -> bool {
        self.a == other.a && self.b == other.b
    }

    /// Segment that owns `x`; seams go to the left segment.
    fn segment_for(&self, x: f64) -> &Segment {
        if x <= -self.b {
            &self.segments[0]
        } else if x <= 0.0 {
            &self.segments[1]
        } else if x <= self.b {
            &self.segments[2]
        } else {
            &self.segments[3]
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if x.is_nan() || x.abs() > self.a {
            Err(Error::OutOfDomain { x, a: self.a })
        } else {
            Ok(())
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        if x.abs() == self.a {
            return Ok(0.0);
        }
        Ok(self.segment_for(x).value(x))
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.segment_for(x).derivative(x))
    }

    /// `n` points evenly spaced over `[-a, a]`, endpoints included.
    pub fn sample(&self, n: usize) -> Vec<(f64, f64)> {
        let n = n.max(2);
        let h = 2.0 * self.a / (n - 1) as f64;
        (0..n)
            .map(|i| {
                let x = if i == n - 1 { self.a } else { -self.a + i as f64 * h };
                (x, self.evaluate(x).unwrap_or(0.0))
            })
            .collect()
    }

    /// Largest |psi| over a dense per-segment sampling.
    pub fn max_abs(&self) -> f64 {
        const PER_SEGMENT: usize = 2048;
        self.segments
            .iter()
            .flat_map(|seg| {
                let h = (seg.hi - seg.lo) / PER_SEGMENT as f64;
                (0..=PER_SEGMENT).map(move |i| seg.value(seg.lo + i as f64 * h).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Worst value/slope jump across `-b, 0, b`, relative to `max |psi|`.
    pub fn seam_residual(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        self.seam_jump() / scale
    }

    /// Worst absolute value/slope jump across `-b, 0, b`.
    pub fn seam_jump(&self) -> f64 {
        self.segments
            .windows(2)
            .map(|pair| {
                let x = pair[0].hi;
                let dv = (pair[0].value(x) - pair[1].value(x)).abs();
                let ds = (pair[0].derivative(x) - pair[1].derivative(x)).abs();
                dv.max(ds)
            })
            .fold(0.0, f64::max)
    }

    /// Multiply by `1 / factor` and record it in `norm`.
    pub(crate) fn divided_by(&self, factor: f64) -> PiecewiseWavefunction {
        let inv = 1.0 / factor;
        PiecewiseWavefunction {
            a: self.a,
            b: self.b,
            segments: self.segments.map(|s| s.scaled(inv)),
            norm: self.norm * factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    Generic,
    ZeroEnergy,
    BarrierTop,
}

impl StateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Generic => "generic",
            StateKind::ZeroEnergy => "zero-energy",
            StateKind::BarrierTop => "barrier-top",
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub index: usize,
    pub energy: f64,
    pub kind: StateKind,
    pub coefficients: CoefficientSet,
    /// Normalized.
    pub wavefunction: PiecewiseWavefunction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub geometry: PotentialGeometry,
    pub states: Vec<Eigenstate>,
    pub diagnostics: DiagnosticsReport,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    pub fn state_of_kind(&self, kind: StateKind) -> Option<&Eigenstate> {
        self.states.iter().find(|s| s.kind == kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(v0: f64) -> PotentialGeometry {
        PotentialGeometry::reference(v0).unwrap()
    }

    #[test]
    fn potential_regions() {
        let g = geom(5.0);
        assert_eq!(potential_at(-1.0, &g), PotentialValue::Finite(-5.0));
        assert_eq!(potential_at(1.0, &g), PotentialValue::Finite(5.0));
        assert_eq!(potential_at(0.0, &g), PotentialValue::Finite(-5.0));
        assert_eq!(potential_at(-2.0, &g), PotentialValue::Finite(-5.0));
        assert_eq!(potential_at(2.0, &g), PotentialValue::Finite(5.0));
        assert_eq!(potential_at(3.0, &g), PotentialValue::Finite(0.0));
        assert_eq!(potential_at(-4.0, &g), PotentialValue::Finite(0.0));
        assert_eq!(potential_at(6.0, &g), PotentialValue::Wall);
        assert_eq!(potential_at(-7.0, &g), PotentialValue::Wall);
    }

    #[test]
    fn geometry_validation() {
        assert!(PotentialGeometry::new(6.0, 6.0, 1.0).is_err());
        assert!(PotentialGeometry::new(6.0, 0.0, 1.0).is_err());
        assert!(PotentialGeometry::new(6.0, 2.0, -1.0).is_err());
        assert!(PotentialGeometry::new(f64::NAN, 2.0, 1.0).is_err());
        let g = geom(0.0);
        assert_eq!(g.d(), 4.0);
    }

    #[test]
    fn wavenumbers_at_zero_energy() {
        let w = wavenumbers(0.0, &PotentialGeometry::reference(4.0).unwrap()).unwrap();
        assert_eq!(w.branch, EnergyBranch::SeamZero);
        assert_eq!(w.q, 2.0);
        assert!((w.s - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(w.p, 2.0);
        assert_eq!(w.r, Wavenumber::Evanescent(2.0));
        assert_eq!(w.k, Wavenumber::Zero);
    }

    #[test]
    fn wavenumbers_at_barrier_top() {
        let w = wavenumbers(2.0, &PotentialGeometry::reference(2.0).unwrap()).unwrap();
        assert_eq!(w.branch, EnergyBranch::SeamTop);
        assert_eq!(w.r, Wavenumber::Zero);
        assert_eq!(w.p, 2.0);
        assert_eq!(w.s, 2.0);
    }

    #[test]
    fn wavenumbers_deep_state() {
        // arithmetic on E = -3.733845, v0 = 5
        let w = wavenumbers(-3.733845, &geom(5.0)).unwrap();
        assert_eq!(w.branch, EnergyBranch::BelowZero);
        match w.k {
            Wavenumber::Evanescent(kappa) => assert!((kappa - 1.932_315_968).abs() < 1e-8),
            other => panic!("expected evanescent k, got {other:?}"),
        }
        assert!((w.p - 1.125_235_531).abs() < 1e-8);
    }

    #[test]
    fn wavenumbers_reject_below_floor() {
        assert!(matches!(wavenumbers(-5.0, &geom(5.0)), Err(Error::BelowPotentialMinimum { .. })));
        assert!(wavenumbers(-5.1, &geom(5.0)).is_err());
    }

    #[test]
    fn propagate_matches_closed_form() {
        let (u, du) = propagate(4.0, 0.3, 0.0, 1.0);
        assert!((u - (0.6f64).sin() / 2.0).abs() < 1e-15);
        assert!((du - (0.6f64).cos()).abs() < 1e-15);
        let (u, du) = propagate(0.0, 2.0, 1.0, -0.5);
        assert_eq!((u, du), (0.0, -0.5));
    }

    #[test]
    fn wall_segment_vanishes_at_wall() {
        let seg = Segment::from_local_data(-6.0, -2.0, -6.0, 0.3, 0.0, 1.0);
        let others = [
            Segment::from_local_data(-2.0, 0.0, -2.0, 1.0, 0.1, 0.2),
            Segment::from_local_data(0.0, 2.0, 2.0, -1.0, 0.1, 0.2),
            Segment::from_local_data(2.0, 6.0, 6.0, 0.3, 0.0, 1.0),
        ];
        let psi = PiecewiseWavefunction::new(6.0, 2.0, [seg, others[0], others[1], others[2]]).unwrap();
        assert_eq!(psi.evaluate(-6.0).unwrap(), 0.0);
        assert_eq!(psi.evaluate(6.0).unwrap(), 0.0);
        assert!(psi.evaluate(6.5).is_err());
        assert_eq!(seg.basis, SegmentBasis::Trig);
        assert_eq!(others[1].basis, SegmentBasis::Hyperbolic);
    }

    #[test]
    fn misplaced_segments_rejected() {
        let s = Segment::from_local_data(-6.0, -2.0, -6.0, 0.0, 0.0, 1.0);
        assert!(PiecewiseWavefunction::new(6.0, 2.0, [s; 4]).is_err());
    }
}
