//! Quantization conditions and matching coefficients.
//!
//! Three conditions cover the spectrum:
//!
//! * [`f_zero_energy`]: `E = 0` is an eigenvalue iff `f(v0) = 0`;
//! * [`g_barrier_top`]: `E = v0` is an eigenvalue iff `g(v0) = 0`;
//! * [`char_generic`]: every other eigenvalue is a zero of the expanded
//!   4x4 matching determinant.
//!
//! `char_generic` carries degenerate factors (`k^2` and `r`) that vanish at
//! the seams whether or not a state sits there. [`char_reduced`] divides
//! them out; it is continuous across both seams, equals `f(v0)` at `E = 0`
//! and `g(v0) / 2` at `E = v0`, and is what the root scanner uses.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{
    gcos, gsin, propagate, EnergyBranch, PiecewiseWavefunction, PotentialGeometry, Segment, StateKind,
};

/// Largest relative null-vector residual accepted when building a state.
pub const SPURIOUS_ROOT_RESIDUAL: f64 = 1e-6;

fn require_positive_v0(v0: f64) -> Result<()> {
    if v0 > 0.0 && v0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("need v0 > 0, got {v0}")))
    }
}

fn f_terms(v0: f64, geom: &PotentialGeometry) -> [f64; 3] {
    let q = v0.sqrt();
    let (b, d) = (geom.b(), geom.d());
    let (sqb, cqb) = (q * b).sin_cos();
    let qd2 = q * q * d * d;
    [2.0 * q * d * cqb, (1.0 - qd2) * sqb, (1.0 + qd2) * cqb * (q * b).tanh()]
}

/// Zero-energy condition `f(v0)`; only `a` and `b` are taken from `geom`.
pub fn f_zero_energy(v0: f64, geom: &PotentialGeometry) -> Result<f64> {
    require_positive_v0(v0)?;
    Ok(f_terms(v0, geom).iter().sum())
}

/// Sum of the magnitudes of the terms of `f`; residuals are judged against it.
pub fn f_zero_energy_scale(v0: f64, geom: &PotentialGeometry) -> f64 {
    f_terms(v0, geom).iter().map(|t| t.abs()).sum()
}

fn g_terms(v0: f64, geom: &PotentialGeometry) -> [f64; 2] {
    let q = v0.sqrt();
    let s = q * std::f64::consts::SQRT_2;
    let (b, d) = (geom.b(), geom.d());
    let qb = q * b;
    let (s2qd, c2qd) = (2.0 * q * d).sin_cos();
    let (ssb, csb) = (s * b).sin_cos();
    [
        std::f64::consts::SQRT_2 * csb * (qb + qb * c2qd + 2.0 * s2qd),
        -ssb * (1.0 - 3.0 * c2qd + 2.0 * qb * s2qd),
    ]
}

/// Barrier-top condition `g(v0)`; only `a` and `b` are taken from `geom`.
pub fn g_barrier_top(v0: f64, geom: &PotentialGeometry) -> Result<f64> {
    require_positive_v0(v0)?;
    Ok(g_terms(v0, geom).iter().sum())
}

pub fn g_barrier_top_scale(v0: f64, geom: &PotentialGeometry) -> f64 {
    let q = v0.sqrt();
    let s = q * std::f64::consts::SQRT_2;
    let (b, d) = (geom.b(), geom.d());
    let qb = q * b;
    let (s2qd, c2qd) = (2.0 * q * d).sin_cos();
    let (ssb, csb) = (s * b).sin_cos();
    std::f64::consts::SQRT_2 * csb.abs() * (qb + (qb * c2qd).abs() + (2.0 * s2qd).abs())
        + ssb.abs() * (1.0 + (3.0 * c2qd).abs() + (2.0 * qb * s2qd).abs())
}

/// Expanded generic quantization condition.
///
/// On `0 < E < v0` this is the expansion of the matching determinant in
/// terms of `k`, `p`, `r`. Below zero `k -> i kappa` keeps it real. Above the
/// barrier `r -> i rho` leaves an overall factor `i` (divided out) and turns
/// `tanh(rb)` into `tan(rho b)`; the branch is multiplied by `cos(rho b)`
/// to remove the poles, which adds no zeros.
pub fn char_generic(energy: f64, geom: &PotentialGeometry) -> Result<f64> {
    let v0 = geom.v0();
    let (b, d) = (geom.b(), geom.d());
    let branch = EnergyBranch::classify(energy, v0)?;
    let p = (energy + v0).sqrt();
    let (spb, cpb) = (p * b).sin_cos();
    Ok(match branch {
        EnergyBranch::SeamZero | EnergyBranch::SeamTop => {
            return Err(Error::SeamEnergy { energy });
        }
        EnergyBranch::MidBand => {
            let k = energy.sqrt();
            let r = (v0 - energy).sqrt();
            let (skd, ckd) = (k * d).sin_cos();
            let s2kd = (2.0 * k * d).sin();
            2.0 * r * (k * k * ckd * ckd - p * p * skd * skd) * spb
                + 2.0 * k * p * r * cpb * s2kd
                + (k * (r * r - p * p) * spb * s2kd + 2.0 * p * (k * k * ckd * ckd + r * r * skd * skd) * cpb)
                    * (r * b).tanh()
        }
        EnergyBranch::BelowZero => {
            let kappa = (-energy).sqrt();
            let r = (v0 - energy).sqrt();
            let (shd, chd) = ((kappa * d).sinh(), (kappa * d).cosh());
            let sh2d = (2.0 * kappa * d).sinh();
            2.0 * r * (p * p * shd * shd - kappa * kappa * chd * chd) * spb - 2.0 * kappa * p * r * cpb * sh2d
                + (-kappa * (r * r - p * p) * spb * sh2d
                    - 2.0 * p * (kappa * kappa * chd * chd + r * r * shd * shd) * cpb)
                    * (r * b).tanh()
        }
        EnergyBranch::AboveBarrier => {
            let k = energy.sqrt();
            let rho = (energy - v0).sqrt();
            let (skd, ckd) = (k * d).sin_cos();
            let s2kd = (2.0 * k * d).sin();
            let (srb, crb) = (rho * b).sin_cos();
            2.0 * rho * (k * k * ckd * ckd - p * p * skd * skd) * spb * crb
                + 2.0 * k * p * rho * cpb * s2kd * crb
                + (-k * (rho * rho + p * p) * spb * s2kd
                    + 2.0 * p * (k * k * ckd * ckd - rho * rho * skd * skd) * cpb)
                    * srb
        }
    })
}

/// Seam-regular characteristic function, defined for every `E >= -v0`.
///
/// Equals `char_generic / (2 E r)` up to a positive factor (`cosh(rb)`
/// below the barrier top, `cosh^2(kappa d)` below zero). Its zeros are
/// exactly the eigenvalues, seam states included. It also vanishes at the
/// floor `E = -v0`, which is never an eigenvalue.
pub fn char_reduced(energy: f64, geom: &PotentialGeometry) -> Result<f64> {
    let v0 = geom.v0();
    if !energy.is_finite() || energy < -v0 {
        return Err(Error::BelowPotentialMinimum { energy, floor: -v0 });
    }
    let (b, d) = (geom.b(), geom.d());
    let (cc, sk) = if energy > 0.0 {
        let k = energy.sqrt();
        ((k * d).cos(), (k * d).sin() / k)
    } else if energy < 0.0 {
        let kappa = (-energy).sqrt();
        (1.0, (kappa * d).tanh() / kappa)
    } else {
        (1.0, d)
    };
    let p = (energy + v0).max(0.0).sqrt();
    let (spb, cpb) = (p * b).sin_cos();
    let r2 = v0 - energy;
    let (ch, shr) = if r2 > 0.0 {
        let r = r2.sqrt();
        (1.0, (r * b).tanh() / r)
    } else if r2 < 0.0 {
        let rho = (-r2).sqrt();
        ((rho * b).cos(), (rho * b).sin() / rho)
    } else {
        (1.0, b)
    };
    Ok((cc * cc - p * p * sk * sk) * spb * ch
        + 2.0 * p * sk * cc * cpb * ch
        + ((r2 - p * p) * sk * cc * spb + p * (cc * cc + r2 * sk * sk) * cpb) * shr)
}

/// [`char_reduced`] divided by `(1 + |E| + v0)^{3/2}`; sign-preserving.
pub fn char_scaled(energy: f64, geom: &PotentialGeometry) -> Result<f64> {
    let scale = (1.0 + energy.abs() + geom.v0()).powf(1.5);
    Ok(char_reduced(energy, geom)? / scale)
}

/// Real 4x4 matching system in the unknowns `(A, B, C, D)` of
/// [`CoefficientSet`]. Rows: value and slope at `x = -b`, then at `x = b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchMatrix {
    pub entries: Matrix4<f64>,
}

impl MatchMatrix {
    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    /// `|M v| / (|M| |v|)`.
    pub fn relative_residual(&self, coeffs: &CoefficientSet) -> f64 {
        let v = coeffs.as_vector();
        let mv = self.entries * v;
        mv.norm() / (self.norm() * v.norm())
    }
}

/// Assemble the matching matrix at any `E >= -v0`, seams included.
///
/// The well and barrier pieces are expanded about `x = 0`, which builds
/// continuity at the origin into the unknowns.
pub fn det_match(energy: f64, geom: &PotentialGeometry) -> Result<(MatchMatrix, f64)> {
    let v0 = geom.v0();
    if !energy.is_finite() || energy <= -v0 {
        return Err(Error::BelowPotentialMinimum { energy, floor: -v0 });
    }
    let (b, d) = (geom.b(), geom.d());
    let (lam_p, lam_r) = (energy + v0, energy - v0);
    let (sk, ck) = (gsin(energy, d), gcos(energy, d));
    let (sp, cp) = (gsin(lam_p, b), gcos(lam_p, b));
    let (sr, cr) = (gsin(lam_r, b), gcos(lam_r, b));
    #[rustfmt::skip]
    let entries = Matrix4::new(
        sk,  sp,  -cp,          0.0,
        ck,  -cp, -lam_p * sp,  0.0,
        0.0, sr,  cr,           sk,
        0.0, cr,  -lam_r * sr,  -ck,
    );
    let m = MatchMatrix { entries };
    let det = m.determinant();
    Ok((m, det))
}

/// Generic-case determinant in its textbook form, evaluated in complex
/// arithmetic so it continues to every branch. Used only as an
/// independent cross-check of [`char_generic`].
pub fn printed_determinant(energy: f64, geom: &PotentialGeometry) -> Result<Complex64> {
    let v0 = geom.v0();
    if EnergyBranch::classify(energy, v0)?.is_seam() {
        return Err(Error::SeamEnergy { energy });
    }
    let (b, d) = (geom.b(), geom.d());
    let k = Complex64::new(energy, 0.0).sqrt();
    let p = Complex64::new(energy + v0, 0.0).sqrt();
    let r = Complex64::new(v0 - energy, 0.0).sqrt();
    let zero = Complex64::new(0.0, 0.0);
    let (pb, rb, kd) = (p * b, r * b, k * d);
    #[rustfmt::skip]
    let m = Matrix4::new(
        -r * pb.sin(),     pb.cos(),     zero,             kd.sin(),
        r * p * pb.cos(),  p * pb.sin(), zero,             k * kd.cos(),
        p * rb.sinh(),     rb.cosh(),    kd.sin(),         zero,
        r * p * rb.cosh(), r * rb.sinh(), -k * kd.cos(),   zero,
    );
    Ok(m.determinant())
}

/// Zero-energy matching matrix in its textbook form (unknowns `B, C, D, A`).
pub fn printed_zero_energy_matrix(v0: f64, geom: &PotentialGeometry) -> Matrix4<f64> {
    let q = v0.sqrt();
    let (b, d) = (geom.b(), geom.d());
    let (sqb, cqb) = (q * b).sin_cos();
    let (shqb, chqb) = ((q * b).sinh(), (q * b).cosh());
    #[rustfmt::skip]
    let m = Matrix4::new(
        -sqb,     cqb,      0.0,  d,
        q * cqb,  q * sqb,  0.0,  1.0,
        shqb,     chqb,     d,    0.0,
        q * chqb, q * shqb, -1.0, 0.0,
    );
    m
}

/// Barrier-top matching matrix in its textbook form (unknowns `B, C, D, A`).
pub fn printed_barrier_top_matrix(v0: f64, geom: &PotentialGeometry) -> Matrix4<f64> {
    let q = v0.sqrt();
    let s = q * std::f64::consts::SQRT_2;
    let (b, d) = (geom.b(), geom.d());
    let (ssb, csb) = (s * b).sin_cos();
    let (sqd, cqd) = (q * d).sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
        -ssb,    csb,     0.0,      sqd,
        s * csb, s * ssb, 0.0,      q * cqd,
        s * b,   1.0,     sqd,      0.0,
        s,       0.0,     -q * cqd, 0.0,
    );
    m
}

/// Matching coefficients of an eigenstate.
///
/// `a = psi'(-a_wall)` (pinned to 1), `b = psi'(0)`, `c = psi(0)`,
/// `d = psi'(a_wall)`. In every branch the outer pieces are
/// `a * S(x + a_wall)` and `d * S(x - a_wall)` with `S` the local
/// sine-like solution (`sin(k y)/k`, `sinh(kappa y)/kappa` or `y`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl CoefficientSet {
    pub fn as_vector(&self) -> nalgebra::Vector4<f64> {
        nalgebra::Vector4::new(self.a, self.b, self.c, self.d)
    }
}

fn check_kind(kind: StateKind, energy: f64, geom: &PotentialGeometry) -> Result<()> {
    let branch = EnergyBranch::classify(energy, geom.v0())?;
    let ok = match kind {
        StateKind::ZeroEnergy => energy == 0.0 && geom.v0() > 0.0,
        StateKind::BarrierTop => energy == geom.v0() && geom.v0() > 0.0,
        StateKind::Generic => !branch.is_seam(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "energy {energy} is inconsistent with a {kind} state at v0 = {}",
            geom.v0()
        )))
    }
}

/// Left-wall solution (slope 1) carried to `x = 0`: `(psi(0), psi'(0))`.
fn left_at_origin(energy: f64, geom: &PotentialGeometry) -> ((f64, f64), (f64, f64)) {
    let at_minus_b = propagate(energy, geom.d(), 0.0, 1.0);
    let at_origin = propagate(energy + geom.v0(), geom.b(), at_minus_b.0, at_minus_b.1);
    (at_minus_b, at_origin)
}

/// Right-wall solution (slope 1) carried back to `x = 0`.
fn right_at_origin(energy: f64, geom: &PotentialGeometry) -> ((f64, f64), (f64, f64)) {
    let at_b = propagate(energy, -geom.d(), 0.0, 1.0);
    let at_origin = propagate(energy - geom.v0(), -geom.b(), at_b.0, at_b.1);
    (at_b, at_origin)
}

/// Wronskian of the left- and right-wall solutions at the origin.
///
/// Zero exactly at eigenvalues and continuous in `E`; used to polish a
/// root to float precision so the two shooting halves join cleanly.
pub fn origin_mismatch(energy: f64, geom: &PotentialGeometry) -> f64 {
    let (_, (c, b)) = left_at_origin(energy, geom);
    let (_, (u0, du0)) = right_at_origin(energy, geom);
    c * du0 - b * u0
}

/// Interface at which the left- and right-wall solutions are joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Junction {
    WellEdge,
    Origin,
    BarrierEdge,
}

/// Scale factor taking `(rv, rs)` onto `(lv, ls)`: from the values unless
/// the right-hand value is small against its slope.
fn join_ratio(left: (f64, f64), right: (f64, f64), w: f64) -> f64 {
    if right.0.abs() * w >= right.1.abs() {
        left.0 / right.0
    } else {
        left.1 / right.1
    }
}

fn coefficients_at(junction: Junction, energy: f64, geom: &PotentialGeometry) -> CoefficientSet {
    let (left_b, (c, b)) = left_at_origin(energy, geom);
    let (right_b, (u0, du0)) = right_at_origin(energy, geom);
    let v0 = geom.v0();
    let w = (energy + v0).abs().sqrt().max((energy - v0).abs().sqrt()).max(1.0 / geom.a());
    match junction {
        Junction::Origin => CoefficientSet { a: 1.0, b, c, d: join_ratio((c, b), (u0, du0), w) },
        Junction::BarrierEdge => {
            let left = propagate(energy - v0, geom.b(), c, b);
            CoefficientSet { a: 1.0, b, c, d: join_ratio(left, right_b, w) }
        }
        Junction::WellEdge => {
            let right = propagate(energy + v0, -geom.b(), u0, du0);
            let d = join_ratio(left_b, right, w);
            CoefficientSet { a: 1.0, b: d * du0, c: d * u0, d }
        }
    }
}

/// Estimated C1 error below which the first junction tried is kept.
const CLEAN_JOIN: f64 = 1e-13;

/// Solve the matching equations with `A = 1`.
///
/// The left-wall solution (slope 1) and the right-wall solution are joined
/// at `-b`, `0` or `b`, whichever gives the wavefunction with the smallest
/// estimated C1 error (see [`build_wavefunction`]); a state confined behind
/// the barrier joins cleanly only at `b`. The result must also satisfy the
/// 4x4 matching system to 1e-6.
pub fn coefficients_for(kind: StateKind, energy: f64, geom: &PotentialGeometry) -> Result<CoefficientSet> {
    check_kind(kind, energy, geom)?;
    let (m, _) = det_match(energy, geom)?;
    let mut best: Option<(f64, CoefficientSet)> = None;
    let mut least_residual = f64::INFINITY;
    for junction in [Junction::Origin, Junction::BarrierEdge, Junction::WellEdge] {
        let coeffs = coefficients_at(junction, energy, geom);
        let residual = m.relative_residual(&coeffs);
        if residual.is_nan() || residual > SPURIOUS_ROOT_RESIDUAL {
            least_residual = least_residual.min(residual);
            continue;
        }
        let (score, _) = assemble(energy, geom, &coeffs)?;
        if best.is_none_or(|(s, _)| score < s) {
            best = Some((score, coeffs));
        }
        if score <= CLEAN_JOIN {
            break;
        }
    }
    best.map(|(_, c)| c).ok_or(Error::SpuriousRoot { energy, residual: least_residual })
}

/// Best of the four piece combinations, with its error estimate: seam jump
/// plus rounding in the inner pieces, both relative to `max |psi|`.
fn assemble(
    energy: f64,
    geom: &PotentialGeometry,
    coeffs: &CoefficientSet,
) -> Result<(f64, PiecewiseWavefunction)> {
    let (a, b, v0) = (geom.a(), geom.b(), geom.v0());
    let (left_b, _) = left_at_origin(energy, geom);
    let (right_b, _) = right_at_origin(energy, geom);
    let outer_left = Segment::from_local_data(-a, -b, -a, energy, 0.0, coeffs.a);
    let outer_right = Segment::from_local_data(b, a, a, energy, 0.0, coeffs.d);
    let wells = [
        Segment::from_local_data(-b, 0.0, -b, energy + v0, coeffs.a * left_b.0, coeffs.a * left_b.1),
        Segment::from_local_data(-b, 0.0, 0.0, energy + v0, coeffs.c, coeffs.b),
    ];
    let barriers = [
        Segment::from_local_data(0.0, b, b, energy - v0, coeffs.d * right_b.0, coeffs.d * right_b.1),
        Segment::from_local_data(0.0, b, 0.0, energy - v0, coeffs.c, coeffs.b),
    ];
    let mut best: Option<(f64, PiecewiseWavefunction)> = None;
    for well in &wells {
        for barrier in &barriers {
            let psi = PiecewiseWavefunction::new(a, b, [outer_left, *well, *barrier, outer_right])?;
            let scale = psi.max_abs();
            let score = (psi.seam_jump() + f64::EPSILON * (well.term_bound() + barrier.term_bound())) / scale;
            if best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((score, psi));
            }
        }
    }
    Ok(best.expect("four candidates"))
}

/// Closed-form (un-normalized) wavefunction for a coefficient set.
///
/// Outer pieces are expanded about their walls. The well piece comes from
/// the left solution at `-b` or from `(C, B)` at the origin, the barrier
/// piece from the right solution at `b` or from `(C, B)`. Of the four
/// combinations the one with the smallest estimated C1 error is kept, so a
/// piece is never carried against its own exponential growth.
pub fn build_wavefunction(
    energy: f64,
    geom: &PotentialGeometry,
    coeffs: &CoefficientSet,
) -> Result<PiecewiseWavefunction> {
    assemble(energy, geom, coeffs).map(|(_, psi)| psi)
}

/// Closed-form coefficients, expressed in the textbook amplitude
/// convention for each case, with `A = 1`.
///
/// Conventions: zero-energy `A(x+a)`, `B sin qx + C cos qx`, `D(x-a)`;
/// generic `A sin k(x+a)`, `B r sin px + C cos px`, `D sin k(x-a)`;
/// barrier-top `A sin q(x+a)`, `B sin sx + C cos sx`, `D sin q(x-a)`.
/// The generic case uses `p b` for the well phase and the sign of the
/// `sinh(rb)` term in `D` that the `x = b` value equation implies.
/// Returns `None` off the real mid-band branch or where `cot(k d)` or
/// `cot(q d)` is singular.
pub fn printed_coefficients(
    kind: StateKind,
    energy: f64,
    geom: &PotentialGeometry,
) -> Option<CoefficientSet> {
    let (b, d, v0) = (geom.b(), geom.d(), geom.v0());
    let q = v0.sqrt();
    match kind {
        StateKind::ZeroEnergy => {
            if v0 <= 0.0 {
                return None;
            }
            let (sqb, cqb) = (q * b).sin_cos();
            let (sh, ch) = ((q * b).sinh(), (q * b).cosh());
            Some(CoefficientSet {
                a: 1.0,
                b: cqb / q - d * sqb,
                c: d * cqb + sqb / q,
                d: (sh * (q * d * sqb - cqb) - ch * (q * d * cqb + sqb)) / (d * q),
            })
        }
        StateKind::Generic => {
            if !(energy > 0.0 && energy < v0) {
                return None;
            }
            let k = energy.sqrt();
            let p = (energy + v0).sqrt();
            let r = (v0 - energy).sqrt();
            let (skd, ckd) = (k * d).sin_cos();
            if skd.abs() < 1e-8 {
                return None;
            }
            let cot = ckd / skd;
            let (spb, cpb) = (p * b).sin_cos();
            let (sh, ch) = ((r * b).sinh(), (r * b).cosh());
            Some(CoefficientSet {
                a: 1.0,
                b: k * cpb * ckd / (p * r) - spb * skd / r,
                c: k * spb * ckd / p + cpb * skd,
                d: -sh * (k * cpb * cot - p * spb) / r - ch * (p * cpb + k * cot * spb) / p,
            })
        }
        StateKind::BarrierTop => {
            if v0 <= 0.0 {
                return None;
            }
            let s = q * std::f64::consts::SQRT_2;
            let (ssb, csb) = (s * b).sin_cos();
            let (sqd, cqd) = (q * d).sin_cos();
            if sqd.abs() < 1e-8 {
                return None;
            }
            let cot = cqd / sqd;
            let r2 = std::f64::consts::FRAC_1_SQRT_2;
            Some(CoefficientSet {
                a: 1.0,
                b: r2 * csb * cqd - ssb * sqd,
                c: r2 * ssb * cqd + csb * sqd,
                d: r2 * (2.0 * b * q - cot) * ssb - (1.0 + b * q * cot) * csb,
            })
        }
    }
}

/// Re-express solved coefficients in the textbook convention of
/// [`printed_coefficients`] and rescale so that `A = 1`.
pub fn to_printed_convention(
    kind: StateKind,
    energy: f64,
    geom: &PotentialGeometry,
    c: &CoefficientSet,
) -> CoefficientSet {
    let v0 = geom.v0();
    let q = v0.sqrt();
    let (a, b, d) = match kind {
        StateKind::ZeroEnergy => (c.a, c.b / q, c.d),
        StateKind::Generic => {
            let k = energy.sqrt();
            let p = (energy + v0).sqrt();
            let r = (v0 - energy).sqrt();
            (c.a / k, c.b / (r * p), c.d / k)
        }
        StateKind::BarrierTop => (c.a / q, c.b / (q * std::f64::consts::SQRT_2), c.d / q),
    };
    CoefficientSet { a: 1.0, b: b / a, c: c.c / a, d: d / a }
}
